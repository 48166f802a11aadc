#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "eqcover/ode.hpp"

namespace eqcover {

struct LinearizedModel {
    Mat A;  // df/dx at the reference point
    Mat B;  // df/du at the reference point
};

// Control-affine plant xdot = f(x,u) = g(x) + h(x) u. f is never stored
// separately; eval() always assembles it from drift and actuation, so the
// affine structure holds by construction. Saturation is applied inside eval.
class ControlAffineSystem {
public:
    using DriftFn = std::function<Vec(const Vec&)>;
    using ActuationFn = std::function<Mat(const Vec&)>;
    // (x, u) -> (df/dx, df/du), evaluated pre-saturation
    using JacobianFn = std::function<std::pair<Mat, Mat>(const Vec&, const Vec&)>;

    ControlAffineSystem(std::string name, int state_dim, int control_dim, DriftFn drift,
                        ActuationFn actuation, Vec u_min, Vec u_max, Vec x0, Vec u0,
                        JacobianFn analytic_jacobian = nullptr);

    const std::string& name() const { return name_; }
    int state_dim() const { return n_; }
    int control_dim() const { return m_; }
    const Vec& equilibrium_state() const { return x0_; }
    const Vec& trim_control() const { return u0_; }
    const Vec& control_min() const { return u_min_; }
    const Vec& control_max() const { return u_max_; }
    bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

    Vec drift(const Vec& x) const { return drift_(x); }
    Mat actuation(const Vec& x) const { return actuation_(x); }

    Vec clamp_control(const Vec& u) const;

    // g(x) + h(x) clamp(u). Throws DynamicsNaN on non-finite input or output.
    Vec eval(const Vec& x, const Vec& u) const;

    // g(x) + h(x) u without saturation (used by gradients and diagnostics).
    Vec eval_unclamped(const Vec& x, const Vec& u) const;

    // (df/dx, df/du) at (x, u), analytic where provided, else central differences.
    std::pair<Mat, Mat> jacobians(const Vec& x, const Vec& u) const;

    LinearizedModel linearize(const Vec& x_ref, const Vec& u_ref) const;

private:
    std::string name_;
    int n_;
    int m_;
    DriftFn drift_;
    ActuationFn actuation_;
    Vec u_min_, u_max_, x0_, u0_;
    JacobianFn jacobian_;
};

ControlAffineSystem make_double_integrator(double u_limit = 10.0);

struct CartDoublePendulumParams {
    double cart_mass = 1.0;
    double mass1 = 0.1;  // point mass at the end of link 1
    double mass2 = 0.1;  // point mass at the end of link 2
    double length1 = 0.5;
    double length2 = 0.5;
    double gravity = 9.81;
    double force_limit = 20.0;
};

// 6 states [cart position, joint angles from upright, velocities], 1 control
// (horizontal cart force). Upright equilibrium at the origin.
ControlAffineSystem make_cart_double_pendulum(const CartDoublePendulumParams& p = {});

struct QuadrotorParams {
    double mass = 0.5;
    double inertia_x = 2.3e-3;
    double inertia_y = 2.3e-3;
    double inertia_z = 4.0e-3;
    double arm_length = 0.17;
    double yaw_torque_coeff = 0.016;  // metres of equivalent arm per unit thrust
    double gravity = 9.81;
    double thrust_max_factor = 4.0;  // per-rotor max as a multiple of hover trim
};

// 12 states [world position, roll/pitch/yaw, body linear velocity, body angular
// velocity], 4 controls (rotor thrusts). Rotor layout: rotors 1 and 2 sit on the
// +x/-x arms (spinning one way), rotors 3 and 4 on the +y/-y arms (spinning the
// other way); so pitch torque = l (F2 - F1), roll torque = l (F3 - F4) and yaw
// torque = c (F1 + F2 - F3 - F4). Hover trim is m g / 4 per rotor.
ControlAffineSystem make_quadrotor(const QuadrotorParams& p = {});

// Linear model A (x - x0) + B (u - u0) wrapped as a control-affine system
// (the planning model for plants that are only known near an equilibrium).
ControlAffineSystem make_lti_system(const Mat& A, const Mat& B, const Vec& x0, const Vec& u0,
                                    const Vec& u_min, const Vec& u_max,
                                    std::string name = "lti");

}  // namespace eqcover
