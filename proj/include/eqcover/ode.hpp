#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "eqcover/errors.hpp"

namespace eqcover {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Uniform time grid. Point k is t_start + k*dt, computed by multiplication so
// long grids carry no accumulated round-off drift.
struct TimeGrid {
    double t_start = 0.0;
    double dt = 1.0 / 200.0;
    int n_steps = 1;

    double time(int k) const { return t_start + static_cast<double>(k) * dt; }
    double t_end() const { return time(n_steps); }
    int n_points() const { return n_steps + 1; }
};

// Time-varying vector field xdot = f(t, x) with a declared state dimension.
struct VectorField {
    int dim = 0;
    std::function<Vec(double, const Vec&)> f;

    Vec operator()(double t, const Vec& x) const { return f(t, x); }
};

// Classical fixed-step RK4. Throws IntegrationDiverged if the update is not finite.
Vec rk4_step(const VectorField& field, double t, const Vec& x, double dt);

// Integrates over the grid; returns n_steps+1 states, element 0 equal to x0.
std::vector<Vec> integrate(const VectorField& field, const TimeGrid& grid, const Vec& x0);

inline constexpr double kDefaultFdEps = 1e-5;

// Central-difference Jacobian: column j = (map(x+eps*e_j) - map(x-eps*e_j)) / (2 eps).
Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& map, const Vec& x,
                         double eps = kDefaultFdEps);

// Central-difference gradient of a scalar map.
Vec finite_diff_gradient(const std::function<double(const Vec&)>& map, const Vec& x,
                         double eps = kDefaultFdEps);

}  // namespace eqcover
