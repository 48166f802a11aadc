#include "eqcover/systems.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace eqcover {

ControlAffineSystem::ControlAffineSystem(std::string name, int state_dim, int control_dim,
                                         DriftFn drift, ActuationFn actuation, Vec u_min,
                                         Vec u_max, Vec x0, Vec u0, JacobianFn analytic_jacobian)
    : name_(std::move(name)),
      n_(state_dim),
      m_(control_dim),
      drift_(std::move(drift)),
      actuation_(std::move(actuation)),
      u_min_(std::move(u_min)),
      u_max_(std::move(u_max)),
      x0_(std::move(x0)),
      u0_(std::move(u0)),
      jacobian_(std::move(analytic_jacobian)) {
    if (((u_max_ - u_min_).array() <= 0.0).any())
        throw ConfigError(name_ + ": control bounds must satisfy u_min < u_max");
    const Vec residual = drift_(x0_) + actuation_(x0_) * u0_;
    if (residual.norm() > 1e-8)
        throw ConfigError(name_ + ": (x0, u0) is not an equilibrium, |f| = " +
                          std::to_string(residual.norm()));
}

Vec ControlAffineSystem::clamp_control(const Vec& u) const {
    return u.cwiseMax(u_min_).cwiseMin(u_max_);
}

Vec ControlAffineSystem::eval(const Vec& x, const Vec& u) const {
    if (!x.allFinite()) throw DynamicsNaN(name_ + ": non-finite state");
    Vec out = drift_(x) + actuation_(x) * clamp_control(u);
    if (!out.allFinite()) throw DynamicsNaN(name_ + ": non-finite state derivative");
    return out;
}

Vec ControlAffineSystem::eval_unclamped(const Vec& x, const Vec& u) const {
    return drift_(x) + actuation_(x) * u;
}

std::pair<Mat, Mat> ControlAffineSystem::jacobians(const Vec& x, const Vec& u) const {
    if (jacobian_) return jacobian_(x, u);
    Mat A = finite_diff_jacobian([&](const Vec& xs) { return eval_unclamped(xs, u); }, x);
    Mat B = actuation_(x);  // df/du is exactly h(x) for control-affine dynamics
    return {A, B};
}

LinearizedModel ControlAffineSystem::linearize(const Vec& x_ref, const Vec& u_ref) const {
    auto [A, B] = jacobians(x_ref, u_ref);
    return {A, B};
}

ControlAffineSystem make_double_integrator(double u_limit) {
    auto drift = [](const Vec& x) {
        Vec out(2);
        out << x[1], 0.0;
        return out;
    };
    auto act = [](const Vec&) {
        Mat h(2, 1);
        h << 0.0, 1.0;
        return h;
    };
    auto jac = [](const Vec&, const Vec&) {
        Mat A(2, 2), B(2, 1);
        A << 0, 1, 0, 0;
        B << 0, 1;
        return std::make_pair(A, B);
    };
    Vec lim(1);
    lim << u_limit;
    return {"double_integrator", 2, 1, drift, act, -lim, lim, Vec::Zero(2), Vec::Zero(1), jac};
}

namespace {

// Cart double pendulum with point-mass links, angles measured from upright.
// Generalized coordinates q = (cart position, theta1, theta2):
//   M(q) qdd + c(q, qd) + G(q) = B_f u
struct CdpModel {
    double a;    // m_c + m1 + m2
    double b1;   // (m1 + m2) l1
    double b2;   // m2 l2
    double d1;   // (m1 + m2) l1^2
    double d2;   // m2 l2^2
    double d12;  // m2 l1 l2
    double grav;

    explicit CdpModel(const CartDoublePendulumParams& p)
        : a(p.cart_mass + p.mass1 + p.mass2),
          b1((p.mass1 + p.mass2) * p.length1),
          b2(p.mass2 * p.length2),
          d1((p.mass1 + p.mass2) * p.length1 * p.length1),
          d2(p.mass2 * p.length2 * p.length2),
          d12(p.mass2 * p.length1 * p.length2),
          grav(p.gravity) {}

    Mat mass_matrix(double t1, double t2) const {
        const double c1 = std::cos(t1), c2 = std::cos(t2), c12 = std::cos(t1 - t2);
        Mat M(3, 3);
        M << a, b1 * c1, b2 * c2,
            b1 * c1, d1, d12 * c12,
            b2 * c2, d12 * c12, d2;
        return M;
    }

    Vec coriolis(double t1, double t2, double w1, double w2) const {
        const double s1 = std::sin(t1), s2 = std::sin(t2), s12 = std::sin(t1 - t2);
        Vec c(3);
        c << -b1 * s1 * w1 * w1 - b2 * s2 * w2 * w2,
            d12 * s12 * w2 * w2,
            -d12 * s12 * w1 * w1;
        return c;
    }

    Vec gravity_vec(double t1, double t2) const {
        Vec g(3);
        g << 0.0, -b1 * grav * std::sin(t1), -b2 * grav * std::sin(t2);
        return g;
    }

    Vec accel(const Vec& x, double u) const {
        const Mat M = mass_matrix(x[1], x[2]);
        Eigen::LDLT<Mat> solver(M);
        if (solver.info() != Eigen::Success || !solver.isPositive())
            throw ModelSingular("cart_double_pendulum: singular mass matrix");
        Vec rhs(3);
        rhs << u, 0.0, 0.0;
        rhs -= coriolis(x[1], x[2], x[4], x[5]) + gravity_vec(x[1], x[2]);
        return solver.solve(rhs);
    }

    // Exact Jacobians assembled from the partials of M, c and G using
    //   d(M^-1 w)/dq_i = M^-1 (dw/dq_i - dM/dq_i M^-1 w).
    std::pair<Mat, Mat> jacobians(const Vec& x, const Vec& u) const {
        const double t1 = x[1], t2 = x[2], w1 = x[4], w2 = x[5];
        const double s1 = std::sin(t1), c1 = std::cos(t1);
        const double s2 = std::sin(t2), c2 = std::cos(t2);
        const double s12 = std::sin(t1 - t2), c12 = std::cos(t1 - t2);

        const Mat M = mass_matrix(t1, t2);
        Eigen::LDLT<Mat> solver(M);
        Vec w(3);
        w << u[0], 0.0, 0.0;
        w -= coriolis(t1, t2, w1, w2) + gravity_vec(t1, t2);
        const Vec acc = solver.solve(w);

        Mat dM_t1(3, 3), dM_t2(3, 3);
        dM_t1 << 0, -b1 * s1, 0,
            -b1 * s1, 0, -d12 * s12,
            0, -d12 * s12, 0;
        dM_t2 << 0, 0, -b2 * s2,
            0, 0, d12 * s12,
            -b2 * s2, d12 * s12, 0;

        Vec dc_t1(3), dc_t2(3), dc_w1(3), dc_w2(3);
        dc_t1 << -b1 * c1 * w1 * w1, d12 * c12 * w2 * w2, -d12 * c12 * w1 * w1;
        dc_t2 << -b2 * c2 * w2 * w2, -d12 * c12 * w2 * w2, d12 * c12 * w1 * w1;
        dc_w1 << -2.0 * b1 * s1 * w1, 0.0, -2.0 * d12 * s12 * w1;
        dc_w2 << -2.0 * b2 * s2 * w2, 2.0 * d12 * s12 * w2, 0.0;

        Vec dG_t1(3), dG_t2(3);
        dG_t1 << 0.0, -b1 * grav * c1, 0.0;
        dG_t2 << 0.0, 0.0, -b2 * grav * c2;

        const Vec da_t1 = solver.solve(Vec(-dc_t1 - dG_t1 - dM_t1 * acc));
        const Vec da_t2 = solver.solve(Vec(-dc_t2 - dG_t2 - dM_t2 * acc));
        const Vec da_w1 = solver.solve(Vec(-dc_w1));
        const Vec da_w2 = solver.solve(Vec(-dc_w2));

        Mat A = Mat::Zero(6, 6);
        A.topRightCorner(3, 3).setIdentity();
        A.block<3, 1>(3, 1) = da_t1;
        A.block<3, 1>(3, 2) = da_t2;
        A.block<3, 1>(3, 4) = da_w1;
        A.block<3, 1>(3, 5) = da_w2;

        Vec bf(3);
        bf << 1.0, 0.0, 0.0;
        Mat B = Mat::Zero(6, 1);
        B.bottomRows(3) = solver.solve(bf);
        return {A, B};
    }
};

}  // namespace

ControlAffineSystem make_cart_double_pendulum(const CartDoublePendulumParams& p) {
    if (p.cart_mass <= 0 || p.mass1 <= 0 || p.mass2 <= 0 || p.length1 <= 0 || p.length2 <= 0)
        throw ConfigError("cart_double_pendulum: masses and lengths must be positive");
    const CdpModel model(p);

    auto drift = [model](const Vec& x) {
        Vec out(6);
        out.head(3) = x.tail(3);
        out.tail(3) = model.accel(x, 0.0);
        return out;
    };
    auto act = [model](const Vec& x) {
        const Mat M = model.mass_matrix(x[1], x[2]);
        Vec bf(3);
        bf << 1.0, 0.0, 0.0;
        Mat h = Mat::Zero(6, 1);
        h.bottomRows(3) = Eigen::LDLT<Mat>(M).solve(bf);
        return h;
    };
    auto jac = [model](const Vec& x, const Vec& u) { return model.jacobians(x, u); };

    Vec lim(1);
    lim << p.force_limit;
    return {"cart_double_pendulum", 6, 1, drift, act, -lim, lim, Vec::Zero(6), Vec::Zero(1), jac};
}

namespace {

Mat euler_rotation(double roll, double pitch, double yaw) {
    const double cr = std::cos(roll), sr = std::sin(roll);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    Mat R(3, 3);
    // R = Rz(yaw) Ry(pitch) Rx(roll), body to world
    R << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
        sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
        -sp, cp * sr, cp * cr;
    return R;
}

Mat euler_rate_matrix(double roll, double pitch) {
    const double cr = std::cos(roll), sr = std::sin(roll);
    const double cp = std::cos(pitch), tp = std::tan(pitch);
    Mat W(3, 3);
    W << 1.0, sr * tp, cr * tp,
        0.0, cr, -sr,
        0.0, sr / cp, cr / cp;
    return W;
}

}  // namespace

ControlAffineSystem make_quadrotor(const QuadrotorParams& p) {
    if (p.mass <= 0 || p.inertia_x <= 0 || p.inertia_y <= 0 || p.inertia_z <= 0 ||
        p.arm_length <= 0)
        throw ConfigError("quadrotor: mass and inertias must be positive");

    const Vec inertia = (Vec(3) << p.inertia_x, p.inertia_y, p.inertia_z).finished();
    const double mass = p.mass;
    const double grav = p.gravity;

    auto drift = [inertia, grav](const Vec& x) {
        const Vec eul = x.segment(3, 3);
        const Eigen::Vector3d v = x.segment(6, 3);
        const Eigen::Vector3d om = x.segment(9, 3);
        const Mat R = euler_rotation(eul[0], eul[1], eul[2]);

        Vec out(12);
        out.head(3) = R * v;
        out.segment(3, 3) = euler_rate_matrix(eul[0], eul[1]) * om;
        const Eigen::Vector3d grav_body =
            R.transpose() * Eigen::Vector3d(0.0, 0.0, -grav);
        out.segment(6, 3) = -om.cross(v) + grav_body;
        const Eigen::Vector3d J_om = inertia.cwiseProduct(x.segment(9, 3));
        out.segment(9, 3) = Vec(-om.cross(J_om)).cwiseQuotient(inertia);
        return out;
    };

    Mat mix(3, 4);  // body torques per unit rotor thrust, see layout note in the header
    mix << 0.0, 0.0, p.arm_length, -p.arm_length,
        -p.arm_length, p.arm_length, 0.0, 0.0,
        p.yaw_torque_coeff, p.yaw_torque_coeff, -p.yaw_torque_coeff, -p.yaw_torque_coeff;
    Mat h_const = Mat::Zero(12, 4);
    h_const.row(8) = Vec::Constant(4, 1.0 / mass).transpose();
    for (int r = 0; r < 3; ++r) h_const.row(9 + r) = mix.row(r) / inertia[r];

    auto act = [h_const](const Vec&) { return h_const; };

    const double trim = mass * grav / 4.0;
    Vec x0 = Vec::Zero(12);
    Vec u0 = Vec::Constant(4, trim);
    Vec u_min = Vec::Zero(4);
    Vec u_max = Vec::Constant(4, p.thrust_max_factor * trim);
    return {"quadrotor", 12, 4, drift, act, u_min, u_max, x0, u0};
}

ControlAffineSystem make_lti_system(const Mat& A, const Mat& B, const Vec& x0, const Vec& u0,
                                    const Vec& u_min, const Vec& u_max, std::string name) {
    auto drift = [A, B, x0, u0](const Vec& x) { return Vec(A * (x - x0) - B * u0); };
    auto act = [B](const Vec&) { return B; };
    auto jac = [A, B](const Vec&, const Vec&) { return std::make_pair(A, B); };
    return {std::move(name), static_cast<int>(A.rows()), static_cast<int>(B.cols()),
            drift, act, u_min, u_max, x0, u0, jac};
}

}  // namespace eqcover
