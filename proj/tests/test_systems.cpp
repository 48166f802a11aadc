#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eqcover/ode.hpp"
#include "eqcover/rng.hpp"
#include "eqcover/systems.hpp"

using namespace eqcover;

namespace {

// Oracle: total energy of the cart double pendulum computed from link geometry,
// independent of the M/C/G assembly inside the plant.
double cdp_energy(const CartDoublePendulumParams& p, const Vec& x) {
    const double xd = x[3], t1 = x[1], t2 = x[2], w1 = x[4], w2 = x[5];
    const double v1x = xd + p.length1 * std::cos(t1) * w1;
    const double v1y = -p.length1 * std::sin(t1) * w1;
    const double v2x = v1x + p.length2 * std::cos(t2) * w2;
    const double v2y = v1y - p.length2 * std::sin(t2) * w2;
    const double kinetic = 0.5 * p.cart_mass * xd * xd +
                           0.5 * p.mass1 * (v1x * v1x + v1y * v1y) +
                           0.5 * p.mass2 * (v2x * v2x + v2y * v2y);
    const double h1 = p.length1 * std::cos(t1);
    const double h2 = h1 + p.length2 * std::cos(t2);
    return kinetic + p.gravity * (p.mass1 * h1 + p.mass2 * h2);
}

VectorField closed_field(const ControlAffineSystem& sys, const Vec& u) {
    return {sys.state_dim(), [&sys, u](double, const Vec& x) { return sys.eval(x, u); }};
}

}  // namespace

TEST_CASE("double integrator basics") {
    auto sys = make_double_integrator();
    Vec x = Vec::Zero(2), u(1);
    u << 1.0;
    Vec f = sys.eval(x, u);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 1.0);

    auto lin = sys.linearize(Vec::Zero(2), Vec::Zero(1));
    Mat A(2, 2), B(2, 1);
    A << 0, 1, 0, 0;
    B << 0, 1;
    CHECK((lin.A - A).norm() == 0.0);
    CHECK((lin.B - B).norm() == 0.0);
}

TEST_CASE("saturation clamps inside eval") {
    auto sys = make_double_integrator(2.0);
    Vec u(1);
    u << 100.0;
    CHECK(sys.eval(Vec::Zero(2), u)[1] == 2.0);
    u << -100.0;
    CHECK(sys.eval(Vec::Zero(2), u)[1] == -2.0);
}

TEST_CASE("pendulum linearization has the sin-derivative entry") {
    // single pendulum thetadd = -(g/l) sin(theta) + u as an LTI check case
    const double g_over_l = 9.81 / 0.5;
    auto drift = [g_over_l](const Vec& x) {
        Vec out(2);
        out << x[1], -g_over_l * std::sin(x[0]);
        return out;
    };
    auto act = [](const Vec&) {
        Mat h(2, 1);
        h << 0, 1;
        return h;
    };
    Vec lim(1);
    lim << 50.0;
    ControlAffineSystem pend("pendulum", 2, 1, drift, act, -lim, lim, Vec::Zero(2), Vec::Zero(1));
    auto lin = pend.linearize(Vec::Zero(2), Vec::Zero(1));
    CHECK(lin.A(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lin.A(1, 0) == doctest::Approx(-g_over_l).epsilon(1e-6));
}

TEST_CASE("cart double pendulum: upright is an equilibrium") {
    auto sys = make_cart_double_pendulum();
    Vec f = sys.eval(Vec::Zero(6), Vec::Zero(1));
    CHECK(f.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("cart double pendulum: unforced swing conserves energy") {
    CartDoublePendulumParams p;
    auto sys = make_cart_double_pendulum(p);
    Vec x0 = Vec::Zero(6);
    x0[1] = M_PI + 0.5;  // swing released about the hanging rest
    x0[2] = M_PI - 0.4;
    const double e0 = cdp_energy(p, x0);

    SUBCASE("1e-6 over 5 s") {
        TimeGrid grid{0.0, 1.0 / 200.0, 1000};
        auto states = integrate(closed_field(sys, Vec::Zero(1)), grid, x0);
        double worst = 0.0;
        for (const auto& s : states)
            worst = std::max(worst, std::abs(cdp_energy(p, s) - e0) / std::abs(e0));
        CHECK(worst < 1e-6);
    }
    SUBCASE("1e-5 over 10 s") {
        TimeGrid grid{0.0, 1.0 / 200.0, 2000};
        auto states = integrate(closed_field(sys, Vec::Zero(1)), grid, x0);
        double worst = 0.0;
        for (const auto& s : states)
            worst = std::max(worst, std::abs(cdp_energy(p, s) - e0) / std::abs(e0));
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("cart double pendulum: hanging equilibrium oscillates without growth") {
    CartDoublePendulumParams p;
    auto sys = make_cart_double_pendulum(p);
    Vec x0 = Vec::Zero(6);
    x0[1] = M_PI + 0.05;  // slightly off the downward rest
    x0[2] = M_PI;
    TimeGrid grid{0.0, 1.0 / 200.0, 1000};
    auto states = integrate(closed_field(sys, Vec::Zero(1)), grid, x0);
    for (const auto& s : states) {
        CHECK(std::abs(s[1] - M_PI) < 0.2);
        CHECK(std::abs(s[2] - M_PI) < 0.2);
    }
}

TEST_CASE("cart double pendulum: analytic Jacobians match finite differences") {
    auto sys = make_cart_double_pendulum();
    REQUIRE(sys.has_analytic_jacobian());
    Rng rng(99);
    for (int i = 0; i < 25; ++i) {
        Vec x = 0.3 * rng.gaussian_vector(6);
        Vec u = 2.0 * rng.gaussian_vector(1);
        auto [A, B] = sys.jacobians(x, u);
        Mat A_fd =
            finite_diff_jacobian([&](const Vec& xs) { return sys.eval_unclamped(xs, u); }, x);
        Mat B_fd =
            finite_diff_jacobian([&](const Vec& us) { return sys.eval_unclamped(x, us); }, u);
        CHECK((A - A_fd).cwiseAbs().maxCoeff() < 1e-5);
        CHECK((B - B_fd).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("quadrotor: hover trim is an equilibrium") {
    auto sys = make_quadrotor();
    Vec f = sys.eval(sys.equilibrium_state(), sys.trim_control());
    CHECK(f.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("quadrotor: equal thrust increase gives pure vertical acceleration") {
    QuadrotorParams p;
    auto sys = make_quadrotor(p);
    const double delta = 0.2;
    Vec u = sys.trim_control().array() + delta;
    Vec f = sys.eval(sys.equilibrium_state(), u);
    CHECK(f[8] == doctest::Approx(4.0 * delta / p.mass).epsilon(1e-12));
    CHECK(f.segment(9, 3).cwiseAbs().maxCoeff() < 1e-12);  // no angular acceleration
    CHECK(f.head(6).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quadrotor: differential thrusts produce the documented moments") {
    QuadrotorParams p;
    auto sys = make_quadrotor(p);
    const double delta = 0.1;

    // +y/-y pair differential -> positive roll rate only
    Vec u = sys.trim_control();
    u[2] += delta;
    u[3] -= delta;
    Vec f = sys.eval(sys.equilibrium_state(), u);
    CHECK(f[9] == doctest::Approx(2.0 * p.arm_length * delta / p.inertia_x).epsilon(1e-12));
    CHECK(std::abs(f[10]) < 1e-12);
    CHECK(std::abs(f[11]) < 1e-12);
    CHECK(std::abs(f[8]) < 1e-12);  // thrust sum unchanged

    // +x/-x pair differential -> pitch rate l (F2 - F1) / Jy
    u = sys.trim_control();
    u[0] += delta;
    u[1] -= delta;
    f = sys.eval(sys.equilibrium_state(), u);
    CHECK(f[10] == doctest::Approx(-2.0 * p.arm_length * delta / p.inertia_y).epsilon(1e-12));
    CHECK(std::abs(f[9]) < 1e-12);
    CHECK(std::abs(f[11]) < 1e-12);

    // spin-pair collective difference -> yaw only
    u = sys.trim_control();
    u[0] += delta;
    u[1] += delta;
    u[2] -= delta;
    u[3] -= delta;
    f = sys.eval(sys.equilibrium_state(), u);
    CHECK(f[11] == doctest::Approx(4.0 * p.yaw_torque_coeff * delta / p.inertia_z).epsilon(1e-12));
    CHECK(std::abs(f[9]) < 1e-12);
    CHECK(std::abs(f[10]) < 1e-12);
    CHECK(std::abs(f[8]) < 1e-12);
}

TEST_CASE("control affinity holds exactly pre-saturation") {
    Rng rng(1234);
    auto cdp = make_cart_double_pendulum();
    auto quad = make_quadrotor();
    auto di = make_double_integrator();
    for (const ControlAffineSystem* sys : {&cdp, &quad, &di}) {
        for (int i = 0; i < 20; ++i) {
            Vec x = 0.2 * rng.gaussian_vector(sys->state_dim());
            Vec u1 = rng.gaussian_vector(sys->control_dim());
            Vec u2 = rng.gaussian_vector(sys->control_dim());
            const double alpha = rng.uniform();
            Vec lhs = sys->eval_unclamped(x, alpha * u1 + (1.0 - alpha) * u2);
            Vec rhs = alpha * sys->eval_unclamped(x, u1) + (1.0 - alpha) * sys->eval_unclamped(x, u2);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("linearization residual shrinks quadratically") {
    Rng rng(5);
    auto cdp = make_cart_double_pendulum();
    auto quad = make_quadrotor();
    for (const ControlAffineSystem* sys : {&cdp, &quad}) {
        auto lin = sys->linearize(sys->equilibrium_state(), sys->trim_control());
        Vec dx = rng.gaussian_vector(sys->state_dim()).normalized() * 0.1;
        Vec du = rng.gaussian_vector(sys->control_dim()).normalized() * 0.1;
        auto residual = [&](double scale) {
            Vec x = sys->equilibrium_state() + scale * dx;
            Vec u = sys->trim_control() + scale * du;
            Vec f = sys->eval_unclamped(x, u);
            Vec approx = lin.A * (scale * dx) + lin.B * (scale * du);
            return (f - approx).norm();
        };
        const double r1 = residual(1.0);
        const double r2 = residual(0.5);
        REQUIRE(r1 > 1e-12);
        CHECK(r1 / r2 >= 3.5);
    }
}

TEST_CASE("non-finite state raises DynamicsNaN") {
    auto sys = make_double_integrator();
    Vec x(2);
    x << std::numeric_limits<double>::quiet_NaN(), 0.0;
    CHECK_THROWS_AS(sys.eval(x, Vec::Zero(1)), DynamicsNaN);
}

TEST_CASE("lti wrapper keeps the declared equilibrium") {
    Mat A(2, 2), B(2, 1);
    A << 0, 1, -2, -1;
    B << 0, 1;
    Vec x0(2), u0(1), lim(1);
    x0 << 1.0, 0.0;
    u0 << 2.0;
    lim << 100.0;
    // need A(x-x0) + B(u-u0) = 0 at (x0, u0): holds by construction
    auto sys = make_lti_system(A, B, x0, u0, -lim, lim);
    CHECK(sys.eval(x0, u0).cwiseAbs().maxCoeff() < 1e-12);
    Vec x(2), u(1);
    x << 1.5, -0.3;
    u << 2.5;
    Vec expect = A * (x - x0) + B * (u - u0);
    CHECK((sys.eval(x, u) - expect).cwiseAbs().maxCoeff() < 1e-12);
}
