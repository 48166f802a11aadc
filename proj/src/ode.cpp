#include "eqcover/ode.hpp"

namespace eqcover {

Vec rk4_step(const VectorField& field, double t, const Vec& x, double dt) {
    const Vec k1 = field(t, x);
    const Vec k2 = field(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Vec k3 = field(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Vec k4 = field(t + dt, x + dt * k3);
    Vec out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.allFinite()) throw IntegrationDiverged(t, x, -1);
    return out;
}

std::vector<Vec> integrate(const VectorField& field, const TimeGrid& grid, const Vec& x0) {
    std::vector<Vec> states;
    states.reserve(grid.n_points());
    states.push_back(x0);
    for (int k = 0; k < grid.n_steps; ++k) {
        try {
            states.push_back(rk4_step(field, grid.time(k), states.back(), grid.dt));
        } catch (const IntegrationDiverged& e) {
            throw IntegrationDiverged(e.t, e.state, k);
        }
    }
    return states;
}

Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& map, const Vec& x, double eps) {
    Vec xp = x;
    Mat jac;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + eps;
        const Vec fp = map(xp);
        xp[j] = x[j] - eps;
        const Vec fm = map(xp);
        xp[j] = x[j];
        if (jac.size() == 0) jac.resize(fp.size(), x.size());
        jac.col(j) = (fp - fm) / (2.0 * eps);
    }
    return jac;
}

Vec finite_diff_gradient(const std::function<double(const Vec&)>& map, const Vec& x, double eps) {
    Vec g(x.size());
    Vec xp = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + eps;
        const double fp = map(xp);
        xp[j] = x[j] - eps;
        const double fm = map(xp);
        xp[j] = x[j];
        g[j] = (fp - fm) / (2.0 * eps);
    }
    return g;
}

}  // namespace eqcover
