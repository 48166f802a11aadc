#include "eqcover/lqr.hpp"

#include <Eigen/Dense>

namespace eqcover {

Mat solve_lyapunov(const Mat& A, const Mat& Q) {
    const Eigen::Index n = A.rows();
    Mat system(n * n, n * n);
    const Mat At = A.transpose();
    const Mat I = Mat::Identity(n, n);
    // vec(A^T X) = (I (x) A^T) vec(X); vec(X A) = (A^T (x) I) vec(X)
    for (Eigen::Index bj = 0; bj < n; ++bj)
        for (Eigen::Index bi = 0; bi < n; ++bi)
            system.block(bi * n, bj * n, n, n) =
                (bi == bj ? At : Mat::Zero(n, n)) + At(bj, bi) * I;
    Eigen::Map<const Vec> q(Q.data(), n * n);
    Eigen::PartialPivLU<Mat> lu(system);
    Vec vec_x = lu.solve(-q);
    Mat X = Eigen::Map<Mat>(vec_x.data(), n, n);
    return 0.5 * (X + X.transpose());
}

bool is_hurwitz(const Mat& A) {
    Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff() < 0.0;
}

namespace {

// Bass construction of a stabilizing gain: with beta exceeding the largest
// real part of eig(A), Z solving (A + beta I) Z + Z (A + beta I)^T = 2 B B^T
// is positive semidefinite and K = B^T Z^-1 places A - B K in the left half
// plane for controllable (A, B).
Mat bass_gain(const Mat& A, const Mat& B) {
    const Eigen::Index n = A.rows();
    const double beta = A.norm() + 0.5;
    const Mat F = A + beta * Mat::Identity(n, n);
    const Mat Z = solve_lyapunov(F.transpose(), Mat(-2.0 * B * B.transpose()));
    // regularized inverse; Z can be singular when (A, B) is merely stabilizable
    const Mat Zr = Z + 1e-10 * std::max(1.0, Z.norm()) * Mat::Identity(n, n);
    return B.transpose() * Zr.ldlt().solve(Mat::Identity(n, n));
}

}  // namespace

Mat solve_care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    const Mat R_inv_Bt = R.ldlt().solve(Mat(B.transpose()));

    Mat K = Mat::Zero(m, n);
    if (!is_hurwitz(A)) {
        K = bass_gain(A, B);
        // seeded retry loop: small random perturbations around the Bass gain
        Rng rng(0x5eed5eedULL);
        int tries = 0;
        while (!is_hurwitz(A - B * K)) {
            if (++tries > 200)
                throw NotStabilizable("solve_care: no stabilizing initial gain found");
            Mat dK(m, n);
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = 0; j < n; ++j) dK(i, j) = rng.gaussian();
            K = bass_gain(A, B) + 0.1 * static_cast<double>(tries) * dK;
        }
    }

    Mat P = Mat::Zero(n, n);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const Mat Acl = A - B * K;
        const Mat P_next = solve_lyapunov(Acl, Mat(Q + K.transpose() * R * K));
        const Mat K_next = R_inv_Bt * P_next;
        const double dp = (P_next - P).norm();
        P = P_next;
        K = K_next;
        if (!is_hurwitz(A - B * K))
            throw NotStabilizable("solve_care: Newton step lost stability");
        if (dp < 1e-12 * std::max(1.0, P.norm())) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NotStabilizable("solve_care: Newton-Kleinman did not converge");

    const Mat residual = A.transpose() * P + P * A - P * B * R_inv_Bt * P + Q;
    if (residual.cwiseAbs().maxCoeff() > 1e-8)
        throw NotStabilizable("solve_care: residual check failed");
    return P;
}

void StabilityCertificate::finalize() { K_neg_ = -K; }

StabilityCertificate make_certificate(const ControlAffineSystem& sys, const Mat& Q_lqr,
                                      const Mat& R_lqr) {
    const auto lin = sys.linearize(sys.equilibrium_state(), sys.trim_control());
    StabilityCertificate cert;
    cert.P = solve_care(lin.A, lin.B, Q_lqr, R_lqr);
    cert.K = R_lqr.ldlt().solve(Mat(lin.B.transpose() * cert.P));
    cert.x0 = sys.equilibrium_state();
    cert.u0 = sys.trim_control();
    cert.finalize();
    return cert;
}

namespace {

bool sphere_level_passes(const ControlAffineSystem& sys, const StabilityCertificate& cert,
                         double radius, int n_samples, Rng& rng) {
    const Eigen::Index n = sys.state_dim();
    for (int i = 0; i < n_samples; ++i) {
        const Vec x = cert.x0 + rng.sphere_vector(n, radius);
        double vdot;
        try {
            vdot = cert.lyapunov_rate(sys, x, cert.policy(sys, x));
        } catch (const DynamicsNaN&) {
            return false;
        }
        if (!(vdot < 0.0)) return false;
    }
    return true;
}

}  // namespace

double estimate_attraction_radius(const ControlAffineSystem& sys, const StabilityCertificate& cert,
                                  int n_samples, Rng& rng, double r_cap, int bisection_levels) {
    const double r_floor = r_cap * 1e-6;
    if (!sphere_level_passes(sys, cert, r_floor, n_samples, rng)) return 0.0;
    if (sphere_level_passes(sys, cert, r_cap, n_samples, rng)) return r_cap;

    double lo = r_floor, hi = r_cap;
    for (int i = 0; i < bisection_levels; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (sphere_level_passes(sys, cert, mid, n_samples, rng))
            lo = mid;
        else
            hi = mid;
    }
    // spheres of radius <= r must all pass, not just the bisection boundary
    for (double frac : {0.25, 0.5, 0.75}) {
        if (!sphere_level_passes(sys, cert, frac * lo, n_samples, rng)) return frac * lo * 0.5;
    }
    return lo;
}

}  // namespace eqcover
