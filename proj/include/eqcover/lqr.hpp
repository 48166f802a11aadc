#pragma once

#include "eqcover/rng.hpp"
#include "eqcover/systems.hpp"

namespace eqcover {

// Solves A^T X + X A + Q = 0 by direct solution of the vectorized linear
// system. Requires lambda_i(A) + lambda_j(A) != 0 for all pairs.
Mat solve_lyapunov(const Mat& A, const Mat& Q);

bool is_hurwitz(const Mat& A);

// Stabilizing solution of A^T P + P A - P B R^-1 B^T P + Q = 0 via
// Newton-Kleinman iteration from a stabilizing initial gain. The initial gain
// comes from the Bass construction ((A + beta I) Z + Z (A + beta I)^T = 2 B B^T,
// K0 = B^T Z^-1), with a seeded random-perturbation retry loop as a fallback.
// Throws NotStabilizable when no stabilizing gain is found or the iteration
// fails to converge within 200 steps.
Mat solve_care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R);

// LQR gain, quadratic Lyapunov certificate and the ball where it was validated.
struct StabilityCertificate {
    Mat K;           // m x n feedback gain
    Mat P;           // n x n Lyapunov matrix, symmetric positive definite
    Vec x0;          // equilibrium state
    Vec u0;          // trim control
    double radius = 0.0;  // estimated attraction-ball radius (0 = not estimated)

    Vec policy_unclamped(const Vec& x) const { return u0 - K * (x - x0); }
    Vec policy(const ControlAffineSystem& sys, const Vec& x) const {
        return sys.clamp_control(policy_unclamped(x));
    }
    // d(policy)/dx; constant for the affine policy
    const Mat& policy_jacobian() const { return K_neg_; }

    double lyapunov(const Vec& x) const {
        const Vec d = x - x0;
        return d.dot(P * d);
    }
    Vec lyapunov_gradient(const Vec& x) const { return 2.0 * (P * (x - x0)); }
    double lyapunov_rate(const ControlAffineSystem& sys, const Vec& x, const Vec& u) const {
        return lyapunov_gradient(x).dot(sys.eval(x, u));
    }

    void finalize();  // caches -K; call after filling fields manually

private:
    Mat K_neg_;
};

// Builds the certificate from the linearization at the system equilibrium.
StabilityCertificate make_certificate(const ControlAffineSystem& sys, const Mat& Q_lqr,
                                      const Mat& R_lqr);

// Largest tested radius whose sampled spheres (this and smaller test levels)
// only contain states with Vdot(x, mu(x)) < 0 under the full nonlinear
// dynamics. Monte Carlo bisection; returns 0 when even the smallest level
// fails (warning case). Deterministic given the rng seed.
double estimate_attraction_radius(const ControlAffineSystem& sys, const StabilityCertificate& cert,
                                  int n_samples, Rng& rng, double r_cap = 10.0,
                                  int bisection_levels = 24);

}  // namespace eqcover
