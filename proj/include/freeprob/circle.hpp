#pragma once

#include "freeprob/measure.hpp"

namespace freeprob {

/// 0 for |phi| < pi, floor(phi/pi) for phi >= pi, ceil(phi/pi) for phi <= -pi.
int bracket(double phi);

/// Principal argument of m1 in (-pi, pi). Throws BranchError on the boundary value pi.
double principal_arg_m1(const CircleMeasure& mu);

/// Argument recorded on the measure, falling back to the principal one.
double recorded_arg_m1(const CircleMeasure& mu);

/// Continuous logarithm u of k = z/eta on the disc with Im u(0) = -phi.
/// phi must be congruent to arg m1 modulo 2 pi.
CFun lift_log_k(const CircleMeasure& mu, double phi);

/// Winding number of k along |z| = r; nonzero means eta has zeros in the disc.
int winding_of_k(const CircleMeasure& mu, double r = 0.99);

struct BranchLog {
    int n = 0;
    double phi = 0.0;  // -Im u(0)
    CFun u;
};

/// u^(n) = u^(0) - 2 pi n i with u^(0) the principal-sheet logarithm of k.
BranchLog branch_log(const CircleMeasure& mu, int n);

/// Argument of m1 selected by branch index n: principal argument + 2 pi n.
double arg_for_branch(const CircleMeasure& mu, int n);

/// eta_out(z) = z exp(-t u(z)), using the log of k with Im u(0) = -phi.
CircleMeasure boolean_power_circle_arg(const CircleMeasure& mu, double t, double phi);
CircleMeasure boolean_power_circle(const CircleMeasure& mu, double t, int n);

/// eta_out = eta o omega, omega = z exp(-(t-1) u(omega)).
CircleMeasure free_power_circle_arg(const CircleMeasure& mu, double t, double phi);
CircleMeasure free_power_circle(const CircleMeasure& mu, double t, int n);

/// Free power t+1 at argument phi followed by Boolean power 1/(t+1) at argument (t+1) phi.
CircleMeasure mt_map_circle_arg(const CircleMeasure& mu, double t, double phi);
CircleMeasure mt_map_circle(const CircleMeasure& mu, double t, int n);

/// eta_out is the inverse of z -> z k(z); Sigma of the output equals k of the input.
CircleMeasure lambda_mb_circle(const CircleMeasure& mu);

/// Subordination map omega of the free power, for identity checks.
CFun circle_subordination(const CircleMeasure& mu, double t, double phi);

struct MidReport {
    bool mid = false;
    bool inconclusive = false;
    double min_log_abs_sigma = kInf;  // Re log Sigma
    cplx witness{};
    int points = 0;
    int failures = 0;
    // Toeplitz test on the Taylor coefficients of log Sigma, extracted on |z| = coeff_radius.
    double coeff_radius = 0.0;
    int coeff_count = 0;
    double toeplitz_min_eig = 0.0;
};

/// Sigma(z) = eta^{-1}(z)/z on the disc grid must satisfy Re log Sigma >= -1e-7, and the
/// Taylor coefficients of log Sigma must form a positive semidefinite Toeplitz matrix,
/// which is what an extension of log Sigma to a Caratheodory function on the disc requires.
MidReport is_mid_circle(const CircleMeasure& mu);

/// Sigma on the disc, obtained by continuing eta^{-1} along rays from 0.
bool sigma_circle(const CircleMeasure& mu, cplx z, cplx& out);

IndicatorEstimate theta_indicator_circle(const CircleMeasure& mu, int n, double t_max = 64.0,
                                         double tol_t = 0.01);

/// Disc sample points r in {0.1, ..., 0.9, 0.95} x `angles` angles.
std::vector<cplx> disc_grid(int angles = 64);

}  // namespace freeprob
