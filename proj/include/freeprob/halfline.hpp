#pragma once

#include "freeprob/measure.hpp"

namespace freeprob {

/// Principal logarithm of eta(z)/z; its imaginary part lies in [0, pi) on the upper half-plane.
cplx log_eta_ratio(const HalfLineMeasure& mu, cplx z);

/// eta_out(z)/z = (eta(z)/z)^t for 0 <= t <= 1. Throws RangeError for t > 1.
HalfLineMeasure boolean_power_halfline(const HalfLineMeasure& mu, double t);

/// omega solving omega = z (eta(omega)/omega)^{t-1}; eta of the free power is eta o omega.
CFun halfline_subordination(const HalfLineMeasure& mu, double t);

/// Free multiplicative power, t >= 1.
HalfLineMeasure free_power_halfline(const HalfLineMeasure& mu, double t);

/// Free power t+1 followed by Boolean power 1/(t+1); eta_out(z) = z eta(omega)/omega.
HalfLineMeasure mt_map_halfline(const HalfLineMeasure& mu, double t);

/// eta_out is the inverse of z -> z k(z), so Sigma of the output is k of the input.
HalfLineMeasure lambda_mb_halfline(const HalfLineMeasure& mu);

/// Sigma(z) = eta^{-1}(z)/z by continuation along the segment from 0.
bool sigma_halfline(const HalfLineMeasure& mu, cplx z, cplx& out);

/// Additive Boolean power: eta_out = t eta.
HalfLineMeasure uplus_power_halfline(const HalfLineMeasure& mu, double t);

/// Additive free power for t >= 1, computed on the real line. The result must carry
/// less than 1e-6 mass on the negative axis, otherwise NumericError.
HalfLineMeasure boxplus_power_halfline(const HalfLineMeasure& mu, double t);

/// Push-forward under x -> c x: eta_out(z) = eta(c z).
HalfLineMeasure dilate_halfline(const HalfLineMeasure& mu, double c);

/// Evidence for free multiplicative infinite divisibility: log Sigma must map the
/// upper half-plane into the closed lower half-plane and be real on the negative axis.
struct SigmaEvidence {
    bool ok = false;
    double max_im_log_sigma = -kInf;  // over upper half-plane nodes
    double max_im_on_axis = 0.0;      // |Im log Sigma| on the negative axis
    cplx witness{};
    int points = 0;
    int failures = 0;
};
SigmaEvidence sigma_positivity_halfline(const HalfLineMeasure& mu);

/// Candidate pre-image nu with M_t(nu) = mu: eta_nu(w) = w e^L, L = log_eta_ratio(mu, w e^{-t L}).
HalfLineMeasure mt_preimage_candidate(const HalfLineMeasure& mu, double t);

/// Bisection over t accepting t when the candidate pre-image is a valid eta-transform and
/// M_t of it reproduces mu within 1e-7. The bracket bounds theta from below only.
IndicatorEstimate theta_indicator_halfline(const HalfLineMeasure& mu, double t_max = 64.0,
                                           double tol_t = 0.01);

/// Sample points in the upper half-plane used by the half-line identity checks.
std::vector<cplx> halfline_grid();

}  // namespace freeprob
