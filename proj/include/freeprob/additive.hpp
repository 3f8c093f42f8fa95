#pragma once

#include "freeprob/measure.hpp"

namespace freeprob {

/// omega solving omega = z/t + (1 - 1/t) F(omega), so that F_{mu^{boxplus t}} = F_mu o omega.
struct SubordinationSolution {
    CFun omega;
    double t = 1.0;
    double residual_sup = 0.0;  // over a fixed 100-point sample of the upper half-plane
};

SubordinationSolution subordination(const RealLineMeasure& mu, double t);

/// F_out = (1 - t) z + t F. Exact updates for point masses, Cauchy, half-stable and Jacobi reps.
RealLineMeasure boolean_power(const RealLineMeasure& mu, double t);

/// Free convolution power. t >= 1 works for every measure; t < 1 needs a known phi.
RealLineMeasure free_power(const RealLineMeasure& mu, double t);

enum class BtPath { Compose, Fast };

/// (mu^{boxplus (1+t)})^{uplus 1/(1+t)}. The fast path evaluates
/// F_out = omega/t + (1 - 1/t) z with omega the subordination map of order 1+t.
RealLineMeasure bt_map(const RealLineMeasure& mu, double t, BtPath path = BtPath::Compose);

/// Boolean-to-free Bercovici-Pata map, equal to bt_map at time 1.
RealLineMeasure lambda_b(const RealLineMeasure& mu);

enum class ShiftMode { Free, Boolean };

/// Free shift: F(z - a). Boolean shift: F(z) - a.
RealLineMeasure translate(const RealLineMeasure& mu, double a, ShiftMode mode);

/// F_out(z) = s F(z/s).
RealLineMeasure dilate(const RealLineMeasure& mu, double s);

/// Jacobi parameters with at least two explicit levels (periodic reps of length one are expanded).
JacobiRep expand_jacobi(const JacobiRep& j);

}  // namespace freeprob
