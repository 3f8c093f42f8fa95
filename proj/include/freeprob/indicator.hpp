#pragma once

#include <optional>

#include "freeprob/measure.hpp"
#include "freeprob/transforms.hpp"

namespace freeprob {

struct FidReport {
    bool fid = false;
    bool inconclusive = false;

    // Boundary sign test on phi(x + i eps).
    double max_im_phi = -kInf;
    double argmax_x = 0.0;
    double tol = 0.0;
    int grid_points = 0;
    int inversion_failures = 0;

    // Jacobi-bound certificate: gamma1/gamma0 < 1 rules out free infinite divisibility.
    std::optional<double> jacobi_bound;
    bool jacobi_certificate = false;

    // Pick-matrix test of -phi on interior nodes.
    int pick_nodes = 0;
    double pick_min_eig = 0.0;

    std::vector<std::string> notes;

    /// Single non-negative number summarizing how badly the tests fail.
    double violation() const;
};

struct FidOptions {
    std::optional<GridSpec> grid;  // default: x in [-X, X], X = 8 (1 + radius), 4000 points, eps 1e-6
    bool pick = true;
    bool jacobi = true;
    double pick_threshold = 1e-6;
};

FidReport is_fid_real(const RealLineMeasure& mu, const FidOptions& opt = {});

/// gamma1 / gamma0, or infinity when gamma0 = 0.
double jacobi_upper_bound(const JacobiHead& head);

struct PhiIndicatorOptions {
    double t_max = 64.0;
    double tol_t = 0.01;
    bool jacobi_cap = true;  // cap the bracket by gamma1/gamma0 when moments exist
    FidOptions fid;
};

/// Bisection over t for the predicate "mu^{uplus t} is freely infinitely divisible".
IndicatorEstimate phi_indicator(const RealLineMeasure& mu, const PhiIndicatorOptions& opt = {});

/// Runs f(0..n-1) on a small thread pool.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace freeprob
