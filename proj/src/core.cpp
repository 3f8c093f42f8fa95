#include "freeprob/core.hpp"

namespace freeprob {

SolveResult newton_solve(const CFun& h, cplx seed,
                         const std::function<bool(cplx)>& admissible,
                         const SolveOptions& opt) {
    SolveResult res;
    cplx w = seed;
    cplx hw = h(w);
    if (!finite(hw)) return res;
    for (int it = 1; it <= opt.max_iter; ++it) {
        res.iterations = it;
        const double d = opt.fd_rel * (1.0 + std::abs(w));
        const cplx der = (h(w + d) - h(w - d)) / (2.0 * d);
        if (!finite(der) || std::abs(der) == 0.0) break;
        const cplx step = hw / der;
        double lambda = 1.0;
        bool accepted = false;
        cplx wn = w, hn = hw;
        for (int k = 0; k < 50; ++k) {
            wn = w - lambda * step;
            if (admissible(wn)) {
                hn = h(wn);
                if (finite(hn) && (std::abs(hn) < std::abs(hw) ||
                                   std::abs(hn) <= 1e-15 * (1.0 + std::abs(wn)))) {
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // No admissible decrease: either converged to round-off or stuck.
            if (std::abs(step) < opt.tol * (1.0 + std::abs(w)) * 1e3) res.converged = true;
            break;
        }
        const double moved = std::abs(wn - w);
        w = wn;
        hw = hn;
        if (moved < opt.tol * (1.0 + std::abs(w))) {
            res.converged = true;
            break;
        }
    }
    res.value = w;
    res.residual = std::abs(hw);
    return res;
}

SolveResult fixed_point_solve(const CFun& T, cplx seed,
                              const std::function<bool(cplx)>& admissible,
                              int max_iter, double tol) {
    SolveResult res;
    cplx w = seed;
    bool tried_newton = false;
    for (int k = 1; k <= max_iter; ++k) {
        res.iterations = k;
        cplx wn = T(w);
        if (!finite(wn)) break;
        for (int j = 0; j < 60 && !admissible(wn); ++j) wn = 0.5 * (w + wn);
        if (!admissible(wn)) break;
        const double moved = std::abs(wn - w);
        w = wn;
        if (moved < tol * (1.0 + std::abs(w))) {
            res.converged = true;
            break;
        }
        if (k == 25 && !tried_newton) {
            tried_newton = true;
            SolveOptions o;
            o.tol = tol;
            o.max_iter = 60;
            auto nr = newton_solve([&](cplx v) { return v - T(v); }, w, admissible, o);
            if (nr.converged && finite(nr.value)) {
                w = nr.value;
                res.converged = true;
                res.iterations += nr.iterations;
                break;
            }
        }
    }
    res.value = w;
    const cplx tw = T(w);
    res.residual = finite(tw) ? std::abs(tw - w) : kInf;
    return res;
}

}  // namespace freeprob
