#include "freeprob/indicator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "freeprob/additive.hpp"

namespace freeprob {

void parallel_for(int n, const std::function<void(int)>& f) {
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int workers = std::min(hw, std::max(1, n / 16));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

double jacobi_upper_bound(const JacobiHead& head) {
    if (head.gamma0 <= 0.0) return kInf;
    return head.gamma1 / head.gamma0;
}

double FidReport::violation() const {
    double v = 0.0;
    if (std::isfinite(max_im_phi)) v = std::max(v, max_im_phi);
    v = std::max(v, -pick_min_eig);
    if (jacobi_bound && *jacobi_bound < 1.0) v = std::max(v, 1.0 - *jacobi_bound);
    return v;
}

namespace {

struct PhiSample {
    bool ok = false;
    cplx value{};
};

PhiSample sample_phi(const RealLineMeasure& mu, cplx z, double top) {
    PhiSample s;
    try {
        if (mu.has_closed_phi()) {
            s.value = mu.phi_closed(z);
            s.ok = finite(s.value);
            return s;
        }
        InversionResult r;
        if (invert_F_continued(mu, z, top, r)) {
            s.value = r.value;
            s.ok = finite(s.value);
        }
    } catch (const Error&) {
        s.ok = false;
    }
    return s;
}

}  // namespace

FidReport is_fid_real(const RealLineMeasure& mu, const FidOptions& opt) {
    FidReport rep;
    rep.notes.push_back("sufficiency of the boundary test assumes injective boundary values (not verified)");

    if (opt.jacobi) {
        try {
            const double b = jacobi_upper_bound(jacobi_head(mu));
            rep.jacobi_bound = b;
            if (b < 1.0 - 1e-9) {
                rep.jacobi_certificate = true;
                rep.fid = false;
                rep.notes.push_back("Jacobi bound gamma1/gamma0 < 1 excludes free infinite divisibility");
                return rep;
            }
        } catch (const Error&) {
            rep.notes.push_back("Jacobi head unavailable");
        }
    }

    const double r = mu.support_radius();
    const double size = std::isfinite(r) ? std::max(r, 1e-3) : mu.scale();
    GridSpec grid;
    if (opt.grid) {
        grid = *opt.grid;
    } else {
        const double X = 8.0 * (1.0 + size);
        grid = {-X, X, 4000, 1e-6};
    }
    grid.validate();

    for (int pass = 0; pass < 2; ++pass) {
        const double top = 2.0 * (1.0 + std::max(std::abs(grid.x_min), std::abs(grid.x_max)));
        std::vector<PhiSample> samples(static_cast<size_t>(grid.count));
        // Coarse pass first: when none of it is reachable the full grid is skipped.
        const int stride = std::max(1, grid.count / 100);
        const int coarse = (grid.count + stride - 1) / stride;
        parallel_for(coarse, [&](int k) {
            const int i = k * stride;
            samples[i] = sample_phi(mu, cplx(grid.at(i), grid.eps), top);
        });
        bool reachable = false;
        for (int k = 0; k < coarse; ++k) reachable = reachable || samples[k * stride].ok;
        if (reachable) {
            parallel_for(grid.count, [&](int i) {
                if (i % stride != 0) samples[i] = sample_phi(mu, cplx(grid.at(i), grid.eps), top);
            });
        } else {
            rep.notes.push_back("boundary grid unreachable on a coarse pass");
        }
        rep.grid_points = grid.count;
        rep.inversion_failures = 0;
        rep.max_im_phi = -kInf;
        int arg = -1;
        for (int i = 0; i < grid.count; ++i) {
            if (!samples[i].ok) {
                ++rep.inversion_failures;
                continue;
            }
            if (samples[i].value.imag() > rep.max_im_phi) {
                rep.max_im_phi = samples[i].value.imag();
                arg = i;
            }
        }
        if (arg >= 0) {
            rep.argmax_x = grid.at(arg);
            rep.tol = 1e-6 * (1.0 + std::abs(samples[arg].value));
        }
        const bool at_edge = arg == 0 || arg == grid.count - 1;
        if (pass == 0 && at_edge && rep.max_im_phi > -rep.tol) {
            grid.x_min *= 2.0;
            grid.x_max *= 2.0;
            rep.notes.push_back("argmax at grid edge; grid doubled");
            continue;
        }
        break;
    }

    const bool sign_violation = rep.max_im_phi > rep.tol;
    bool pick_violation = false;
    bool pick_available = !opt.pick;

    if (opt.pick && !sign_violation) {
        const double span = std::isfinite(r) ? 1.1 * std::max(r, 1e-3) : 4.0 * mu.scale();
        const double c = std::isfinite(r) ? 0.0 : mu.center();
        const double top = 2.0 * (1.0 + span + std::abs(c)) + 16.0 * (1.0 + size);
        std::vector<cplx> nodes;
        const int nx = 40;
        for (int i = 0; i < nx; ++i) {
            const double x = c - span + 2.0 * span * (i + 0.5) / nx;
            for (double y : {1e-3, 3e-3, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) nodes.emplace_back(x, y * size);
        }
        std::vector<PhiSample> vals(nodes.size());
        parallel_for(static_cast<int>(nodes.size()), [&](int i) { vals[i] = sample_phi(mu, nodes[i], top); });
        std::vector<cplx> w, f;
        std::vector<double> d;
        double min_diag = 0.0;
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (!vals[i].ok) continue;
            const cplx fi = -vals[i].value;
            const double di = fi.imag() / nodes[i].imag();
            if (di <= 1e-13 * (1.0 + std::abs(fi)) / nodes[i].imag()) {
                min_diag = std::min(min_diag, di);
                continue;
            }
            w.push_back(nodes[i]);
            f.push_back(fi);
            d.push_back(di);
        }
        rep.pick_nodes = static_cast<int>(w.size());
        if (min_diag < -1e-9) {
            rep.pick_min_eig = min_diag;
            pick_violation = true;
            pick_available = true;
        } else if (w.size() >= 20) {
            const auto n = static_cast<Eigen::Index>(w.size());
            Eigen::MatrixXcd P(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    P(i, j) = (f[i] - std::conj(f[j])) / (w[i] - std::conj(w[j])) / std::sqrt(d[i] * d[j]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P, Eigen::EigenvaluesOnly);
            rep.pick_min_eig = std::min(0.0, es.eigenvalues().minCoeff());
            pick_violation = rep.pick_min_eig < -opt.pick_threshold;
            pick_available = true;
        } else if (w.empty() && rep.inversion_failures == 0) {
            // phi real on every node: a point mass.
            pick_available = true;
        }
    }

    if (sign_violation || pick_violation) {
        rep.fid = false;
        return rep;
    }
    const double failure_rate = rep.grid_points ? double(rep.inversion_failures) / rep.grid_points : 1.0;
    // Failed inversions are expected wherever F^{-1}(z) leaves the upper half-plane, so
    // only a grid that is almost entirely unreachable makes the test inconclusive.
    if (failure_rate > 0.9 && opt.pick && rep.pick_nodes >= 40) {
        rep.fid = true;
        rep.notes.push_back("boundary grid outside the range of F; decided by the Pick test alone");
        return rep;
    }
    if (failure_rate > 0.9 || !pick_available) {
        rep.fid = false;
        rep.inconclusive = true;
        rep.notes.push_back("too many inversion failures or too few Pick nodes to decide");
        return rep;
    }
    rep.fid = true;
    return rep;
}

IndicatorEstimate phi_indicator(const RealLineMeasure& mu, const PhiIndicatorOptions& opt) {
    if (!(opt.t_max >= 1.0)) throw DomainError("t_max must be at least 1");
    if (!(opt.tol_t > 0.0)) throw DomainError("tol_t must be positive");
    IndicatorEstimate est;
    est.method = "boolean-bisection";

    auto probe = [&](double t) {
        const FidReport r = is_fid_real(boolean_power(mu, t), opt.fid);
        est.probes.emplace_back(t, r.violation());
        if (r.inconclusive) {
            est.inconclusive = true;
            est.notes.push_back("inconclusive FID probe at t = " + std::to_string(t) + " treated as a failure");
        }
        return r.fid;
    };

    double bound = kInf;
    if (opt.jacobi_cap) {
        try {
            bound = jacobi_upper_bound(jacobi_head(mu));
        } catch (const Error&) {
        }
    }

    double lower = 0.0, upper = kInf;
    if (probe(1.0)) {
        lower = 1.0;
        for (double t = 2.0; t <= opt.t_max; t *= 2.0) {
            if (t > bound) break;
            if (probe(t)) {
                lower = t;
            } else {
                upper = t;
                break;
            }
        }
    } else {
        upper = 1.0;
        for (double t = 0.5; t >= 1.0 / 1024.0; t *= 0.5) {
            if (t > bound) {
                upper = t;
                continue;
            }
            if (probe(t)) {
                lower = t;
                break;
            }
            upper = t;
        }
    }
    if (std::isfinite(bound) && bound < upper) {
        est.notes.push_back("Jacobi bound caps the bracket at " + std::to_string(bound));
        upper = std::max(bound, lower);
        if (bound > lower && probe(bound)) lower = bound;
    }
    while (std::isfinite(upper) && upper - lower > opt.tol_t) {
        const double mid = 0.5 * (lower + upper);
        if (probe(mid)) lower = mid;
        else upper = mid;
    }
    est.lower = lower;
    est.upper = upper;
    return est;
}

}  // namespace freeprob
