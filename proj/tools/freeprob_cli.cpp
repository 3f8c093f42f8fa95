#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "freeprob/additive.hpp"
#include "freeprob/circle.hpp"
#include "freeprob/halfline.hpp"
#include "freeprob/harness.hpp"
#include "freeprob/indicator.hpp"
#include "freeprob/json_io.hpp"
#include "freeprob/transforms.hpp"

using namespace freeprob;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCheck = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string measure;
    std::string out;
    std::string op;
    std::string transform;
    std::string grid;
    std::vector<std::string> z;
    std::vector<std::string> checks;
    std::vector<std::string> spaces;
    std::vector<std::string> measures;
    double t = 1.0;
    double eps = 1e-6;
    double t_max = 64.0;
    double tol = 0.0;
    std::optional<int> branch;
    std::optional<double> arg_m1;
    bool json = false;
};

// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot write to '" + path + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

const char* space_name(const AnyMeasure& m) {
    switch (m.index()) {
        case 0: return "real";
        case 1: return "circle";
        default: return "halfline";
    }
}

AnyMeasure load(const Options& o) {
    if (o.measure.empty()) throw UsageError("--measure is required");
    return load_measure_spec(o.measure);
}

template <class T>
const T& require_space(const AnyMeasure& m, const std::string& command) {
    const T* p = std::get_if<T>(&m);
    if (!p) throw UsageError("'" + command + "' does not apply to measures on space '" + space_name(m) + "'");
    return *p;
}

// Argument of m1 for circle operations: explicit, from a branch index, or principal.
double circle_arg(const CircleMeasure& mu, const Options& o) {
    if (o.arg_m1 && o.branch) throw UsageError("give either --branch or --arg-m1, not both");
    if (o.arg_m1) return *o.arg_m1;
    if (o.branch) return arg_for_branch(mu, *o.branch);
    if (mu.is_haar()) return 0.0;
    const double a = principal_arg_m1(mu);
    if (std::abs(a) >= kPi)
        throw UsageError("arg m1 = pi lies on the branch boundary; choose a sheet with --branch or --arg-m1");
    return arg_for_branch(mu, 0);
}

std::vector<cplx> parse_points(const std::vector<std::string>& items) {
    std::vector<cplx> pts;
    for (const auto& s : items) {
        std::stringstream ss(s);
        double re = 0.0, im = 0.0;
        char comma = 0;
        if (!(ss >> re >> comma >> im) || comma != ',' || !(ss >> std::ws).eof())
            throw UsageError("point '" + s + "' is not of the form re,im");
        pts.emplace_back(re, im);
    }
    return pts;
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Sample points describing a transform-only result.
std::vector<cplx> sample_points(const AnyMeasure& m) {
    std::vector<cplx> pts;
    if (m.index() == 1) {
        for (double r : {0.25, 0.5, 0.75})
            for (int j = 0; j < 8; ++j) pts.push_back(std::polar(r, 2.0 * kPi * j / 8));
        return pts;
    }
    for (int i = -4; i <= 4; ++i)
        for (double y : {0.1, 1.0}) pts.emplace_back(0.5 * i, y);
    return pts;
}

Json measure_output(const AnyMeasure& m, std::optional<double> arg_m1 = std::nullopt) {
    Json out;
    out["space"] = space_name(m);
    if (auto spec = measure_to_spec(m)) {
        out["measure"] = *spec;
    } else {
        out["measure"] = nullptr;
        const bool real = m.index() == 0;
        out["transform"] = real ? "F" : "eta";
        Json samples = Json::array();
        for (const cplx z : sample_points(m)) {
            cplx v;
            if (const auto* r = std::get_if<RealLineMeasure>(&m)) v = r->F(z);
            else if (const auto* c = std::get_if<CircleMeasure>(&m)) v = c->eta(z);
            else v = std::get<HalfLineMeasure>(m).eta(z);
            samples.push_back({z.real(), z.imag(), v.real(), v.imag()});
        }
        out["samples"] = samples;
    }
    if (arg_m1) out["arg_m1"] = *arg_m1;
    return out;
}

void write_json(Output& out, const Json& j) { out.os() << j.dump(2) << "\n"; }

// ------------------------------------------------------------------ commands

int cmd_eval(const Options& o) {
    const AnyMeasure m = load(o);
    std::vector<cplx> pts = parse_points(o.z);
    if (!o.grid.empty()) {
        const GridSpec g = GridSpec::parse(o.grid, o.eps);
        for (int i = 0; i < g.count; ++i) {
            if (m.index() == 1) pts.push_back(std::polar(1.0 - g.eps, g.at(i)));
            else pts.emplace_back(g.at(i), g.eps);
        }
    }
    if (pts.empty()) throw UsageError("give evaluation points with --z re,im or --grid lo:hi:count");
    const std::string name = o.transform.empty() ? (m.index() == 0 ? "G" : "eta") : o.transform;

    std::function<cplx(cplx)> f;
    if (const auto* r = std::get_if<RealLineMeasure>(&m)) {
        if (name == "G") f = [r](cplx z) { return eval_additive_transform(*r, AdditiveKind::G, z); };
        else if (name == "F") f = [r](cplx z) { return eval_additive_transform(*r, AdditiveKind::F, z); };
        else if (name == "K") f = [r](cplx z) { return eval_additive_transform(*r, AdditiveKind::K, z); };
        else if (name == "phi") f = [r](cplx z) { return eval_phi(*r, z).value; };
        else throw UsageError("transform '" + name + "' is not defined on the real line (G, F, K, phi)");
        for (const cplx z : pts)
            if (!(z.imag() > 0.0)) throw UsageError("real-line transforms need points with Im z > 0");
    } else {
        MultKind kind;
        if (name == "psi") kind = MultKind::Psi;
        else if (name == "eta") kind = MultKind::Eta;
        else if (name == "k") kind = MultKind::K;
        else if (name == "sigma") kind = MultKind::Sigma;
        else throw UsageError("transform '" + name + "' is not multiplicative (psi, eta, k, sigma)");
        if (const auto* c = std::get_if<CircleMeasure>(&m)) {
            for (const cplx z : pts)
                if (!(std::abs(z) < 1.0)) throw UsageError("circle transforms need points with |z| < 1");
            f = [c, kind](cplx z) { return eval_mult_transform(*c, kind, z); };
        } else {
            const auto* h = std::get_if<HalfLineMeasure>(&m);
            f = [h, kind](cplx z) { return eval_mult_transform(*h, kind, z); };
        }
    }

    Output out(o.out);
    out.os() << "z_re,z_im," << name << "_re," << name << "_im\n";
    for (const cplx z : pts) {
        const cplx v = f(z);
        out.os() << fmt_double(z.real()) << "," << fmt_double(z.imag()) << "," << fmt_double(v.real()) << ","
                 << fmt_double(v.imag()) << "\n";
    }
    return 0;
}

int cmd_power(const Options& o) {
    const AnyMeasure m = load(o);
    const std::string& op = o.op;
    if (op != "boxplus" && op != "uplus" && op != "boxtimes" && op != "utimes")
        throw UsageError("--op must be one of boxplus, uplus, boxtimes, utimes");
    AnyMeasure result;
    std::optional<double> arg_out;
    if (const auto* r = std::get_if<RealLineMeasure>(&m)) {
        if (op == "boxplus") result = free_power(*r, o.t);
        else if (op == "uplus") result = boolean_power(*r, o.t);
        else throw UsageError("multiplicative powers need a measure on the circle or the half-line");
    } else if (const auto* c = std::get_if<CircleMeasure>(&m)) {
        const double phi = circle_arg(*c, o);
        if (op == "boxtimes") result = free_power_circle_arg(*c, o.t, phi);
        else if (op == "utimes") result = boolean_power_circle_arg(*c, o.t, phi);
        else throw UsageError("additive powers need a measure on the real line or the half-line");
        arg_out = o.t * phi;
    } else {
        const auto& h = std::get<HalfLineMeasure>(m);
        if (op == "boxtimes") result = free_power_halfline(h, o.t);
        else if (op == "utimes") result = boolean_power_halfline(h, o.t);
        else if (op == "boxplus") result = boxplus_power_halfline(h, o.t);
        else result = uplus_power_halfline(h, o.t);
    }
    Output out(o.out);
    write_json(out, measure_output(result, arg_out));
    return 0;
}

int cmd_bt(const Options& o) {
    const AnyMeasure m = load(o);
    const auto& r = require_space<RealLineMeasure>(m, "bt");
    Output out(o.out);
    write_json(out, measure_output(bt_map(r, o.t)));
    return 0;
}

int cmd_mt(const Options& o, const std::string& name) {
    const AnyMeasure m = load(o);
    Output out(o.out);
    if (const auto* c = std::get_if<CircleMeasure>(&m); c && name == "mt") {
        const double phi = circle_arg(*c, o);
        write_json(out, measure_output(mt_map_circle_arg(*c, o.t, phi), phi));
        return 0;
    }
    const auto& h = require_space<HalfLineMeasure>(m, name);
    write_json(out, measure_output(mt_map_halfline(h, o.t)));
    return 0;
}

int cmd_indicator(const Options& o, const std::string& name) {
    const AnyMeasure m = load(o);
    IndicatorEstimate e;
    if (name == "indicator" && m.index() == 0) {
        PhiIndicatorOptions opt;
        opt.t_max = o.t_max;
        e = phi_indicator(std::get<RealLineMeasure>(m), opt);
    } else if (name == "indicator" && m.index() == 1) {
        const auto& c = std::get<CircleMeasure>(m);
        const int n = o.branch ? *o.branch : bracket(circle_arg(c, o));
        e = theta_indicator_circle(c, n, o.t_max);
    } else {
        e = theta_indicator_halfline(require_space<HalfLineMeasure>(m, name), o.t_max);
    }
    Output out(o.out);
    write_json(out, indicator_json(e));
    return 0;
}

int cmd_density(const Options& o) {
    const AnyMeasure m = load(o);
    Output out(o.out);
    if (const auto* c = std::get_if<CircleMeasure>(&m)) {
        const int count = o.grid.empty() ? 1001 : GridSpec::parse(o.grid, o.eps).count;
        write_density_csv(out.os(), circle_density_from_eta(*c, count, o.eps), "theta");
        return 0;
    }
    if (o.grid.empty()) throw UsageError("--grid lo:hi:count is required");
    const GridSpec g = GridSpec::parse(o.grid, o.eps);
    const RealLineMeasure r =
        m.index() == 0 ? std::get<RealLineMeasure>(m) : halfline_to_real(std::get<HalfLineMeasure>(m));
    write_density_csv(out.os(), stieltjes_density(r, g), "x");
    return 0;
}

int cmd_check(const Options& o) {
    HarnessConfig cfg;
    cfg.checks = o.checks;
    cfg.spaces = o.spaces;
    cfg.tol = o.tol;
    for (const auto& s : o.spaces)
        if (s != "real" && s != "circle" && s != "halfline")
            throw UsageError("--space must be real, circle or halfline");
    if (!o.grid.empty()) cfg.grid = GridSpec::parse(o.grid, o.eps);
    if (!o.measures.empty()) {
        std::vector<NamedMeasure> ms;
        for (const auto& path : o.measures) ms.push_back({path, load_measure_spec(path)});
        cfg.measures = std::move(ms);
    }
    const HarnessSummary s = run_all(cfg);
    Output out(o.out);
    if (o.json) write_json(out, summary_json(s));
    else write_table(out.os(), s);
    return s.all_pass() ? 0 : kExitCheck;
}

int cmd_zoo(const Options& o) {
    Output out(o.out);
    if (o.json) {
        Json arr = Json::array();
        for (const auto& e : zoo_catalog())
            arr.push_back({{"space", e.space}, {"family", e.family}, {"params", e.params}, {"note", e.note}});
        write_json(out, arr);
        return 0;
    }
    for (const auto& e : zoo_catalog()) {
        std::string params;
        for (const auto& p : e.params) params += (params.empty() ? "" : ", ") + p;
        out.os() << e.space << "\t" << e.family << "\t(" << params << ")\t" << e.note << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical workbench for free and Boolean convolution powers, their semigroups and indicators"};
    app.require_subcommand(1);
    Options o;

    auto measure = [&](CLI::App* c) { c->add_option("--measure", o.measure, "JSON measure spec")->required(); };
    auto out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file (default stdout)"); };
    auto branch = [&](CLI::App* c) {
        c->add_option("--branch", o.branch, "sheet index n of the logarithm on the circle");
        c->add_option("--arg-m1", o.arg_m1, "explicit argument of the first moment on the circle");
    };

    auto* eval = app.add_subcommand("eval", "evaluate a transform at points");
    measure(eval);
    out(eval);
    eval->add_option("--transform", o.transform, "G, F, K, phi (real) or psi, eta, k, sigma");
    eval->add_option("--z", o.z, "points re,im (repeatable)");
    eval->add_option("--grid", o.grid, "lo:hi:count; real x + i eps, or angles at radius 1 - eps");
    eval->add_option("--eps", o.eps, "distance from the boundary")->check(CLI::PositiveNumber);

    auto* power = app.add_subcommand("power", "convolution power");
    measure(power);
    out(power);
    branch(power);
    power->add_option("--op", o.op, "boxplus, uplus, boxtimes or utimes")->required();
    power->add_option("--t", o.t, "exponent")->required();

    auto* bt = app.add_subcommand("bt", "apply the additive semigroup B_t");
    measure(bt);
    out(bt);
    bt->add_option("--t", o.t, "semigroup time")->required()->check(CLI::NonNegativeNumber);

    auto* mt = app.add_subcommand("mt", "apply the multiplicative semigroup M_t");
    auto* mth = app.add_subcommand("mt-halfline", "apply M_t to a measure on [0, inf)");
    for (auto* c : {mt, mth}) {
        measure(c);
        out(c);
        c->add_option("--t", o.t, "semigroup time")->required()->check(CLI::NonNegativeNumber);
    }
    branch(mt);

    auto* ind = app.add_subcommand("indicator", "estimate the divisibility indicator");
    auto* thh = app.add_subcommand("theta-halfline", "lower bound for the multiplicative indicator on [0, inf)");
    for (auto* c : {ind, thh}) {
        measure(c);
        out(c);
        c->add_option("--t-max", o.t_max, "largest probed exponent")->check(CLI::PositiveNumber);
    }
    branch(ind);

    auto* den = app.add_subcommand("density", "density by Stieltjes inversion, CSV");
    measure(den);
    out(den);
    den->add_option("--grid", o.grid, "lo:hi:count (count only for circle measures)");
    den->add_option("--eps", o.eps, "distance from the boundary")->check(CLI::PositiveNumber);

    auto* chk = app.add_subcommand("check", "run the identity checks");
    out(chk);
    chk->add_option("--check", o.checks, "check id (repeatable; default all)");
    chk->add_option("--space", o.spaces, "restrict to real, circle or halfline (repeatable)");
    chk->add_option("--measure", o.measures, "measure spec files replacing the default sets");
    chk->add_option("--grid", o.grid, "lo:hi:count for the real parts of sample points");
    chk->add_option("--eps", o.eps, "unused by most checks")->check(CLI::PositiveNumber);
    chk->add_option("--tol", o.tol, "tolerance override for every case");
    chk->add_flag("--json", o.json, "JSON output");

    auto* zoo = app.add_subcommand("zoo", "list measure families and their parameters");
    out(zoo);
    zoo->add_flag("--json", o.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*eval) return cmd_eval(o);
        if (*power) return cmd_power(o);
        if (*bt) return cmd_bt(o);
        if (*mt) return cmd_mt(o, "mt");
        if (*mth) return cmd_mt(o, "mt-halfline");
        if (*ind) return cmd_indicator(o, "indicator");
        if (*thh) return cmd_indicator(o, "theta-halfline");
        if (*den) return cmd_density(o);
        if (*chk) return cmd_check(o);
        if (*zoo) return cmd_zoo(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
