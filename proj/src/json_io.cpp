#include "freeprob/json_io.hpp"

#include <fstream>
#include <set>

namespace freeprob {

namespace {

const std::set<std::string> kSpecKeys = {"space", "kind", "family", "params", "atoms", "beta", "gamma"};

std::string get_string(const Json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("measure spec is missing \"") + key + "\"");
    if (!j.at(key).is_string()) throw DomainError(std::string("\"") + key + "\" must be a string");
    return j.at(key).get<std::string>();
}

Params get_params(const Json& j) {
    Params p;
    if (!j.contains("params")) return p;
    const Json& o = j.at("params");
    if (!o.is_object()) throw DomainError("\"params\" must be an object");
    for (const auto& [k, v] : o.items()) {
        if (!v.is_number()) throw DomainError("parameter \"" + k + "\" must be a number");
        p[k] = v.get<double>();
    }
    return p;
}

std::vector<Atom> get_atoms(const Json& j, bool required) {
    std::vector<Atom> atoms;
    if (!j.contains("atoms")) {
        if (required) throw DomainError("measure spec is missing \"atoms\"");
        return atoms;
    }
    const Json& a = j.at("atoms");
    if (!a.is_array()) throw DomainError("\"atoms\" must be an array of [x, w] pairs");
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw DomainError("each atom must be a pair [x, w] of numbers");
        atoms.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return atoms;
}

std::vector<double> get_vector(const Json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("measure spec is missing \"") + key + "\"");
    const Json& a = j.at(key);
    if (!a.is_array()) throw DomainError(std::string("\"") + key + "\" must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : a) {
        if (!e.is_number()) throw DomainError(std::string("\"") + key + "\" must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& kind) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw DomainError("key \"" + k + "\" is not used by kind \"" + kind + "\"");
    }
}

void only_params(const Params& p, std::initializer_list<const char*> allowed, const std::string& kind) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw DomainError("parameter \"" + k + "\" is not used by kind \"" + kind + "\"");
    }
}

double param_or(const Params& p, const char* key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

LevyMeasure tau_from(const std::vector<Atom>& atoms) {
    LevyMeasure tau;
    for (const auto& a : atoms) {
        if (!(a.w >= 0.0)) throw DomainError("Levy measure weights must be non-negative");
        tau.atoms.push_back(a);
    }
    return tau;
}

Json atoms_json(const std::vector<Atom>& atoms) {
    Json a = Json::array();
    for (const auto& at : atoms) a.push_back({at.x, at.w});
    return a;
}

}  // namespace

AnyMeasure parse_measure_spec(const Json& j) {
    if (!j.is_object()) throw DomainError("measure spec must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!kSpecKeys.count(k)) throw DomainError("unknown key \"" + k + "\" in measure spec");
    const std::string space = get_string(j, "space");
    const std::string kind = get_string(j, "kind");
    if (space != "real" && space != "circle" && space != "halfline")
        throw DomainError("space must be one of real, circle, halfline");

    if (kind == "atoms") {
        only_keys(j, {"space", "kind", "atoms"}, kind);
        auto atoms = get_atoms(j, true);
        if (space == "real") return RealLineMeasure::from_atoms(std::move(atoms));
        if (space == "circle") return CircleMeasure::from_atoms(std::move(atoms));
        return HalfLineMeasure::from_atoms(std::move(atoms));
    }
    if (kind == "closed_form") {
        only_keys(j, {"space", "kind", "family", "params"}, kind);
        return make_zoo_measure(space, get_string(j, "family"), get_params(j));
    }
    if (kind == "jacobi") {
        only_keys(j, {"space", "kind", "beta", "gamma"}, kind);
        if (space != "real") throw DomainError("Jacobi parameters describe measures on the real line");
        JacobiRep rep{get_vector(j, "beta"), get_vector(j, "gamma"), true};
        if (rep.beta.empty() || rep.beta.size() != rep.gamma.size())
            throw DomainError("\"beta\" and \"gamma\" must be non-empty and of equal length");
        return RealLineMeasure::from_jacobi(std::move(rep));
    }
    if (kind == "levy_free" || kind == "levy_boolean") {
        only_keys(j, {"space", "kind", "params", "atoms"}, kind);
        if (space != "real") throw DomainError("kind \"" + kind + "\" needs space \"real\"");
        const Params p = get_params(j);
        only_params(p, {"gamma"}, kind);
        LevyTripletAdditive lk{param_or(p, "gamma", 0.0), tau_from(get_atoms(j, false))};
        return kind == "levy_free" ? from_levy_additive_free(lk) : from_levy_additive_boolean(lk);
    }
    if (kind == "levy_mult") {
        only_keys(j, {"space", "kind", "params", "atoms"}, kind);
        const Params p = get_params(j);
        if (space == "circle") {
            only_params(p, {"gamma_arg"}, kind);
            return from_levy_mult_circle({param_or(p, "gamma_arg", 0.0), tau_from(get_atoms(j, false))});
        }
        if (space == "halfline") {
            only_params(p, {"a", "b"}, kind);
            return from_levy_mult_halfline(
                {param_or(p, "a", 0.0), param_or(p, "b", 0.0), tau_from(get_atoms(j, false))});
        }
        throw DomainError("kind \"levy_mult\" needs space \"circle\" or \"halfline\"");
    }
    throw DomainError("unknown kind \"" + kind + "\"");
}

AnyMeasure load_measure_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open measure spec '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_measure_spec(j);
}

std::optional<Json> measure_to_spec(const AnyMeasure& any) {
    if (const auto* m = std::get_if<RealLineMeasure>(&any)) {
        switch (m->rep) {
            case RealRep::Atoms:
                return Json{{"space", "real"}, {"kind", "atoms"}, {"atoms", atoms_json(m->atoms)}};
            case RealRep::ClosedForm:
                if (m->family == RealFamily::Point)
                    return Json{{"space", "real"}, {"kind", "closed_form"}, {"family", "point"},
                                {"params", {{"a", m->a}}}};
                if (m->family == RealFamily::Cauchy)
                    return Json{{"space", "real"}, {"kind", "closed_form"}, {"family", "cauchy"},
                                {"params", {{"a", m->a}, {"b", m->b}}}};
                return Json{{"space", "real"},
                            {"kind", "closed_form"},
                            {"family", "half_stable"},
                            {"params", {{"theta", 2.0 * std::arg(m->coef)}, {"scale", std::abs(m->coef)}}}};
            case RealRep::Jacobi:
                if (!m->jacobi.periodic) return std::nullopt;
                return Json{{"space", "real"}, {"kind", "jacobi"}, {"beta", m->jacobi.beta}, {"gamma", m->jacobi.gamma}};
            case RealRep::Transform:
                return std::nullopt;
        }
    }
    if (const auto* m = std::get_if<CircleMeasure>(&any)) {
        switch (m->rep) {
            case CircleRep::Atoms:
                return Json{{"space", "circle"}, {"kind", "atoms"}, {"atoms", atoms_json(m->atoms)}};
            case CircleRep::Haar:
                return Json{{"space", "circle"}, {"kind", "closed_form"}, {"family", "haar"}, {"params", Json::object()}};
            case CircleRep::Poisson:
                return Json{{"space", "circle"}, {"kind", "closed_form"}, {"family", "poisson_kernel"},
                            {"params", {{"a", m->a}, {"b", m->b}}}};
            case CircleRep::Eta:
                return std::nullopt;
        }
    }
    const auto& m = std::get<HalfLineMeasure>(any);
    switch (m.rep) {
        case HalfRep::Atoms:
            return Json{{"space", "halfline"}, {"kind", "atoms"}, {"atoms", atoms_json(m.atoms)}};
        case HalfRep::FreePoisson:
            return Json{{"space", "halfline"}, {"kind", "closed_form"}, {"family", "free_poisson"},
                        {"params", {{"lambda", m.lambda}}}};
        case HalfRep::Eta:
            return std::nullopt;
    }
    return std::nullopt;
}

Json number_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}

Json complex_json(cplx z) { return Json::array({number_json(z.real()), number_json(z.imag())}); }

Json indicator_json(const IndicatorEstimate& e) {
    Json probes = Json::array();
    for (const auto& [t, v] : e.probes) probes.push_back({number_json(t), number_json(v)});
    Json j{{"lower", number_json(e.lower)},
           {"upper", number_json(e.upper)},
           {"method", e.method},
           {"probes", probes}};
    if (e.inconclusive) j["inconclusive"] = true;
    if (!e.notes.empty()) j["notes"] = e.notes;
    return j;
}

Json report_json(const CheckReport& r) {
    Json cases = Json::array();
    for (const auto& c : r.cases) {
        Json cj{{"measure", c.measure},
                {"detail", c.detail},
                {"pass", c.pass},
                {"deviation", number_json(c.deviation)},
                {"relative", number_json(c.relative)},
                {"tol", number_json(c.tol)},
                {"witness", complex_json(c.witness)}};
        if (c.must_exceed) cj["must_exceed"] = true;
        if (!c.note.empty()) cj["note"] = c.note;
        cases.push_back(std::move(cj));
    }
    return Json{{"id", r.id},
                {"status", to_string(r.status)},
                {"max_deviation", number_json(r.max_deviation)},
                {"max_relative", number_json(r.max_relative)},
                {"witness", complex_json(r.witness)},
                {"cases", cases},
                {"incompatible", r.incompatible}};
}

Json summary_json(const HarnessSummary& s) {
    Json reports = Json::array();
    for (const auto& r : s.reports) reports.push_back(report_json(r));
    return Json{{"all_pass", s.all_pass()}, {"checks", reports}};
}

}  // namespace freeprob
