#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "freeprob/harness.hpp"
#include "freeprob/measure.hpp"

namespace freeprob {

using Json = nlohmann::ordered_json;

/// Parses {"space", "kind", "family", "params", "atoms", "beta", "gamma"}.
/// Unknown keys, missing fields and wrong types raise DomainError.
AnyMeasure parse_measure_spec(const Json& j);
AnyMeasure load_measure_spec(const std::string& path);

/// Spec for measures with an exact representation (atoms, closed forms, Jacobi data);
/// nullopt for transform-only measures.
std::optional<Json> measure_to_spec(const AnyMeasure& m);

/// Infinite values are written as the strings "inf" and "-inf".
Json number_json(double x);
Json complex_json(cplx z);

Json indicator_json(const IndicatorEstimate& e);
Json report_json(const CheckReport& r);
Json summary_json(const HarnessSummary& s);

}  // namespace freeprob
