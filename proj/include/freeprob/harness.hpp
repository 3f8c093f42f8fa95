#pragma once

#include <optional>
#include <ostream>

#include "freeprob/measure.hpp"
#include "freeprob/transforms.hpp"

namespace freeprob {

struct NamedMeasure {
    std::string name;
    AnyMeasure measure;
};

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckCase {
    std::string measure;
    std::string detail;       // parameters of the case, e.g. "t=0.5 s=1"
    bool pass = false;
    double deviation = 0.0;   // raw sup-norm deviation
    double relative = 0.0;    // deviation divided by (1 + |reference|)
    double tol = 0.0;
    cplx witness{};
    std::string note;
    bool must_exceed = false;  // pass requires deviation > tol
};

struct CheckReport {
    std::string id;
    CheckStatus status = CheckStatus::Skipped;
    double max_deviation = 0.0;
    double max_relative = 0.0;
    cplx witness{};
    std::vector<CheckCase> cases;
    std::vector<std::string> incompatible;  // "measure: reason"
};

struct CheckInfo {
    std::string id;
    std::string spaces;       // "real", "circle", "halfline" or a comma list
    std::string description;
};

const std::vector<CheckInfo>& check_catalog();

/// Default measure sets by space ("real", "circle", "halfline").
std::vector<NamedMeasure> default_measures(const std::string& space);

/// Runs one check. `tol` <= 0 selects each case's built-in tolerance; a user grid
/// replaces the real parts of the upper half-plane sample points.
CheckReport run_check(const std::string& id, const std::vector<NamedMeasure>& measures,
                      const std::optional<GridSpec>& grid = std::nullopt, double tol = 0.0);

struct HarnessConfig {
    std::vector<std::string> checks;   // empty: every registered check
    std::vector<std::string> spaces;   // empty: every space; others are reported skipped
    std::optional<std::vector<NamedMeasure>> measures;  // replaces the default sets
    std::optional<GridSpec> grid;
    double tol = 0.0;
};

struct HarnessSummary {
    std::vector<CheckReport> reports;
    bool all_pass() const;
};

HarnessSummary run_all(const HarnessConfig& config = {});

std::string to_string(CheckStatus s);
void write_table(std::ostream& os, const HarnessSummary& summary);

/// f(x) = 2 (sin(theta)/2 - Im phi(x))^2 for the Boolean 1/2-stable law with b^2 = e^{i theta}.
double half_stable_aux(double theta, double x);

}  // namespace freeprob
