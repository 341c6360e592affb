#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fasa/report.hpp"
#include "fasa/scenario.hpp"

namespace fasa {

struct SuiteResult {
    std::vector<ReportRow> rows;
    std::vector<ProfileData> profiles;
};

using SuiteFn = std::function<SuiteResult(const Scenario&)>;

struct SuiteInfo {
    std::string name;
    std::string description;
    SuiteFn run;
};

/// The verification suite catalog, in report order.
const std::vector<SuiteInfo>& suite_catalog();

/// Expand names (including the gaussian-smoke alias), run with a worker pool
/// of the given size, and return rows ordered by (suite, fixture, parameter).
SuiteResult run_suites(const Scenario& scenario, std::vector<std::string> names,
                       int jobs);

}  // namespace fasa
