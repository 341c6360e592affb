#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fasa/bodies.hpp"
#include "fasa/oracle.hpp"
#include "fasa/quadrature.hpp"
#include "fasa/sconcave.hpp"

namespace fasa {

struct OracleFixture {
    std::string id;
    ConvexFunctionOracle oracle;
    std::optional<QuadraticForm> quadratic;  // closed forms available
    bool smooth = true;                      // C^2 strictly convex
    bool even = false;
};

struct BodyFixture {
    std::string id;
    ConvexBody body;
};

struct SFixture {
    std::string id;
    SConcaveFunction fs;
};

/// Resolved run configuration: fixtures, suite selection, integration
/// overrides, output paths and the mandatory seed.
struct Scenario {
    std::uint64_t seed = 0;
    std::vector<std::string> suites;  // empty: run the full catalog
    std::vector<OracleFixture> oracles;
    std::vector<BodyFixture> bodies;
    std::vector<SFixture> sprofiles;
    IntegrationSpec spec;
    std::vector<double> lambda_grid;
    std::string out_dir = "out";
    bool timestamp = true;
    bool json_summary = false;
    int jobs = 0;  // 0: hardware default

    /// Parse from the JSON scenario document; throws ScenarioError naming the
    /// offending key.
    static Scenario from_json_text(const std::string& text);
    static Scenario from_file(const std::string& path);

    /// Built-in fixture set used when no scenario file is given.
    static Scenario builtin(std::uint64_t seed);
};

std::vector<double> parse_lambda_grid(const std::string& grid);  // "a:b:k"

}  // namespace fasa
