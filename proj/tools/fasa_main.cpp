#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fasa/report.hpp"
#include "fasa/scenario.hpp"
#include "fasa/suites.hpp"

namespace {

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

int cmd_suites(bool as_json) {
    const auto& catalog = fasa::suite_catalog();
    if (as_json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& info : catalog)
            doc.push_back({{"name", info.name}, {"description", info.description}});
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& info : catalog)
            std::cout << info.name << "  -  " << info.description << "\n";
        std::cout << catalog.size() << " suites\n";
    }
    return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& suites_csv,
            std::uint64_t seed, bool seed_given, const std::string& out_dir,
            const std::string& lambda_grid, long budget, bool as_json, bool no_timestamp,
            int jobs) {
    fasa::Scenario scenario;
    try {
        if (!scenario_path.empty())
            scenario = fasa::Scenario::from_file(scenario_path);
        else
            scenario = fasa::Scenario::builtin(seed);
        if (seed_given && !scenario_path.empty()) {
            scenario.seed = seed;
            scenario.spec.seed = seed;
        }
        if (!lambda_grid.empty()) scenario.lambda_grid = fasa::parse_lambda_grid(lambda_grid);
        if (budget > 0) {
            scenario.spec.budget = budget;
            scenario.spec.validate();
        }
    } catch (const fasa::Error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    }
    if (!out_dir.empty()) scenario.out_dir = out_dir;
    if (no_timestamp) scenario.timestamp = false;
    if (jobs > 0) scenario.jobs = jobs;

    std::vector<std::string> names =
        suites_csv.empty() ? scenario.suites : split_names(suites_csv);

    fasa::SuiteResult result;
    try {
        result = fasa::run_suites(scenario, names, scenario.jobs);
    } catch (const fasa::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    }

    std::filesystem::create_directories(scenario.out_dir);
    fasa::write_report_csv(scenario.out_dir + "/report.csv", result.rows,
                           scenario.timestamp);
    std::vector<std::string> resolved =
        names.empty() ? std::vector<std::string>{"all"} : names;
    fasa::write_report_json(scenario.out_dir + "/report.json", result.rows, scenario.spec,
                            scenario.seed, resolved);
    fasa::write_profile_data(scenario.out_dir, result.profiles);

    fasa::RunSummary summary = fasa::summarize(result.rows);
    if (as_json) {
        nlohmann::json doc = {{"pass", summary.pass},
                              {"fail", summary.fail},
                              {"flagged", summary.flagged},
                              {"report", scenario.out_dir + "/report.csv"}};
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& row : result.rows) {
            if (row.verdict == "fail")
                std::cout << "FAIL  " << row.suite << " " << row.fixture
                          << " margin=" << row.margin << "\n";
        }
        std::cout << "pass " << summary.pass << ", fail " << summary.fail << ", flagged "
                  << summary.flagged << " -> " << scenario.out_dir << "/report.csv\n";
    }
    return summary.fail == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical checks for convex-duality surface-area identities"};
    app.require_subcommand(0, 1);

    auto* suites_cmd = app.add_subcommand("suites", "list verification suites");
    bool suites_json = false;
    suites_cmd->add_flag("--json", suites_json, "machine-readable catalog");

    auto* run_cmd = app.add_subcommand("run", "run verification suites");
    std::string scenario_path, suites_csv, out_dir, lambda_grid;
    std::uint64_t seed = 0;
    long budget = 0;
    bool as_json = false, no_timestamp = false;
    int jobs = 0;
    run_cmd->add_option("--scenario", scenario_path, "scenario JSON path");
    run_cmd->add_option("--suite", suites_csv, "comma-separated suite names");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "global RNG seed");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--lambda-grid", lambda_grid, "lambda grid a:b:k");
    run_cmd->add_option("--budget", budget, "integration evaluation budget");
    run_cmd->add_flag("--json", as_json, "JSON summary on stdout");
    run_cmd->add_flag("--no-timestamp", no_timestamp, "omit the CSV timestamp header");
    run_cmd->add_option("--jobs", jobs, "worker pool size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (suites_cmd->parsed()) return cmd_suites(suites_json);
    if (run_cmd->parsed())
        return cmd_run(scenario_path, suites_csv, seed, seed_opt->count() > 0, out_dir,
                       lambda_grid, budget, as_json, no_timestamp, jobs);
    std::cout << app.help();
    return 0;
}
