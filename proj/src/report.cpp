#include "fasa/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fasa {

ReportRow identity_row(std::string suite, std::string fixture, double lhs, double rhs,
                       double error_budget) {
    ReportRow row;
    row.suite = std::move(suite);
    row.fixture = std::move(fixture);
    row.lhs = lhs;
    row.rhs = rhs;
    row.margin = std::abs(lhs - rhs);
    row.error_budget = error_budget;
    row.verdict = row.margin <= 3.0 * error_budget ? "pass" : "fail";
    return row;
}

ReportRow bound_row(std::string suite, std::string fixture, double lhs, double rhs,
                    double error_budget) {
    ReportRow row;
    row.suite = std::move(suite);
    row.fixture = std::move(fixture);
    row.lhs = lhs;
    row.rhs = rhs;
    row.margin = rhs - lhs;
    row.error_budget = error_budget;
    row.verdict = row.margin >= -3.0 * error_budget ? "pass" : "fail";
    return row;
}

ReportRow flagged_row(std::string suite, std::string fixture, double lhs, double rhs,
                      std::string note) {
    ReportRow row;
    row.suite = std::move(suite);
    row.fixture = std::move(fixture);
    row.lhs = lhs;
    row.rhs = rhs;
    row.margin = rhs - lhs;
    row.verdict = std::move(note);
    return row;
}

RunSummary summarize(const std::vector<ReportRow>& rows) {
    RunSummary s;
    for (const auto& r : rows) {
        if (r.verdict == "pass")
            ++s.pass;
        else if (r.verdict == "fail")
            ++s.fail;
        else
            ++s.flagged;
    }
    return s;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows,
                      bool timestamp) {
    std::ofstream os(path);
    if (timestamp) {
        auto now = std::chrono::system_clock::now();
        os << "# generated "
           << std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()
           << "\n";
    }
    os << "suite,fixture,lambda,p,s,lhs,rhs,margin,error_budget,verdict\n";
    for (const auto& r : rows) {
        os << r.suite << ',' << r.fixture << ',' << format_number(r.lambda) << ','
           << format_number(r.p) << ',' << format_number(r.s) << ','
           << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
           << format_number(r.margin) << ',' << format_number(r.error_budget) << ','
           << r.verdict << "\n";
    }
}

void write_report_json(const std::string& path, const std::vector<ReportRow>& rows,
                       const IntegrationSpec& spec, std::uint64_t seed,
                       const std::vector<std::string>& suites) {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["suites"] = suites;
    doc["integration"] = {{"method", method_name(spec.method)},
                          {"budget", spec.budget},
                          {"rel_tol", spec.rel_tol},
                          {"tail_cutoff", spec.tail_cutoff}};
    nlohmann::json jrows = nlohmann::json::array();
    auto put = [](nlohmann::json& j, const char* key, double v) {
        if (!std::isnan(v)) j[key] = v;
    };
    for (const auto& r : rows) {
        nlohmann::json j;
        j["suite"] = r.suite;
        j["fixture"] = r.fixture;
        put(j, "lambda", r.lambda);
        put(j, "p", r.p);
        put(j, "s", r.s);
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        j["margin"] = r.margin;
        j["error_budget"] = r.error_budget;
        j["verdict"] = r.verdict;
        jrows.push_back(j);
    }
    doc["rows"] = jrows;
    RunSummary s = summarize(rows);
    doc["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"flagged", s.flagged}};
    doc["environment"] = {{"compiler",
#if defined(__clang__)
                           "clang"
#elif defined(__GNUC__)
                           "gcc"
#else
                           "unknown"
#endif
                          },
                          {"sizeof_double", sizeof(double)}};
    std::ofstream os(path);
    os << doc.dump(2) << "\n";
}

void write_profile_data(const std::string& dir, const std::vector<ProfileData>& profiles) {
    for (const auto& prof : profiles) {
        std::string path = dir + "/profile_" + prof.suite + "_" + prof.fixture + ".dat";
        std::ofstream os(path);
        os << "# lambda log_as\n";
        for (const auto& pt : prof.points)
            os << format_number(pt.lambda) << " " << format_number(pt.log_as) << "\n";
    }
}

}  // namespace fasa
