#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fasa/quadrature.hpp"

namespace fasa {

struct ReportRow {
    std::string suite;
    std::string fixture;
    double lambda = std::nan("");
    double p = std::nan("");
    double s = std::nan("");
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double error_budget = 0.0;
    std::string verdict;  // pass | fail | flagged
};

/// lhs == rhs within 3x the error budget.
ReportRow identity_row(std::string suite, std::string fixture, double lhs, double rhs,
                       double error_budget);

/// lhs <= rhs within 3x the error budget (margin = rhs - lhs).
ReportRow bound_row(std::string suite, std::string fixture, double lhs, double rhs,
                    double error_budget);

ReportRow flagged_row(std::string suite, std::string fixture, double lhs, double rhs,
                      std::string note = "flagged");

struct ProfilePoint {
    double lambda;
    double log_as;
};

struct ProfileData {
    std::string suite;
    std::string fixture;
    std::vector<ProfilePoint> points;
};

struct RunSummary {
    long pass = 0, fail = 0, flagged = 0;
};

RunSummary summarize(const std::vector<ReportRow>& rows);

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows,
                      bool timestamp);
void write_report_json(const std::string& path, const std::vector<ReportRow>& rows,
                       const IntegrationSpec& spec, std::uint64_t seed,
                       const std::vector<std::string>& suites);
void write_profile_data(const std::string& dir, const std::vector<ProfileData>& profiles);

std::string format_number(double v);

}  // namespace fasa
