#pragma once

#include <string>
#include <vector>

namespace ubmot {

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct CriterionReport {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool pass() const;
    // One line: "PASS  3  tiny-N pdf oracle  (12/12 checks, 0.4 s)".
    std::string summary() const;
};

struct ValidateOptions {
    bool small_budget = false;  // Monte Carlo with 500 instead of 4000 trajectories
    int threads = 1;
    unsigned long long seed = 20240607;
};

constexpr int kCriteria = 11;

CriterionReport run_criterion(int id, const ValidateOptions& opt = {});

// closed-forms, cross-forms, limits, asymptotics, density, monte-carlo,
// refmodels, all
std::vector<int> suite_criteria(const std::string& suite);

std::string report_json(const std::vector<CriterionReport>& reports);

}  // namespace ubmot
