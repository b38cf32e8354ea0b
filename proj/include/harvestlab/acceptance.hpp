#pragma once

#include <string>
#include <vector>

namespace harvestlab::acceptance {

struct CheckLine {
    std::string text;
    bool pass = true;
};

struct CriterionResult {
    int id = 0;
    std::string suite;   // short name usable as a filter
    std::string title;
    bool pass = true;
    double seconds = 0.0;
    std::vector<CheckLine> lines;
};

/// Runs the acceptance criteria (all, or those whose suite name or numeric id
/// matches `filter`). Each criterion prints one PASS/FAIL line per check when
/// `verbose`; the caller owns exit-code policy.
std::vector<CriterionResult> run_criteria(const std::string& filter = "");

/// Formats one criterion block (verdict line plus indented check lines).
std::string format_result(const CriterionResult& r);

}  // namespace harvestlab::acceptance
