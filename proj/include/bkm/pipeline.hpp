#pragma once

#include "bkm/residuals.hpp"
#include "bkm/scenario.hpp"
#include "bkm/synthesis.hpp"

#include <map>
#include <string>

namespace bkm {

struct RunResult {
    Scenario scenario;          // with reduction.c replaced by c_new
    SolutionGrid solution;
    PhaseGrid phase;            // internal-time phase grid used for w-level checks
    std::vector<ResidualReport> reports;
    std::map<std::string, bool> check_results;
    bool passed = true;
};

/// Full pipeline: repair -> grid -> synthesis -> verification reports -> checks.
RunResult run_scenario(const Scenario& s, bool parallel = true);

/// Execute and write artifacts (solution.csv, phase.csv, meta.json, summary.txt,
/// frames/ when requested) under out_dir.
RunResult run_and_write(const Scenario& s, const std::string& out_dir, bool parallel = true);

/// Recompute the verification reports from a written solution directory.
struct VerifyResult {
    std::vector<ResidualReport> reports;
    std::map<std::string, bool> check_results;
    bool passed = true;
};
VerifyResult verify_directory(const std::string& dir, bool parallel = true);

/// Re-export a written solution: format is "csv" or "frames".
void export_directory(const std::string& dir, const std::string& format,
                      const std::string& out_dir);

/// Round-trip decimal formatting used by every CSV writer.
std::string format_double(double x);

} // namespace bkm
