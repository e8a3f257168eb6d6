#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace twd {

struct AcceptanceConfig {
    uint64_t seed = 0;
    bool full_scale = true;  // the CLI selftest runs reduced sizes
    std::string only;        // run only criteria whose name contains this
    long time_budget_ms = 0; // 0 = unlimited
};

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;
    bool all_passed() const;
};

/// Runs the acceptance criteria; when live is non-null a pass/fail line is
/// printed per criterion as it finishes.
AcceptanceReport run_acceptance(const AcceptanceConfig& cfg, std::ostream* live = nullptr);

}  // namespace twd
