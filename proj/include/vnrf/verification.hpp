// The acceptance checks, shared by `vnrf verify` and the acceptance test
// binary. Each check reports pass/fail with the measured numbers and its
// wall time; exceeding the time limit counts as a failure.
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vnrf {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

struct AcceptanceCheck {
    int id = 0;
    std::string name;
    double limit_seconds = 0.0;
    // Returns pass/fail and writes a one-line summary of the numbers.
    std::function<bool(std::string& detail)> run;
};

std::vector<AcceptanceCheck> acceptance_checks();

// Runs one check, timing it and turning exceptions into failures.
CheckResult run_check(const AcceptanceCheck& check);

// "PASS [3] name (1.2 s / limit 60 s): detail"
std::string format_result(const CheckResult& r);

} // namespace vnrf
