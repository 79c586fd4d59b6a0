#pragma once

#include <string>
#include <vector>

#include "hyperasym/config.hpp"

namespace hyperasym {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    // one "PASS|FAIL name: detail" line per check and a closing count
    std::string summary() const;
};

// Runs the module invariants on the configured problem at desk scale.
VerifyReport run_verify(const ProblemConfig& config);

}  // namespace hyperasym
