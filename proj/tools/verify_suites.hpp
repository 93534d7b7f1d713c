// verify_suites.hpp — The runtime invariant battery behind `wavescat verify`.
// Each check re-measures one library invariant on the configured grid/seed
// and reports the residual against its threshold; the printed table is the
// manifest mapping invariant -> suite.

#pragma once

#include <string>
#include <vector>

#include "wavescat/config.hpp"

namespace wavescat::verify {

struct CheckResult {
    std::string suite;
    std::string invariant;
    double residual = 0.0;
    double threshold = 0.0;
    std::string note; // free-form (recorded constants etc.)

    bool pass() const { return residual <= threshold; }
};

std::vector<CheckResult> run_all(const RunConfig& config);

} // namespace wavescat::verify
