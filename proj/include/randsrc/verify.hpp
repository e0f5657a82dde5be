#pragma once

#include <string>
#include <vector>

namespace randsrc {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

enum class VerifySuite { kernel, isometry, variance, oracle };

/// Runs one of the built-in validation suites:
///   kernel   - kernel series limits against independent Poisson-flux oracles,
///   isometry - statistical checks of the increment streams,
///   variance - measured V_j against the analytic variance identity,
///   oracle   - FDM solutions against the spectral simulator, shared noise.
VerifyReport verify(VerifySuite suite);

VerifySuite parse_suite(const std::string& name);
std::string suite_name(VerifySuite suite);

}  // namespace randsrc
