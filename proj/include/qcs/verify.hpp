#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcs {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    int64_t X = 1'000'000;  // scale of the character-average sweep
    double epsilon = 0.1;
    double kappa = 10.0;
    int threads = 1;
};

// Closed-form pair sum against a literal double loop, full grid of
// squarefree m, n <= 30 and kmax <= 50. Exact equality.
std::vector<CheckResult> verify_innersum();

// Structural vanishing of the parity-killed component on sampled
// discriminants from (10^5, 2 10^5], plus a sanity count that the surviving
// component is generically nonzero.
std::vector<CheckResult> verify_parity();

// Truncated expansion against the exact partial sum on 50 sampled
// discriminants from (10^5, 2 10^5] at x = 50, canonical z, within the
// kappa (1 + |d| log|d| / z) envelope.
std::vector<CheckResult> verify_polya(const VerifyOptions& opts = {});

// Square/non-square dichotomy of the averaged character values over
// |d| <= X: squares track (X / zeta(2)) prod p/(p+1) within 2% of X,
// non-square squarefree moduli cancel to within 1% of X.
std::vector<CheckResult> verify_average(const VerifyOptions& opts = {});

}  // namespace qcs
