#pragma once

#include <cstdint>
#include <vector>

#include "qcs/charsum.hpp"
#include "qcs/discriminant.hpp"
#include "qcs/resonator.hpp"

namespace qcs {

struct ResonanceOptions {
    // Ceiling on the oscillating-sum truncation length. The canonical per-d
    // length sqrt(|d| x) log |d| grows past any fixed budget once X is large;
    // the clamp keeps moment passes affordable and is recorded in ZPolicy.
    double z_budget = 10000.0;
    int threads = 1;  // 0 = hardware concurrency
};

struct ZPolicyRecord {
    double x = 0.0;
    double budget = 0.0;
    int64_t truncated = 0;  // negative d whose canonical z exceeded the budget
    double z_min = 0.0;
    double z_max = 0.0;
};

struct MomentM1 {
    double emp = 0.0;   // sum over X < |d| <= 2X of R_d^2 (integer-exact)
    double main = 0.0;  // (X / zeta(2)) sum_m prod_{p|m} p/(p+1), rescaled by
                        // the measured count ratio of (X, 2X] against [1, X]
    int64_t count_range = 0;
    int64_t count_cumulative = 0;
};

MomentM1 moment_m1(const ResonatorSet& set, int64_t X);

// M2 = sum over the window of R_d^2 C_d(z_d)^2; only d < 0 contribute since
// C vanishes for even characters. z_d = min(sqrt(|d| x) log |d|, budget).
double moment_m2(const ResonatorSet& set, int64_t X, double x,
                 const ResonanceOptions& opts = {});

struct ResonanceMoments {
    int64_t X = 0;
    double x = 0.0;
    ResonatorSet set;
    double m1_emp = 0.0;
    double m1_main = 0.0;
    double m2_emp = 0.0;
    double quotient = 0.0;  // m2_emp / m1_emp, a weighted average of C_d^2
    double max_c2 = 0.0;    // largest C_d(z_d)^2 in the window; >= quotient
    int64_t count_range = 0;
    int64_t count_cumulative = 0;
    ZPolicyRecord z_policy;
};

ResonanceMoments resonance_quotient(const ResonatorSet& set, int64_t X, double x,
                                    const ResonanceOptions& opts = {});

// One shared pass over the window scoring several element lists at once (the
// expensive C_d column does not depend on the set). No set validation here;
// baselines with no dyadic-band structure are welcome.
struct QuotientBatch {
    std::vector<double> m1_emp;
    std::vector<double> m2_emp;
    std::vector<double> quotient;
    double max_c2 = 0.0;
    int64_t count_range = 0;
    ZPolicyRecord z_policy;
};

QuotientBatch resonance_quotient_batch(const std::vector<std::vector<int64_t>>& sets,
                                       int64_t X, double x,
                                       const ResonanceOptions& opts = {});

// Average of chi_d(n) over fundamental |d| <= X: the empirical sum, the main
// term which survives exactly when n is a square, and the a-priori envelope
// X^(1/2+eps) f(n0) g(n1) for the residual.
struct CharAverageReport {
    int64_t n = 0;
    int64_t X = 0;
    int64_t empirical = 0;
    double main_term = 0.0;
    double residual = 0.0;
    double error_scale = 0.0;
};

CharAverageReport char_average(int64_t n, int64_t X, double eps = 0.1);
std::vector<CharAverageReport> char_average_multi(const std::vector<int64_t>& ns,
                                                  int64_t X, double eps = 0.1);

// The size the resonance machinery predicts for extreme normalized sums at
// scale (X, x):  sqrt(X/x) * exp(sqrt(L max(log3 r, 1) / log2 r)) with
// r = sqrt(X)/x, L = log r. Requires r > e; below e^e^e the triple log is
// clamped and the run is flagged.
struct BoundParams {
    int64_t X = 0;
    double x = 0.0;
    double r = 0.0;
    double L = 0.0;
    double log2_term = 0.0;
    double log3_term = 0.0;
    double bound = 0.0;
    bool clamped = false;
};

BoundParams predicted_bound(int64_t X, double x);

struct ScanRecord {
    int64_t d = 0;
    double x = 0.0;
    int64_t sum = 0;           // T(d), character sum over n <= |d| / x
    double normalized = 0.0;   // |sum| / sqrt(|d| / x)
    double r_weight = 0.0;     // R_d^2 under the guided strategy
    bool has_r_weight = false;
};

enum class ScanStrategy { full, resonance_guided };

struct ScanOptions {
    ScanStrategy strategy = ScanStrategy::full;
    int64_t top_k = 0;                  // guided: R^2-ranked prefix to score
    const ResonatorSet* set = nullptr;  // guided: required
    int threads = 1;
};

struct ScanRun {
    int64_t X = 0;
    double x = 0.0;
    std::vector<ScanRecord> records;  // normalized desc, then |d| asc, + first
    BoundParams bound;
    bool has_bound = false;  // predicted_bound needs sqrt(X)/x > e
    int64_t population = 0;  // fundamental d in the window
    int64_t scored = 0;
    bool top_k_clamped = false;
};

// Scores T(d) across the window. The guided strategy scores the top_k
// discriminants by resonator weight plus a fixed 1% control sample (every
// 100th in enumeration order).
ScanRun scan_extremal(int64_t X, double x, const ScanOptions& opts = {});

}  // namespace qcs
