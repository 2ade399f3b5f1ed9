#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcs/arith.hpp"
#include "qcs/discriminant.hpp"

namespace qcs {

// A finite set of squarefree positive integers. The build_* constructions
// additionally confine their output to one dyadic band (max <= 2 min), the
// shape the moment analysis assumes; hand-made sets may ignore the band.
struct ResonatorSet {
    std::vector<int64_t> elements;  // ascending, distinct
    int64_t friability = 1;         // max over elements of P+(m)

    int64_t size() const { return static_cast<int64_t>(elements.size()); }
    int64_t min_element() const { return elements.front(); }
    int64_t max_element() const { return elements.back(); }
    bool in_dyadic_band() const { return elements.back() <= 2 * elements.front(); }
};

// Validates (nonempty, positive, distinct, squarefree) and computes the
// friability bound. Throws std::domain_error on violations.
ResonatorSet make_resonator_set(std::vector<int64_t> elements);

struct GcdSumReport {
    double total = 0.0;      // sum over ordered pairs of sqrt(gcd/lcm)
    double tail = 0.0;       // contribution of distinct pairs with lcm/gcd > threshold
    double threshold = 0.0;
};

GcdSumReport gcd_sum(const ResonatorSet& set);
GcdSumReport gcd_sum_tail(const ResonatorSet& set, double threshold);

// Same sums over a plain element list (no set validation); lets baselines
// and experiments reuse the exact accumulation order.
double gcd_sum_over(std::span<const int64_t> elements);
double gcd_sum_tail_over(std::span<const int64_t> elements, double threshold);

// All nonempty products of distinct primes <= y that do not exceed cap,
// sorted ascending. These are exactly the squarefree y-friable integers > 1.
std::vector<int64_t> friable_squarefree_up_to(int64_t y, int64_t cap);

// Deterministic construction: among squarefree y-friable integers, find the
// smallest T whose dyadic window [T, 2T] holds at least N of them and take
// the N smallest inside it. Throws std::runtime_error when no window is
// dense enough (the failure message names the binding constraint).
ResonatorSet build_structured_set(int64_t N, int64_t y);

// ceil((log N)^1.5) escalated upward (prime by prime) until the structured
// construction above is feasible.
int64_t default_friability(int64_t N);

// Greedy growth by gcd-sum gain: seed with the best pair (best single
// element for N = 1), then repeatedly add the candidate with the largest
// marginal contribution among those keeping the set inside a dyadic band.
// Ties prefer the smaller element.
ResonatorSet build_greedy_set(int64_t N, std::vector<int64_t> candidates);

// Greedy over a concrete pool: squarefree y-friable integers around the
// structured window for the same (N, y), thinned to max(8N, 512) candidates
// with a seeded shuffle when oversized so pair seeding stays quadratic-cheap.
ResonatorSet build_greedy_windowed(int64_t N, int64_t y, uint64_t seed);

// N distinct random subset products of the primes <= y, for control
// experiments. Reproducible from the seed; no dyadic-band constraint.
std::vector<int64_t> random_friable_set(int64_t N, int64_t y, uint64_t seed);

// R_d = sum over elements m of chi_d(m)
int64_t resonator_value(const ResonatorSet& set, const FundamentalDiscriminant& d);

// sum of k*l over pairs with k m = l n and 1 <= k, l <= kmax, evaluated in
// closed form: solutions are (k, l) = (n/g, m/g) L, so the sum collapses to
// (m n / g^2) * sum of L^2. m, n squarefree. Exact; throws
// std::overflow_error if the value leaves the 64-bit range.
int64_t inner_sum_pairs(int64_t m, int64_t n, int64_t kmax);

// Text format: header "# resonator N=<N> y=<y>", then one element per line.
void save_resonator(const ResonatorSet& set, const std::string& path);
ResonatorSet load_resonator(const std::string& path);

}  // namespace qcs
