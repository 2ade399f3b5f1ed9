#include "qcs/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qcs/kahan.hpp"

namespace qcs {

namespace {

// Subset products of more than 22 primes would blow past 4M candidates;
// refuse rather than thrash.
constexpr size_t kMaxBasisPrimes = 22;

double pair_weight(int64_t a, int64_t b) {
    int64_t g = std::gcd(a, b);
    return static_cast<double>(g) /
           std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

// Shared accumulation for total and tail so both use one summation order.
GcdSumReport gcd_core(std::span<const int64_t> e, double threshold) {
    GcdSumReport rep;
    rep.threshold = threshold;
    KahanSum off, tail;
    size_t n = e.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            int64_t g = std::gcd(e[i], e[j]);
            double w = static_cast<double>(g) /
                       std::sqrt(static_cast<double>(e[i]) * static_cast<double>(e[j]));
            off.add(w);
            // lcm/gcd = (m/g)(n/g), exact in doubles at this scale
            double ratio =
                static_cast<double>(e[i] / g) * static_cast<double>(e[j] / g);
            if (ratio > threshold) tail.add(w);
        }
    }
    rep.total = static_cast<double>(n) + 2.0 * off.value();
    rep.tail = 2.0 * tail.value();
    return rep;
}

int64_t checked_subset_product(uint64_t mask, const std::vector<int64_t>& primes) {
    int64_t prod = 1;
    for (size_t i = 0; i < primes.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        if (prod > kMaxFactorInput / primes[i]) return -1;
        prod *= primes[i];
    }
    return prod;
}

}  // namespace

ResonatorSet make_resonator_set(std::vector<int64_t> elements) {
    if (elements.empty()) throw std::domain_error("resonator set must be nonempty");
    std::sort(elements.begin(), elements.end());
    if (elements.front() < 1)
        throw std::domain_error("resonator elements must be positive");
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        throw std::domain_error("resonator elements must be distinct");
    ResonatorSet set;
    for (int64_t m : elements) {
        FactoredInt f = factorize(m);
        if (!f.squarefree())
            throw std::domain_error("resonator element " + std::to_string(m) +
                                    " is not squarefree");
        set.friability = std::max(set.friability, f.p_plus);
    }
    set.elements = std::move(elements);
    return set;
}

GcdSumReport gcd_sum(const ResonatorSet& set) {
    GcdSumReport rep = gcd_core(set.elements, std::numeric_limits<double>::infinity());
    rep.tail = 0.0;
    return rep;
}

GcdSumReport gcd_sum_tail(const ResonatorSet& set, double threshold) {
    if (!(threshold > 0.0)) throw std::domain_error("gcd_sum_tail: threshold must be > 0");
    return gcd_core(set.elements, threshold);
}

double gcd_sum_over(std::span<const int64_t> elements) {
    return gcd_core(elements, std::numeric_limits<double>::infinity()).total;
}

double gcd_sum_tail_over(std::span<const int64_t> elements, double threshold) {
    return gcd_core(elements, threshold).tail;
}

std::vector<int64_t> friable_squarefree_up_to(int64_t y, int64_t cap) {
    if (y < 2) throw std::domain_error("friability bound must be >= 2");
    if (cap < 2) throw std::domain_error("cap must be >= 2");
    cap = std::min(cap, kMaxFactorInput);
    std::vector<int64_t> primes = primes_up_to(y);
    if (primes.size() > kMaxBasisPrimes)
        throw std::length_error("friable basis has " + std::to_string(primes.size()) +
                                " primes; bound is " + std::to_string(kMaxBasisPrimes));
    std::vector<int64_t> out;
    // DFS over the prime list; primes ascend, so overflow prunes whole branches
    struct Frame {
        size_t idx;
        int64_t prod;
    };
    std::vector<Frame> stack{{0, 1}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.idx == primes.size()) {
            if (f.prod > 1) out.push_back(f.prod);
            continue;
        }
        stack.push_back({f.idx + 1, f.prod});
        if (f.prod <= cap / primes[f.idx])
            stack.push_back({f.idx + 1, f.prod * primes[f.idx]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Minimal integer T whose window [T, 2T] holds >= N of the sorted values, or
// -1 when none does. The count as a function of T only grows at the entry
// points T = ceil(e/2), so scanning those in order finds the optimum.
int64_t smallest_window_start(const std::vector<int64_t>& sorted, int64_t N,
                              int64_t* best_count) {
    int64_t best = 0;
    for (int64_t e : sorted) {
        int64_t T = (e + 1) / 2;
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), T);
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), 2 * T);
        int64_t count = hi - lo;
        best = std::max(best, count);
        if (count >= N) {
            if (best_count) *best_count = count;
            return T;
        }
    }
    if (best_count) *best_count = best;
    return -1;
}

}  // namespace

ResonatorSet build_structured_set(int64_t N, int64_t y) {
    if (N < 1) throw std::domain_error("structured set needs N >= 1");
    std::vector<int64_t> cands = friable_squarefree_up_to(y, kMaxFactorInput);
    int64_t window_count = 0;
    int64_t T = smallest_window_start(cands, N, &window_count);
    if (T < 0)
        throw std::domain_error(
            "structured set infeasible: N=" + std::to_string(N) +
            " but the densest window [T,2T] of squarefree " + std::to_string(y) +
            "-friable integers holds only " + std::to_string(window_count) +
            "; increase y");
    auto first = std::lower_bound(cands.begin(), cands.end(), T);
    std::vector<int64_t> chosen(first, first + N);
    return make_resonator_set(std::move(chosen));
}

int64_t default_friability(int64_t N) {
    if (N < 1) throw std::domain_error("default_friability needs N >= 1");
    double base = N > 1 ? std::pow(std::log(static_cast<double>(N)), 1.5) : 0.0;
    int64_t y = std::max<int64_t>(2, static_cast<int64_t>(std::ceil(base)));
    for (;;) {
        std::vector<int64_t> primes = primes_up_to(y);
        if (primes.size() > kMaxBasisPrimes)
            throw std::domain_error("no feasible friability bound for N = " +
                                    std::to_string(N) + " within the prime-basis cap");
        if (!primes.empty()) {
            std::vector<int64_t> cands = friable_squarefree_up_to(y, kMaxFactorInput);
            if (smallest_window_start(cands, N, nullptr) > 0) return y;
        }
        // widen to the next prime; nothing changes between primes
        int64_t next = y + 1;
        while (!is_prime_u64(static_cast<uint64_t>(next))) ++next;
        y = next;
    }
}

ResonatorSet build_greedy_set(int64_t N, std::vector<int64_t> candidates) {
    if (N < 1) throw std::domain_error("greedy set needs N >= 1");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (!candidates.empty() && candidates.front() < 1)
        throw std::domain_error("greedy candidates must be positive");
    for (int64_t c : candidates)
        if (!factorize(c).squarefree())
            throw std::domain_error("greedy candidate " + std::to_string(c) +
                                    " is not squarefree");
    if (static_cast<int64_t>(candidates.size()) < N)
        throw std::domain_error("greedy construction needs at least N = " +
                                 std::to_string(N) + " candidates, got " +
                                 std::to_string(candidates.size()));
    if (N == 1) return make_resonator_set({candidates.front()});

    size_t k = candidates.size();
    size_t bi = 0, bj = 1;
    double best = -1.0;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            double w = pair_weight(candidates[i], candidates[j]);
            if (w > best) {  // ties keep the lexicographically smaller pair
                best = w;
                bi = i;
                bj = j;
            }
        }
    }

    std::vector<char> used(k, 0);
    std::vector<double> gain(k, 0.0);
    std::vector<int64_t> members{candidates[bi], candidates[bj]};
    used[bi] = used[bj] = 1;
    int64_t smin = candidates[bi], smax = candidates[bj];
    for (size_t c = 0; c < k; ++c) {
        if (used[c]) continue;
        gain[c] = pair_weight(candidates[c], candidates[bi]) +
                  pair_weight(candidates[c], candidates[bj]);
    }

    while (static_cast<int64_t>(members.size()) < N) {
        size_t pick = k;
        double best_gain = -1.0;
        for (size_t c = 0; c < k; ++c) {
            if (used[c]) continue;
            int64_t nmin = std::min(smin, candidates[c]);
            int64_t nmax = std::max(smax, candidates[c]);
            if (nmax > 2 * nmin) continue;
            if (gain[c] > best_gain) {  // candidates ascend, ties keep the smaller
                best_gain = gain[c];
                pick = c;
            }
        }
        if (pick == k)
            throw std::domain_error(
                "greedy construction ran out of band-compatible candidates at size " +
                std::to_string(members.size()) + " of " + std::to_string(N));
        used[pick] = 1;
        members.push_back(candidates[pick]);
        smin = std::min(smin, candidates[pick]);
        smax = std::max(smax, candidates[pick]);
        for (size_t c = 0; c < k; ++c)
            if (!used[c]) gain[c] += pair_weight(candidates[c], candidates[pick]);
    }
    return make_resonator_set(std::move(members));
}

ResonatorSet build_greedy_windowed(int64_t N, int64_t y, uint64_t seed) {
    if (N < 1) throw std::domain_error("greedy set needs N >= 1");
    std::vector<int64_t> cands = friable_squarefree_up_to(y, kMaxFactorInput);
    // One dyadic window keeps every subset band-compatible, so the greedy
    // loop can never strand itself. Prefer a window holding 2N candidates
    // (real freedom of choice); settle for N when y is too tight for that.
    int64_t T = smallest_window_start(cands, 2 * N, nullptr);
    if (T < 0) T = smallest_window_start(cands, N, nullptr);
    if (T < 0)
        throw std::domain_error("greedy construction infeasible: no dyadic window of "
                                 "squarefree " + std::to_string(y) +
                                 "-friable integers holds N = " + std::to_string(N));
    auto lo = std::lower_bound(cands.begin(), cands.end(), T);
    auto hi = std::upper_bound(cands.begin(), cands.end(), 2 * T);
    std::vector<int64_t> pool(lo, hi);
    int64_t pool_cap = std::max<int64_t>(8 * N, 512);
    if (static_cast<int64_t>(pool.size()) > pool_cap) {
        std::mt19937_64 rng(seed);
        // portable Fisher-Yates prefix (std::shuffle is not pinned down
        // across standard libraries)
        for (size_t i = 0; i < static_cast<size_t>(pool_cap); ++i) {
            size_t j = i + static_cast<size_t>(rng() % (pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(static_cast<size_t>(pool_cap));
    }
    return build_greedy_set(N, pool);
}

std::vector<int64_t> random_friable_set(int64_t N, int64_t y, uint64_t seed) {
    if (N < 1) throw std::domain_error("random set needs N >= 1");
    std::vector<int64_t> primes = primes_up_to(y);
    if (primes.empty()) throw std::domain_error("no primes <= " + std::to_string(y));
    if (primes.size() > kMaxBasisPrimes)
        throw std::length_error("friable basis has " + std::to_string(primes.size()) +
                                " primes; bound is " + std::to_string(kMaxBasisPrimes));
    size_t k = primes.size();
    uint64_t universe = (uint64_t{1} << k) - 1;
    if (universe < static_cast<uint64_t>(N))
        throw std::domain_error("only " + std::to_string(universe) +
                                " nonempty subset products of primes <= " +
                                std::to_string(y) + " exist; need " + std::to_string(N));
    std::mt19937_64 rng(seed);
    std::set<int64_t> picked;
    int64_t budget = 20000 * N + 20000;
    while (static_cast<int64_t>(picked.size()) < N && budget-- > 0) {
        uint64_t mask = rng() & universe;
        if (mask == 0) continue;
        int64_t prod = checked_subset_product(mask, primes);
        if (prod > 1) picked.insert(prod);
    }
    if (static_cast<int64_t>(picked.size()) < N)
        throw std::runtime_error("random draw budget exhausted before reaching N");
    return {picked.begin(), picked.end()};
}

int64_t resonator_value(const ResonatorSet& set, const FundamentalDiscriminant& d) {
    int64_t r = 0;
    for (int64_t m : set.elements) r += kronecker(d.d, m);
    return r;
}

int64_t inner_sum_pairs(int64_t m, int64_t n, int64_t kmax) {
    if (m < 1 || n < 1) throw std::domain_error("inner_sum_pairs: m, n must be positive");
    if (kmax < 0) throw std::domain_error("inner_sum_pairs: kmax must be >= 0");
    if (!factorize(m).squarefree() || !factorize(n).squarefree())
        throw std::domain_error("inner_sum_pairs: m and n must be squarefree");
    int64_t g = std::gcd(m, n);
    int64_t step = std::max(m, n) / g;          // largest of the coprime cofactors
    int64_t lmax = kmax / step;                  // k = (n/g) L, l = (m/g) L
    __int128 ratio = static_cast<__int128>(m / g) * (n / g);
    __int128 squares =
        static_cast<__int128>(lmax) * (lmax + 1) * (2 * lmax + 1) / 6;
    __int128 total = ratio * squares;
    if (total > std::numeric_limits<int64_t>::max())
        throw std::overflow_error("inner_sum_pairs overflows int64");
    return static_cast<int64_t>(total);
}

void save_resonator(const ResonatorSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# resonator N=" << set.size() << " y=" << set.friability << "\n";
    for (int64_t m : set.elements) out << m << "\n";
    if (!out.good()) throw std::runtime_error("failed while writing " + path);
}

ResonatorSet load_resonator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument(path + ": empty file");
    int64_t n = -1, y = -1;
    if (std::sscanf(header.c_str(), "# resonator N=%ld y=%ld", &n, &y) != 2)
        throw std::invalid_argument(path + ": malformed header '" + header + "'");
    std::vector<int64_t> elements;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t pos = 0;
        int64_t v = 0;
        try {
            v = std::stoll(line, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != line.size())
            throw std::invalid_argument(path + ": bad element line '" + line + "'");
        elements.push_back(v);
    }
    if (static_cast<int64_t>(elements.size()) != n)
        throw std::invalid_argument(path + ": header says N=" + std::to_string(n) +
                                 " but file has " + std::to_string(elements.size()) +
                                 " elements");
    ResonatorSet set = make_resonator_set(std::move(elements));
    if (set.friability > y)
        throw std::invalid_argument(path + ": header friability y=" + std::to_string(y) +
                                 " is below the actual largest prime factor " +
                                 std::to_string(set.friability));
    return set;
}

}  // namespace qcs
