#include "qcs/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcs/arith.hpp"

namespace qcs {

namespace {

constexpr int64_t kChunk = 1 << 20;

int64_t mod4(int64_t v) { return ((v % 4) + 4) % 4; }

bool squarefree_small(int64_t n) { return factorize(n).squarefree(); }

// Dispatch one |d| value to the visitor, positive sign first. Returns via
// callback so enumeration and counting share the classification logic.
//
//   t = 1 (mod 4), t squarefree      ->  d = +t
//   t = 3 (mod 4), t squarefree      ->  d = -t
//   t = 4u, u squarefree:
//       u = 2,3 (mod 4)              ->  d = +t
//       u = 1,2 (mod 4)              ->  d = -t      (u = 2 yields both)
template <typename Visit>
void classify(int64_t t, const uint8_t* sf_t, int64_t t_base, const uint8_t* sf_u,
              int64_t u_base, Visit&& visit) {
    if (t == 1) return;  // d = 1 is excluded by convention
    switch (t & 3) {
        case 1:
            if (sf_t[t - t_base]) visit(t);
            break;
        case 3:
            if (sf_t[t - t_base]) visit(-t);
            break;
        case 0: {
            int64_t u = t >> 2;
            if (!sf_u[u - u_base]) break;
            int64_t r = u & 3;
            if (r == 2 || r == 3) visit(t);
            if (r == 1 || r == 2) visit(-t);
            break;
        }
        default:
            break;
    }
}

template <typename Visit>
void walk_range(int64_t lo, int64_t hi, Visit&& visit) {
    if (lo < 1) lo = 1;
    for (int64_t base = lo; base <= hi; base += kChunk) {
        int64_t top = std::min(hi, base + kChunk - 1);
        std::vector<uint8_t> sf_t = squarefree_flags(base, top);
        int64_t u_lo = std::max<int64_t>(1, (base + 3) / 4);
        int64_t u_hi = top / 4;
        std::vector<uint8_t> sf_u;
        if (u_hi >= u_lo) sf_u = squarefree_flags(u_lo, u_hi);
        for (int64_t t = base; t <= top; ++t)
            classify(t, sf_t.data(), base, sf_u.data(), u_lo, visit);
    }
}

}  // namespace

std::vector<uint8_t> squarefree_flags(int64_t lo, int64_t hi) {
    if (lo < 0 || hi < lo) throw std::domain_error("squarefree_flags: need 0 <= lo <= hi");
    std::vector<uint8_t> flags(static_cast<size_t>(hi - lo + 1), 1);
    if (lo == 0) flags[0] = 0;
    int64_t root = static_cast<int64_t>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) * (root + 1) <= hi) ++root;
    for (int64_t p : primes_up_to(root)) {
        int64_t q = p * p;
        int64_t start = ((lo + q - 1) / q) * q;
        if (start == 0) start = q;
        for (int64_t m = start; m <= hi; m += q) flags[static_cast<size_t>(m - lo)] = 0;
    }
    return flags;
}

bool is_fundamental(int64_t d) {
    if (d == 0) throw std::domain_error("is_fundamental: d = 0 is not a discriminant");
    if (d == 1) return false;
    int64_t m4 = mod4(d);
    if (m4 == 1) return squarefree_small(d > 0 ? d : -d);
    if (m4 == 0) {
        int64_t m = d / 4;
        int64_t r = mod4(m);
        if (r != 2 && r != 3) return false;
        return squarefree_small(m > 0 ? m : -m);
    }
    return false;
}

FundamentalDiscriminant make_fundamental(int64_t d) {
    if (!is_fundamental(d))
        throw std::domain_error("not a fundamental discriminant: " + std::to_string(d));
    return FundamentalDiscriminant{d, d > 0 ? 1 : -1};
}

std::vector<int64_t> fundamental_between(int64_t lo, int64_t hi, Sign filter) {
    std::vector<int64_t> out;
    if (hi < lo) return out;
    walk_range(lo, hi, [&](int64_t d) {
        if (filter == Sign::positive && d < 0) return;
        if (filter == Sign::negative && d > 0) return;
        out.push_back(d);
    });
    return out;
}

std::vector<int64_t> fundamental_in(const DiscriminantRange& range) {
    if (range.X < 1) throw std::domain_error("discriminant range needs X >= 1");
    return fundamental_between(range.X + 1, 2 * range.X, range.sign_filter);
}

int64_t count_fundamental_up_to(int64_t limit) {
    if (limit < 1) throw std::domain_error("count_fundamental_up_to: limit must be >= 1");
    int64_t count = 0;
    walk_range(1, limit, [&](int64_t) { ++count; });
    return count;
}

}  // namespace qcs
