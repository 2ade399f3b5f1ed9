#pragma once

#include <cstdint>
#include <vector>

namespace qcs {

// Largest n accepted by factorize(). Desk-scale inputs stay far below this;
// the cap keeps the 128-bit intermediate arithmetic comfortably exact.
inline constexpr int64_t kMaxFactorInput = int64_t{1} << 50;

struct PrimePower {
    int64_t p;
    int e;
    bool operator==(const PrimePower&) const = default;
};

// n together with its factorization and the derived quantities used all over:
// the squarefree split n = n0 * n1^2, the Moebius value, the largest prime
// factor. By convention P+(1) = 1.
struct FactoredInt {
    int64_t n = 1;
    std::vector<PrimePower> factors;  // ascending primes
    int64_t n0 = 1;                   // squarefree part
    int64_t n1 = 1;                   // cofactor, n = n0 * n1^2
    int mu = 1;                       // 0 when any exponent >= 2
    int64_t p_plus = 1;               // largest prime factor

    bool squarefree() const { return mu != 0; }
    bool is_square() const { return n0 == 1; }
};

// Smallest-prime-factor table. Immutable after construction, safe to share
// across threads. spf[1] = 1, spf[p] = p for primes.
class SpfTable {
public:
    explicit SpfTable(int64_t limit);
    int64_t limit() const { return limit_; }
    uint32_t operator[](int64_t n) const { return spf_[static_cast<size_t>(n)]; }

private:
    SpfTable(int64_t limit, std::vector<uint32_t> raw);
    friend SpfTable sieve_spf(int64_t limit);

    int64_t limit_;
    std::vector<uint32_t> spf_;
};

// Builds (or reloads) an SpfTable. When RESONANCE_CACHE_DIR names a writable
// directory the raw table is memoized there, keyed by limit.
SpfTable sieve_spf(int64_t limit);

// Guard against accidentally gigantic sieves. Default cap is 1e8 entries.
int64_t spf_limit_cap();
void set_spf_limit_cap(int64_t cap);

// Full factorization for 1 <= n <= kMaxFactorInput. Trial division backed by
// deterministic Miller-Rabin and Pollard rho for the hard leftovers. The
// SpfTable overload walks the table instead when n fits.
FactoredInt factorize(int64_t n);
FactoredInt factorize(int64_t n, const SpfTable& spf);

bool is_prime_u64(uint64_t n);

// Kronecker symbol (d|n), defined for all integer pairs.
int kronecker(int64_t d, int64_t n);

// prod over distinct primes p | n of p/(p+1); empty product = 1.
double euler_factor_product(const FactoredInt& f);
double euler_factor_product(int64_t n);

// exp((log n0)^(1-eps)) for squarefree n0, eps in (0,1).
double f_bound(int64_t n0, double eps);

// sum over squarefree divisors d of n1 of d^-(1/2+eps), i.e.
// prod over p | n1 of (1 + p^-(1/2+eps)).
double g_bound(int64_t n1, double eps);

std::vector<int64_t> primes_up_to(int64_t limit);

}  // namespace qcs
