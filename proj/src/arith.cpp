#include "qcs/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include <unistd.h>

namespace qcs {

namespace {

std::atomic<int64_t> g_spf_cap{100'000'000};

std::string cache_path_for(int64_t limit) {
    const char* dir = std::getenv("RESONANCE_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::string(dir) + "/spf_" + std::to_string(limit) + ".u32";
}

bool load_cached(const std::string& path, std::vector<uint32_t>& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    in.seekg(0, std::ios::end);
    auto bytes = static_cast<size_t>(in.tellg());
    if (bytes != out.size() * sizeof(uint32_t)) return false;
    in.seekg(0);
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(bytes));
    return in.good();
}

void store_cached(const std::string& path, const std::vector<uint32_t>& spf) {
    std::string tmp = path + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        out.write(reinterpret_cast<const char*>(spf.data()),
                  static_cast<std::streamsize>(spf.size() * sizeof(uint32_t)));
        if (!out.good()) {
            out.close();
            std::remove(tmp.c_str());
            return;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::remove(tmp.c_str());
}

std::vector<uint32_t> build_spf(int64_t limit) {
    std::vector<uint32_t> spf(static_cast<size_t>(limit) + 1, 0);
    if (limit >= 1) spf[1] = 1;
    std::vector<uint32_t> primes;
    for (int64_t i = 2; i <= limit; ++i) {
        if (spf[static_cast<size_t>(i)] == 0) {
            spf[static_cast<size_t>(i)] = static_cast<uint32_t>(i);
            primes.push_back(static_cast<uint32_t>(i));
        }
        uint32_t si = spf[static_cast<size_t>(i)];
        for (uint32_t p : primes) {
            if (p > si || static_cast<int64_t>(p) * i > limit) break;
            spf[static_cast<size_t>(p) * static_cast<size_t>(i)] = p;
        }
    }
    return spf;
}

void check_spf_limit(int64_t limit) {
    if (limit < 1) throw std::domain_error("spf table limit must be >= 1");
    if (limit > spf_limit_cap())
        throw std::length_error("spf table limit " + std::to_string(limit) +
                                " exceeds cap " + std::to_string(spf_limit_cap()));
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Pollard rho, Brent variant. n must be odd composite.
uint64_t pollard_brent(uint64_t n) {
    for (uint64_t c = 1;; ++c) {
        uint64_t x = 2, y = 2, d = 1, q = 1, ys = 0, r = 1;
        const uint64_t m = 128;
        while (d == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (uint64_t k = 0; k < r && d == 1; k += m) {
                ys = y;
                uint64_t lim = std::min(m, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
            r *= 2;
        }
        if (d == n) {
            do {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
        // unlucky polynomial, retry with the next constant
    }
}

void factor_rec(uint64_t n, std::map<int64_t, int>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[static_cast<int64_t>(n)]++;
        return;
    }
    uint64_t d = (n % 2 == 0) ? 2 : pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

FactoredInt finish(int64_t n, std::vector<PrimePower> factors) {
    FactoredInt f;
    f.n = n;
    f.factors = std::move(factors);
    bool sqfree = true;
    for (const auto& pp : f.factors) {
        if (pp.e % 2 == 1) f.n0 *= pp.p;
        for (int i = 0; i < pp.e / 2; ++i) f.n1 *= pp.p;
        f.p_plus = std::max(f.p_plus, pp.p);
        if (pp.e > 1) sqfree = false;
    }
    f.mu = sqfree ? ((f.factors.size() % 2 == 0) ? 1 : -1) : 0;
    return f;
}

void check_factor_input(int64_t n) {
    if (n < 1 || n > kMaxFactorInput)
        throw std::range_error("factorize: n must lie in [1, 2^50], got " + std::to_string(n));
}

// trial primes shared by the table-free factorize path
const std::vector<int64_t>& small_trial_primes() {
    static const std::vector<int64_t> primes = primes_up_to(40'000);
    return primes;
}

}  // namespace

int64_t spf_limit_cap() { return g_spf_cap.load(); }

void set_spf_limit_cap(int64_t cap) {
    if (cap < 1) throw std::domain_error("spf cap must be >= 1");
    g_spf_cap.store(cap);
}

SpfTable::SpfTable(int64_t limit) : limit_(limit) {
    check_spf_limit(limit);
    spf_ = build_spf(limit);
}

SpfTable::SpfTable(int64_t limit, std::vector<uint32_t> raw)
    : limit_(limit), spf_(std::move(raw)) {}

SpfTable sieve_spf(int64_t limit) {
    check_spf_limit(limit);
    std::string path = cache_path_for(limit);
    if (!path.empty()) {
        std::vector<uint32_t> raw(static_cast<size_t>(limit) + 1, 0);
        // spot checks so a stale or foreign file cannot poison the run
        if (load_cached(path, raw) && (limit < 1 || raw[1] == 1) &&
            (limit < 4 || (raw[2] == 2 && raw[3] == 3 && raw[4] == 2)) &&
            (limit < 9 || raw[9] == 3)) {
            return SpfTable(limit, std::move(raw));
        }
        std::vector<uint32_t> built = build_spf(limit);
        store_cached(path, built);
        return SpfTable(limit, std::move(built));
    }
    return SpfTable(limit);
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // deterministic witness set for the full 64-bit range
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

FactoredInt factorize(int64_t n) {
    check_factor_input(n);
    std::vector<PrimePower> factors;
    int64_t rem = n;
    for (int64_t p : small_trial_primes()) {
        if (p * p > rem) break;
        if (rem % p == 0) {
            int e = 0;
            while (rem % p == 0) {
                rem /= p;
                ++e;
            }
            factors.push_back({p, e});
        }
    }
    if (rem > 1) {
        if (rem < small_trial_primes().back() * small_trial_primes().back() ||
            is_prime_u64(static_cast<uint64_t>(rem))) {
            factors.push_back({rem, 1});
        } else {
            std::map<int64_t, int> extra;
            factor_rec(static_cast<uint64_t>(rem), extra);
            for (auto& [p, e] : extra) factors.push_back({p, e});
            std::sort(factors.begin(), factors.end(),
                      [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
        }
    }
    return finish(n, std::move(factors));
}

FactoredInt factorize(int64_t n, const SpfTable& spf) {
    check_factor_input(n);
    if (n > spf.limit()) return factorize(n);
    std::vector<PrimePower> factors;
    int64_t rem = n;
    while (rem > 1) {
        int64_t p = spf[rem];
        int e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        factors.push_back({p, e});
    }
    return finish(n, std::move(factors));
}

/*
 * Kronecker symbol.  (d|0) is 1 exactly when |d| = 1.  (d|2) follows the
 * supplementary rule: 0 for even d, +1 for d = +-1 (mod 8), -1 for d = +-3
 * (mod 8).  Negative n contributes sign(d) through (d|-1).  The general case
 * peels factors of 2 from n, then runs the Jacobi reciprocity loop on the
 * odd part.
 */
int kronecker(int64_t d, int64_t n) {
    int result = 1;
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    if (d % 2 == 0 && n % 2 == 0) return 0;
    if (n < 0) {
        n = -n;
        if (d < 0) result = -result;
    }
    while (n % 2 == 0) {
        n /= 2;
        int64_t dm = ((d % 8) + 8) % 8;
        if (dm == 3 || dm == 5) result = -result;
    }
    // now n is odd and positive; the Jacobi symbol is periodic mod n, so the
    // numerator can be reduced into [0, n) with no sign correction
    int64_t a = d % n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int64_t nm = n % 8;
            if (nm == 3 || nm == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return (n == 1) ? result : 0;
}

double euler_factor_product(const FactoredInt& f) {
    double prod = 1.0;
    for (const auto& pp : f.factors)
        prod *= static_cast<double>(pp.p) / (static_cast<double>(pp.p) + 1.0);
    return prod;
}

double euler_factor_product(int64_t n) { return euler_factor_product(factorize(n)); }

double f_bound(int64_t n0, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("f_bound: eps must lie in (0,1)");
    FactoredInt f = factorize(n0);
    if (!f.squarefree()) throw std::domain_error("f_bound: n0 must be squarefree");
    if (n0 == 1) return 1.0;
    return std::exp(std::pow(std::log(static_cast<double>(n0)), 1.0 - eps));
}

double g_bound(int64_t n1, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("g_bound: eps must lie in (0,1)");
    FactoredInt f = factorize(n1);
    double prod = 1.0;
    for (const auto& pp : f.factors)
        prod *= 1.0 + std::pow(static_cast<double>(pp.p), -(0.5 + eps));
    return prod;
}

std::vector<int64_t> primes_up_to(int64_t limit) {
    std::vector<int64_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(static_cast<size_t>(limit) + 1, 0);
    for (int64_t i = 2; i <= limit; ++i) {
        if (!composite[static_cast<size_t>(i)]) {
            primes.push_back(i);
            for (int64_t j = i * i; j <= limit; j += i) composite[static_cast<size_t>(j)] = 1;
        }
    }
    return primes;
}

}  // namespace qcs
