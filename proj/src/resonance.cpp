#include "qcs/resonance.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "qcs/kahan.hpp"
#include "qcs/parallel.hpp"

namespace qcs {

namespace {

constexpr double kZeta2 = std::numbers::pi_v<double> * std::numbers::pi_v<double> / 6.0;

int64_t abs64(int64_t v) { return v < 0 ? -v : v; }

// Evaluates R_d for every set from one Kronecker symbol per basis prime:
// chi_d of a squarefree element is the sign product over its prime support,
// so a zero mask and a negative-sign mask per d settle all elements with two
// ANDs and a popcount. Falls back to per-element symbols if the union of
// supports outgrows 63 primes.
struct SignBasis {
    const std::vector<std::vector<int64_t>>* sets = nullptr;
    std::vector<int64_t> primes;
    std::vector<std::vector<uint64_t>> masks;  // [set][element]
    bool mask_path = false;
};

SignBasis build_basis(const std::vector<std::vector<int64_t>>& sets) {
    SignBasis basis;
    basis.sets = &sets;
    std::set<int64_t> support;
    bool ok = true;
    for (const auto& s : sets) {
        for (int64_t m : s) {
            if (m < 1) throw std::domain_error("resonator elements must be positive");
            for (const auto& pp : factorize(m).factors) support.insert(pp.p);
        }
    }
    if (support.size() > 63) ok = false;
    if (!ok) return basis;
    basis.primes.assign(support.begin(), support.end());
    basis.masks.reserve(sets.size());
    for (const auto& s : sets) {
        std::vector<uint64_t> ms;
        ms.reserve(s.size());
        for (int64_t m : s) {
            uint64_t mask = 0;
            for (const auto& pp : factorize(m).factors) {
                size_t idx = static_cast<size_t>(
                    std::lower_bound(basis.primes.begin(), basis.primes.end(), pp.p) -
                    basis.primes.begin());
                mask |= uint64_t{1} << idx;
            }
            ms.push_back(mask);
        }
        basis.masks.push_back(std::move(ms));
    }
    basis.mask_path = true;
    return basis;
}

// fills r[s] = R_d for every set
void resonator_row(const SignBasis& basis, int64_t d, std::vector<int64_t>& r) {
    if (basis.mask_path) {
        uint64_t zero = 0, neg = 0;
        for (size_t i = 0; i < basis.primes.size(); ++i) {
            int s = kronecker(d, basis.primes[i]);
            if (s == 0)
                zero |= uint64_t{1} << i;
            else if (s < 0)
                neg |= uint64_t{1} << i;
        }
        for (size_t s = 0; s < basis.masks.size(); ++s) {
            int64_t sum = 0;
            for (uint64_t mask : basis.masks[s]) {
                if (mask & zero) continue;
                sum += 1 - 2 * static_cast<int>(std::popcount(mask & neg) & 1);
            }
            r[s] = sum;
        }
        return;
    }
    const auto& sets = *basis.sets;
    for (size_t s = 0; s < sets.size(); ++s) {
        int64_t sum = 0;
        for (int64_t m : sets[s]) sum += kronecker(d, m);
        r[s] = sum;
    }
}

void parallel_indices(size_t count, int threads,
                      const std::function<void(size_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads == 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    constexpr size_t kChunk = 64;
    auto worker = [&] {
        for (;;) {
            size_t base = next.fetch_add(kChunk);
            if (base >= count) return;
            size_t top = std::min(count, base + kChunk);
            for (size_t i = base; i < top; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(threads, static_cast<int>((count + kChunk - 1) / kChunk));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

double euler_sum_over(const std::vector<int64_t>& elements) {
    KahanSum s;
    for (int64_t m : elements) s.add(euler_factor_product(m));
    return s.value();
}

}  // namespace

QuotientBatch resonance_quotient_batch(const std::vector<std::vector<int64_t>>& sets,
                                       int64_t X, double x,
                                       const ResonanceOptions& opts) {
    if (X < 1) throw std::domain_error("moment window needs X >= 1");
    if (!(x > 0.0)) throw std::domain_error("moment pass needs x > 0");
    if (!(opts.z_budget >= 1.0)) throw std::domain_error("z budget must be >= 1");
    const size_t S = sets.size();
    if (S == 0) throw std::domain_error("no sets to score");

    QuotientBatch out;
    out.z_policy.x = x;
    out.z_policy.budget = opts.z_budget;

    // canonical z grows with |d|, so its value at 2X bounds the whole window
    double two_x = 2.0 * static_cast<double>(X);
    double z_ceiling = std::min(opts.z_budget, std::sqrt(two_x * x) * std::log(two_x));
    int64_t zmax = std::max<int64_t>(0, static_cast<int64_t>(std::floor(z_ceiling)));
    std::vector<double> weights = cosine_weights(zmax, x);
    SpfTable spf = sieve_spf(std::max<int64_t>(zmax, 1));
    SignBasis basis = build_basis(sets);

    int64_t lo = X + 1, hi = 2 * X;
    int64_t nb = block_count(lo, hi);

    struct BlockAcc {
        std::vector<int64_t> m1;
        std::vector<double> m2;
        double max_c2 = 0.0;
        int64_t truncated = 0;
        double z_min = std::numeric_limits<double>::infinity();
        double z_max = 0.0;
        int64_t count = 0;
        bool any_negative = false;
    };
    std::vector<BlockAcc> acc(static_cast<size_t>(nb));

    for_blocks(lo, hi, opts.threads, [&](int64_t b, int64_t blo, int64_t bhi) {
        BlockAcc a;
        a.m1.assign(S, 0);
        std::vector<KahanSum> m2(S);
        std::vector<int64_t> r(S);
        std::vector<int64_t> ds = fundamental_between(blo, bhi);
        a.count = static_cast<int64_t>(ds.size());
        for (int64_t d : ds) {
            resonator_row(basis, d, r);
            double c2 = 0.0;
            if (d < 0) {
                double ad = static_cast<double>(-d);
                double canonical = std::sqrt(ad * x) * std::log(ad);
                double zd = canonical;
                if (canonical > opts.z_budget) {
                    zd = opts.z_budget;
                    ++a.truncated;
                }
                a.any_negative = true;
                a.z_min = std::min(a.z_min, zd);
                a.z_max = std::max(a.z_max, zd);
                int64_t zi = static_cast<int64_t>(std::floor(zd));
                CharTable t = char_table(FundamentalDiscriminant{d, -1}, zi, spf);
                double c = 2.0 * weighted_char_sum(t, weights, static_cast<double>(zi));
                c2 = c * c;
                a.max_c2 = std::max(a.max_c2, c2);
            }
            for (size_t s = 0; s < S; ++s) {
                a.m1[s] += r[s] * r[s];
                if (c2 != 0.0 && r[s] != 0)
                    m2[s].add(static_cast<double>(r[s] * r[s]) * c2);
            }
        }
        a.m2.resize(S);
        for (size_t s = 0; s < S; ++s) a.m2[s] = m2[s].value();
        acc[static_cast<size_t>(b)] = std::move(a);
    });

    std::vector<int64_t> m1_total(S, 0);
    std::vector<KahanSum> m2_total(S);
    double zlo = std::numeric_limits<double>::infinity(), zhi = 0.0;
    bool any_negative = false;
    for (const BlockAcc& a : acc) {
        out.count_range += a.count;
        out.z_policy.truncated += a.truncated;
        out.max_c2 = std::max(out.max_c2, a.max_c2);
        if (a.any_negative) {
            any_negative = true;
            zlo = std::min(zlo, a.z_min);
            zhi = std::max(zhi, a.z_max);
        }
        for (size_t s = 0; s < S; ++s) {
            m1_total[s] += a.m1[s];
            m2_total[s].add(a.m2[s]);
        }
    }
    if (any_negative) {
        out.z_policy.z_min = zlo;
        out.z_policy.z_max = zhi;
    }
    if (out.count_range == 0)
        throw std::domain_error("no fundamental discriminants in (X, 2X] for X = " +
                                std::to_string(X));

    out.m1_emp.resize(S);
    out.m2_emp.resize(S);
    out.quotient.resize(S);
    for (size_t s = 0; s < S; ++s) {
        out.m1_emp[s] = static_cast<double>(m1_total[s]);
        out.m2_emp[s] = m2_total[s].value();
        out.quotient[s] = m1_total[s] > 0
                              ? out.m2_emp[s] / out.m1_emp[s]
                              : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

MomentM1 moment_m1(const ResonatorSet& set, int64_t X) {
    if (X < 1) throw std::domain_error("moment window needs X >= 1");
    std::vector<std::vector<int64_t>> sets{set.elements};
    SignBasis basis = build_basis(sets);

    int64_t lo = X + 1, hi = 2 * X;
    int64_t nb = block_count(lo, hi);
    std::vector<int64_t> sums(static_cast<size_t>(nb), 0);
    std::vector<int64_t> counts(static_cast<size_t>(nb), 0);
    for_blocks(lo, hi, 1, [&](int64_t b, int64_t blo, int64_t bhi) {
        std::vector<int64_t> r(1);
        int64_t total = 0, count = 0;
        for (int64_t d : fundamental_between(blo, bhi)) {
            resonator_row(basis, d, r);
            total += r[0] * r[0];
            ++count;
        }
        sums[static_cast<size_t>(b)] = total;
        counts[static_cast<size_t>(b)] = count;
    });

    MomentM1 out;
    int64_t emp = 0;
    for (size_t b = 0; b < sums.size(); ++b) {
        emp += sums[b];
        out.count_range += counts[b];
    }
    if (out.count_range == 0)
        throw std::domain_error("no fundamental discriminants in (X, 2X] for X = " +
                                std::to_string(X));
    out.count_cumulative = count_fundamental_up_to(X);
    out.emp = static_cast<double>(emp);
    double ratio = static_cast<double>(out.count_range) /
                   static_cast<double>(out.count_cumulative);
    out.main = static_cast<double>(X) / kZeta2 * euler_sum_over(set.elements) * ratio;
    return out;
}

double moment_m2(const ResonatorSet& set, int64_t X, double x,
                 const ResonanceOptions& opts) {
    return resonance_quotient_batch({set.elements}, X, x, opts).m2_emp[0];
}

ResonanceMoments resonance_quotient(const ResonatorSet& set, int64_t X, double x,
                                    const ResonanceOptions& opts) {
    QuotientBatch batch = resonance_quotient_batch({set.elements}, X, x, opts);
    ResonanceMoments out;
    out.X = X;
    out.x = x;
    out.set = set;
    out.m1_emp = batch.m1_emp[0];
    out.m2_emp = batch.m2_emp[0];
    out.quotient = batch.quotient[0];
    out.max_c2 = batch.max_c2;
    out.count_range = batch.count_range;
    out.count_cumulative = count_fundamental_up_to(X);
    out.z_policy = batch.z_policy;
    double ratio = static_cast<double>(out.count_range) /
                   static_cast<double>(out.count_cumulative);
    out.m1_main = static_cast<double>(X) / kZeta2 * euler_sum_over(set.elements) * ratio;
    return out;
}

std::vector<CharAverageReport> char_average_multi(const std::vector<int64_t>& ns,
                                                  int64_t X, double eps) {
    if (X < 1) throw std::domain_error("char_average needs X >= 1");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("char_average: eps must lie in (0,1)");
    std::vector<CharAverageReport> reports;
    reports.reserve(ns.size());
    for (int64_t n : ns) {
        if (n < 1) throw std::domain_error("char_average modulus must be positive");
        FactoredInt f = factorize(n);
        CharAverageReport rep;
        rep.n = n;
        rep.X = X;
        rep.main_term =
            f.is_square() ? static_cast<double>(X) / kZeta2 * euler_factor_product(f) : 0.0;
        rep.error_scale = std::pow(static_cast<double>(X), 0.5 + eps) *
                          f_bound(f.n0, eps) * g_bound(f.n1, eps);
        reports.push_back(rep);
    }
    // one enumeration pass feeds every modulus
    constexpr int64_t kSeg = 1 << 20;
    for (int64_t base = 1; base <= X; base += kSeg) {
        int64_t top = std::min(X, base + kSeg - 1);
        for (int64_t d : fundamental_between(base, top)) {
            for (size_t i = 0; i < reports.size(); ++i)
                reports[i].empirical += kronecker(d, ns[i]);
        }
    }
    for (auto& rep : reports)
        rep.residual = static_cast<double>(rep.empirical) - rep.main_term;
    return reports;
}

CharAverageReport char_average(int64_t n, int64_t X, double eps) {
    return char_average_multi({n}, X, eps)[0];
}

BoundParams predicted_bound(int64_t X, double x) {
    if (X < 1) throw std::domain_error("predicted_bound needs X >= 1");
    if (!(x > 0.0)) throw std::domain_error("predicted_bound needs x > 0");
    BoundParams out;
    out.X = X;
    out.x = x;
    out.r = std::sqrt(static_cast<double>(X)) / x;
    if (!(out.r > std::numbers::e_v<double>))
        throw std::domain_error("predicted_bound needs sqrt(X)/x > e; got r = " +
                                std::to_string(out.r));
    out.L = std::log(out.r);
    out.log2_term = std::log(out.L);
    out.log3_term = std::log(out.log2_term);
    double inner = std::max(out.log3_term, 1.0);
    out.clamped = out.log3_term < 1.0;
    out.bound = std::sqrt(static_cast<double>(X) / x) *
                std::exp(std::sqrt(out.L * inner / out.log2_term));
    return out;
}

ScanRun scan_extremal(int64_t X, double x, const ScanOptions& opts) {
    if (X < 1) throw std::domain_error("scan window needs X >= 1");
    if (!(x > 0.0)) throw std::domain_error("scan needs x > 0");
    ScanRun run;
    run.X = X;
    run.x = x;

    std::vector<int64_t> ds = fundamental_in({X, Sign::both});
    run.population = static_cast<int64_t>(ds.size());
    if (run.population == 0)
        throw std::domain_error("no fundamental discriminants in (X, 2X] for X = " +
                                std::to_string(X));

    const bool guided = opts.strategy == ScanStrategy::resonance_guided;
    std::vector<int64_t> r2;
    std::vector<size_t> chosen;
    if (guided) {
        if (!opts.set) throw std::domain_error("guided scan requires a resonator set");
        if (opts.top_k < 1) throw std::domain_error("guided scan needs top_k >= 1");
        int64_t top_k = opts.top_k;
        if (top_k > run.population) {
            top_k = run.population;
            run.top_k_clamped = true;
        }
        std::vector<std::vector<int64_t>> sets{opts.set->elements};
        SignBasis basis = build_basis(sets);
        r2.resize(ds.size());
        std::vector<int64_t> r(1);
        for (size_t i = 0; i < ds.size(); ++i) {
            resonator_row(basis, ds[i], r);
            r2[i] = r[0] * r[0];
        }
        std::vector<size_t> order(ds.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (r2[a] != r2[b]) return r2[a] > r2[b];
            int64_t aa = abs64(ds[a]), ab = abs64(ds[b]);
            if (aa != ab) return aa < ab;
            return ds[a] > ds[b];
        });
        std::vector<char> take(ds.size(), 0);
        for (int64_t i = 0; i < top_k; ++i) take[order[static_cast<size_t>(i)]] = 1;
        // fixed 1% control sample, independent of the resonator
        for (size_t i = 0; i < ds.size(); i += 100) take[i] = 1;
        for (size_t i = 0; i < ds.size(); ++i)
            if (take[i]) chosen.push_back(i);
    } else {
        chosen.resize(ds.size());
        for (size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
    }

    int64_t ell_max = static_cast<int64_t>(std::floor(2.0 * static_cast<double>(X) / x));
    SpfTable spf = sieve_spf(std::max<int64_t>(ell_max, 2));

    run.records.resize(chosen.size());
    parallel_indices(chosen.size(), opts.threads, [&](size_t i) {
        size_t idx = chosen[i];
        int64_t d = ds[idx];
        double ad = static_cast<double>(abs64(d));
        FundamentalDiscriminant fd{d, d > 0 ? 1 : -1};
        ScanRecord rec;
        rec.d = d;
        rec.x = x;
        rec.sum = partial_sum(fd, ad / x, spf);
        rec.normalized = std::abs(static_cast<double>(rec.sum)) / std::sqrt(ad / x);
        if (guided) {
            rec.r_weight = static_cast<double>(r2[idx]);
            rec.has_r_weight = true;
        }
        run.records[i] = rec;
    });
    run.scored = static_cast<int64_t>(run.records.size());

    std::sort(run.records.begin(), run.records.end(),
              [](const ScanRecord& a, const ScanRecord& b) {
                  if (a.normalized != b.normalized) return a.normalized > b.normalized;
                  int64_t aa = abs64(a.d), ab = abs64(b.d);
                  if (aa != ab) return aa < ab;
                  return a.d > b.d;
              });

    double r = std::sqrt(static_cast<double>(X)) / x;
    if (r > std::numbers::e_v<double>) {
        run.bound = predicted_bound(X, x);
        run.has_bound = true;
    }
    return run;
}

}  // namespace qcs
