#include "qcs/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qcs/kahan.hpp"

namespace qcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

int64_t abs64(int64_t v) { return v < 0 ? -v : v; }

std::vector<double> sine_weights(int64_t zmax, double x) {
    if (!(x > 0.0)) throw std::domain_error("sine weights need x > 0");
    std::vector<double> w(static_cast<size_t>(std::max<int64_t>(zmax, 0)) + 1, 0.0);
    for (int64_t m = 1; m <= zmax; ++m)
        w[static_cast<size_t>(m)] =
            std::sin(kTwoPi * static_cast<double>(m) / x) / static_cast<double>(m);
    return w;
}

}  // namespace

CharTable char_table(const FundamentalDiscriminant& d, int64_t limit, const SpfTable& spf) {
    if (limit < 0) throw std::domain_error("char_table: limit must be >= 0");
    if (limit > spf.limit())
        throw std::length_error("char_table: limit " + std::to_string(limit) +
                                " exceeds spf table limit " + std::to_string(spf.limit()));
    CharTable t;
    t.d = d.d;
    t.values.assign(static_cast<size_t>(limit) + 1, 0);
    if (limit >= 1) t.values[1] = 1;
    for (int64_t m = 2; m <= limit; ++m) {
        uint32_t p = spf[m];
        if (static_cast<int64_t>(p) == m) {
            t.values[static_cast<size_t>(m)] = static_cast<int8_t>(kronecker(d.d, m));
        } else {
            t.values[static_cast<size_t>(m)] = static_cast<int8_t>(
                t.values[p] * t.values[static_cast<size_t>(m / p)]);
        }
    }
    return t;
}

CharTable char_table(const FundamentalDiscriminant& d, int64_t limit) {
    if (limit < 0) throw std::domain_error("char_table: limit must be >= 0");
    if (limit <= 1) {
        CharTable t;
        t.d = d.d;
        t.values.assign(static_cast<size_t>(limit) + 1, 0);
        if (limit >= 1) t.values[1] = 1;
        return t;
    }
    SpfTable spf = sieve_spf(limit);
    return char_table(d, limit, spf);
}

int64_t partial_sum(const FundamentalDiscriminant& d, double x, const SpfTable& spf) {
    int64_t ell = static_cast<int64_t>(std::floor(x));
    if (ell < 1) return 0;
    CharTable t = char_table(d, ell, spf);
    int64_t sum = 0;
    for (int64_t n = 1; n <= ell; ++n) sum += t.values[static_cast<size_t>(n)];
    return sum;
}

int64_t partial_sum(const FundamentalDiscriminant& d, double x) {
    int64_t ell = static_cast<int64_t>(std::floor(x));
    if (ell < 1) return 0;
    if (ell <= 1024) {
        int64_t sum = 0;
        for (int64_t n = 1; n <= ell; ++n) sum += kronecker(d.d, n);
        return sum;
    }
    SpfTable spf = sieve_spf(ell);
    return partial_sum(d, x, spf);
}

std::complex<double> gauss_sum(const FundamentalDiscriminant& d) {
    int64_t q = abs64(d.d);
    CharTable t = char_table(d, q);
    KahanSum re, im;
    for (int64_t n = 1; n <= q; ++n) {
        int v = t.values[static_cast<size_t>(n)];
        if (v == 0) continue;
        double ang = kTwoPi * static_cast<double>(n) / static_cast<double>(q);
        re.add(v * std::cos(ang));
        im.add(v * std::sin(ang));
    }
    return {re.value(), im.value()};
}

double default_z(double abs_d, double x) {
    if (!(abs_d > 0.0)) throw std::domain_error("default_z: |d| must be positive");
    if (!(x > 0.0)) throw std::domain_error("default_z: x must be positive");
    return std::sqrt(abs_d * x) * std::log(abs_d);
}

double default_z(const FundamentalDiscriminant& d, double x) {
    return default_z(static_cast<double>(abs64(d.d)), x);
}

std::vector<double> cosine_weights(int64_t zmax, double x) {
    if (!(x > 0.0)) throw std::domain_error("cosine weights need x > 0");
    std::vector<double> w(static_cast<size_t>(std::max<int64_t>(zmax, 0)) + 1, 0.0);
    for (int64_t m = 1; m <= zmax; ++m)
        w[static_cast<size_t>(m)] =
            (1.0 - std::cos(kTwoPi * static_cast<double>(m) / x)) / static_cast<double>(m);
    return w;
}

double weighted_char_sum(const CharTable& table, const std::vector<double>& w, double z) {
    int64_t zi = static_cast<int64_t>(std::floor(z));
    if (zi < 1) return 0.0;
    if (zi > table.limit() || zi >= static_cast<int64_t>(w.size()))
        throw std::invalid_argument("weighted_char_sum: table or weights shorter than z");
    KahanSum acc;
    for (int64_t m = 1; m <= zi; ++m) {
        int v = table.values[static_cast<size_t>(m)];
        if (v > 0)
            acc.add(w[static_cast<size_t>(m)]);
        else if (v < 0)
            acc.add(-w[static_cast<size_t>(m)]);
    }
    return acc.value();
}

double c_component(const CharTable& table, double z, double x) {
    if (table.d > 0) return 0.0;  // the (1 - chi_d(-1)) prefactor kills it
    std::vector<double> w = cosine_weights(static_cast<int64_t>(std::floor(z)), x);
    return 2.0 * weighted_char_sum(table, w, z);
}

double s_component(const CharTable& table, double z, double x) {
    if (table.d < 0) return 0.0;  // the (1 + chi_d(-1)) prefactor kills it
    std::vector<double> w = sine_weights(static_cast<int64_t>(std::floor(z)), x);
    return 2.0 * weighted_char_sum(table, w, z);
}

double c_component(const FundamentalDiscriminant& d, double z, double x) {
    if (d.d > 0) return 0.0;
    CharTable t = char_table(d, static_cast<int64_t>(std::floor(z)));
    return c_component(t, z, x);
}

double s_component(const FundamentalDiscriminant& d, double z, double x) {
    if (d.d < 0) return 0.0;
    CharTable t = char_table(d, static_cast<int64_t>(std::floor(z)));
    return s_component(t, z, x);
}

PolyaApprox polya_approx(const FundamentalDiscriminant& d, double alpha, double z,
                         double kappa) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("polya_approx: alpha must lie in (0,1)");
    if (!(z > 0.0)) throw std::domain_error("polya_approx: z must be positive");
    if (!(kappa > 0.0)) throw std::domain_error("polya_approx: kappa must be positive");
    PolyaApprox out;
    out.d = d.d;
    out.alpha = alpha;
    out.z = z;
    double x = 1.0 / alpha;
    out.c_part = c_component(d, z, x);
    out.s_part = s_component(d, z, x);
    double ad = static_cast<double>(abs64(d.d));
    out.approx = std::sqrt(ad) / kTwoPi * (d.parity > 0 ? out.s_part : out.c_part);
    out.err_bound = kappa * (1.0 + ad * std::log(ad) / z);
    return out;
}

}  // namespace qcs
