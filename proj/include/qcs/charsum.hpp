#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qcs/arith.hpp"
#include "qcs/discriminant.hpp"

namespace qcs {

// chi_d(n) for 1 <= n <= limit, filled by complete multiplicativity off an
// SPF table so only primes pay for a Kronecker evaluation. Index 0 is unused.
struct CharTable {
    int64_t d = 0;
    std::vector<int8_t> values;

    int64_t limit() const { return static_cast<int64_t>(values.size()) - 1; }
    int operator()(int64_t n) const { return values[static_cast<size_t>(n)]; }
};

CharTable char_table(const FundamentalDiscriminant& d, int64_t limit, const SpfTable& spf);
CharTable char_table(const FundamentalDiscriminant& d, int64_t limit);

// sum of chi_d(n) for n <= x (empty sum for x < 1).
int64_t partial_sum(const FundamentalDiscriminant& d, double x, const SpfTable& spf);
int64_t partial_sum(const FundamentalDiscriminant& d, double x);

// sum of chi_d(n) e(n/|d|) over n <= |d|; equals sqrt(d) for d > 0 and
// i sqrt(|d|) for d < 0.
std::complex<double> gauss_sum(const FundamentalDiscriminant& d);

// canonical truncation length sqrt(|d| x) log |d|
double default_z(double abs_d, double x);
double default_z(const FundamentalDiscriminant& d, double x);

// w[m] = (1 - cos(2 pi m / x)) / m for 1 <= m <= zmax; w[0] = 0. Shared
// across discriminants: the weights depend only on x.
std::vector<double> cosine_weights(int64_t zmax, double x);

// sum of chi_d(m) w[m] for m <= z (compensated, fixed order)
double weighted_char_sum(const CharTable& table, const std::vector<double>& w, double z);

// Folded oscillating sums. For d > 0 the cosine component vanishes
// identically and for d < 0 the sine component does; the nonzero one is
//   C_d(z) = 2 sum_{m<=z} chi_d(m) (1 - cos(2 pi m / x)) / m     (d < 0)
//   S_d(z) = 2 sum_{m<=z} chi_d(m) sin(2 pi m / x) / m           (d > 0)
double c_component(const FundamentalDiscriminant& d, double z, double x);
double s_component(const FundamentalDiscriminant& d, double z, double x);
double c_component(const CharTable& table, double z, double x);
double s_component(const CharTable& table, double z, double x);

struct PolyaApprox {
    int64_t d = 0;
    double alpha = 0.0;   // cutoff fraction, sum runs to alpha |d|
    double z = 0.0;       // truncation length of the oscillating sum
    double c_part = 0.0;
    double s_part = 0.0;
    double approx = 0.0;  // (sqrt(|d|) / 2 pi) * the surviving component
    double err_bound = 0.0;
};

// Truncated expansion of the character sum up to alpha |d|, alpha in (0, 1),
// with the a-priori error envelope kappa (1 + |d| log |d| / z).
PolyaApprox polya_approx(const FundamentalDiscriminant& d, double alpha, double z,
                         double kappa = 10.0);

}  // namespace qcs
