#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qcs/charsum.hpp"
#include "qcs/discriminant.hpp"
#include "qcs/resonance.hpp"
#include "qcs/resonator.hpp"

using namespace qcs;

TEST_CASE("moment_m1 with the trivial set counts the window") {
    MomentM1 m = moment_m1(make_resonator_set({1}), 10000);
    CHECK(m.emp == doctest::Approx(6074.0));
    CHECK(m.count_range == 6074);
    CHECK(m.count_cumulative == 6086);
    CHECK(m.emp == static_cast<double>(m.count_range));
}

TEST_CASE("moment_m1 empirical tracks the main term") {
    MomentM1 m = moment_m1(make_resonator_set({2, 3}), 10000);
    CHECK(m.emp == doctest::Approx(8603.0));  // integer-exact sum of R_d^2
    double ratio = m.emp / m.main;
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.1);
    // crude ceiling N^2 * population
    CHECK(m.emp <= 4.0 * static_cast<double>(m.count_range));
}

TEST_CASE("moment_m2 frozen against a literal brute force") {
    // value fixed by an independent two-sided summation with canonical z
    double m2 = moment_m2(make_resonator_set({1}), 1000, 10.0);
    CHECK(m2 == doctest::Approx(1880.76999168517).epsilon(1e-9));
    CHECK(m2 >= 0.0);
}

TEST_CASE("resonance_quotient invariants on a small window") {
    ResonanceMoments m = resonance_quotient(make_resonator_set({2, 3}), 10000, 100.0);
    CHECK(m.m1_emp > 0.0);
    CHECK(m.m2_emp >= 0.0);
    CHECK(m.quotient == doctest::Approx(m.m2_emp / m.m1_emp).epsilon(1e-15));
    CHECK(m.max_c2 >= m.quotient);  // averaging pivot
    CHECK(m.count_range == 6074);
    CHECK(m.z_policy.x == 100.0);
    CHECK(m.z_policy.z_max <= 10000.0);

    // with the trivial set the quotient is the plain mean of C_d^2
    ResonanceMoments one = resonance_quotient(make_resonator_set({1}), 10000, 100.0);
    CHECK(one.m1_emp == doctest::Approx(6074.0));
    CHECK(one.quotient == doctest::Approx(one.m2_emp / 6074.0).epsilon(1e-12));
}

TEST_CASE("batch scoring equals one-set scoring") {
    std::vector<std::vector<int64_t>> sets{{2, 3}, {1}, {6, 10, 15}};
    QuotientBatch batch = resonance_quotient_batch(sets, 5000, 50.0);
    for (size_t i = 0; i < sets.size(); ++i) {
        ResonanceMoments single =
            resonance_quotient(make_resonator_set(sets[i]), 5000, 50.0);
        CHECK(batch.m1_emp[i] == single.m1_emp);  // bit-identical shared path
        CHECK(batch.m2_emp[i] == single.m2_emp);
        CHECK(batch.quotient[i] == single.quotient);
    }
    CHECK_THROWS_AS(resonance_quotient_batch({}, 5000, 50.0), std::domain_error);
}

TEST_CASE("z policy records the truncation") {
    // canonical z at X=1e4, x=1e3 is sqrt(2e7) log(2e4) ~ 4.4e4, over budget
    ResonanceMoments m = resonance_quotient(make_resonator_set({1}), 10000, 1000.0);
    CHECK(m.z_policy.truncated > 0);
    CHECK(m.z_policy.z_max == doctest::Approx(10000.0));
    CHECK(m.z_policy.budget == doctest::Approx(10000.0));

    ResonanceOptions wide;
    wide.z_budget = 1e9;
    ResonanceMoments free = resonance_quotient(make_resonator_set({1}), 1000, 10.0, wide);
    CHECK(free.z_policy.truncated == 0);
    CHECK(free.z_policy.z_max <= default_z(2000.0, 10.0));
    CHECK(free.z_policy.z_min >= default_z(1000.0, 10.0) - 1.0);
}

TEST_CASE("char_average literal cases") {
    CharAverageReport n1 = char_average(1, 100000);
    CHECK(n1.empirical == 60786);  // count of fundamental |d| <= 1e5
    CHECK(n1.main_term ==
          doctest::Approx(100000.0 * 6.0 / (M_PI * M_PI)).epsilon(1e-12));
    CHECK(std::abs(n1.residual) <= 50.0);

    CharAverageReport n4 = char_average(4, 100000);
    CHECK(n4.main_term > 0.0);  // square modulus keeps a main term
    CHECK(std::abs(static_cast<double>(n4.empirical) / 100000.0 -
                   (6.0 / (M_PI * M_PI)) * (2.0 / 3.0)) <= 0.01);

    CharAverageReport n2 = char_average(2, 100000);
    CHECK(n2.main_term == 0.0);
    CHECK(std::abs(static_cast<double>(n2.empirical)) <=
          std::pow(100000.0, 0.6));

    CharAverageReport n6 = char_average(6, 100000);
    CHECK(n6.main_term == 0.0);
    CHECK(n6.error_scale > 0.0);

    CHECK_THROWS_AS(char_average(0, 1000), std::domain_error);
}

TEST_CASE("char_average_multi shares one pass") {
    std::vector<CharAverageReport> reps = char_average_multi({1, 4, 2}, 50000);
    CHECK(reps[0].empirical == char_average(1, 50000).empirical);
    CHECK(reps[1].empirical == char_average(4, 50000).empirical);
    CHECK(reps[2].empirical == char_average(2, 50000).empirical);
}

TEST_CASE("predicted_bound clamps below the triple-log regime") {
    BoundParams b = predicted_bound(1000000, 100.0);
    CHECK(b.r == doctest::Approx(10.0));
    CHECK(b.clamped);
    CHECK(b.bound == doctest::Approx(526.752868321508).epsilon(1e-12));
    CHECK(b.bound >= std::sqrt(1000000.0 / 100.0));

    // r barely above e*e*e threshold: genuine asymptotic regime
    BoundParams a = predicted_bound(15000000000000LL, 1.0);
    CHECK_FALSE(a.clamped);
    CHECK(a.log3_term >= 1.0);

    CHECK_THROWS_AS(predicted_bound(4, 1.0), std::domain_error);     // r = 2 < e
    CHECK_THROWS_AS(predicted_bound(1000000, 0.0), std::domain_error);
}

TEST_CASE("full scan: population, ordering, identity") {
    ScanRun run = scan_extremal(1000, 10.0);
    CHECK(run.population == 611);
    CHECK(run.scored == 611);
    CHECK(static_cast<int64_t>(run.records.size()) == 611);
    CHECK(run.has_bound);  // sqrt(1000)/10 = 3.16 > e
    for (size_t i = 1; i < run.records.size(); ++i)
        CHECK(run.records[i - 1].normalized >= run.records[i].normalized);
    for (const ScanRecord& r : run.records) {
        double ad = static_cast<double>(r.d < 0 ? -r.d : r.d);
        CHECK(std::abs(r.sum) <= static_cast<int64_t>(ad / 10.0));
        CHECK(r.normalized * std::sqrt(ad / r.x) ==
              doctest::Approx(std::abs(static_cast<double>(r.sum))).epsilon(1e-9));
        CHECK_FALSE(r.has_r_weight);
    }
    // heavy tail at this small scale already
    double median = run.records[run.records.size() / 2].normalized;
    CHECK(run.records.front().normalized >= 2.0 * median);
}

TEST_CASE("guided scan with top_k = population equals the full scan") {
    ResonatorSet set = build_structured_set(16, default_friability(16));
    ScanOptions opts;
    opts.strategy = ScanStrategy::resonance_guided;
    opts.set = &set;
    opts.top_k = 100000;  // larger than the population on purpose
    ScanRun guided = scan_extremal(1000, 10.0, opts);
    CHECK(guided.top_k_clamped);
    CHECK(guided.scored == guided.population);

    ScanRun full = scan_extremal(1000, 10.0);
    REQUIRE(guided.records.size() == full.records.size());
    for (size_t i = 0; i < full.records.size(); ++i) {
        CHECK(guided.records[i].d == full.records[i].d);
        CHECK(guided.records[i].sum == full.records[i].sum);
        CHECK(guided.records[i].has_r_weight);
    }
}

TEST_CASE("guided scan scores the requested subset") {
    ResonatorSet set = build_structured_set(16, default_friability(16));
    ScanOptions opts;
    opts.strategy = ScanStrategy::resonance_guided;
    opts.set = &set;
    opts.top_k = 40;
    ScanRun run = scan_extremal(20000, 50.0, opts);
    CHECK(run.population > 10000);
    // top_k plus the 1% control sample, deduplicated
    CHECK(run.scored >= 40);
    CHECK(run.scored <= 40 + run.population / 100 + 1);
    CHECK_FALSE(run.top_k_clamped);
    for (const ScanRecord& r : run.records) CHECK(r.has_r_weight);

    ScanOptions missing;
    missing.strategy = ScanStrategy::resonance_guided;
    missing.top_k = 10;
    CHECK_THROWS_AS(scan_extremal(1000, 10.0, missing), std::domain_error);
}

TEST_CASE("scan rejects empty windows and bad cutoffs") {
    CHECK_THROWS_AS(scan_extremal(0, 10.0), std::domain_error);
    CHECK_THROWS_AS(scan_extremal(1000, 0.0), std::domain_error);
}

TEST_CASE("two scans with one configuration agree record by record") {
    ScanRun a = scan_extremal(3000, 20.0);
    ScanRun b = scan_extremal(3000, 20.0);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].d == b.records[i].d);
        CHECK(a.records[i].sum == b.records[i].sum);
        CHECK(a.records[i].normalized == b.records[i].normalized);
    }
}
