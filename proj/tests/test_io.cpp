#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstdio>
#include <string>
#include <unistd.h>
#include <vector>

#include "qcs/io.hpp"
#include "qcs/kahan.hpp"
#include "qcs/parallel.hpp"
#include "qcs/verify.hpp"

using namespace qcs;

TEST_CASE("format_sig is stable and trim-free") {
    CHECK(format_sig(1.0) == "1");
    CHECK(format_sig(0.5) == "0.5");
    CHECK(format_sig(-3.0) == "-3");
    CHECK(format_sig(0.0) == "0");
    CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
    CHECK(format_sig(12345678901234.0) == "1.23456789012e+13");
    CHECK(format_sig(2.5) == format_sig(2.5));
}

TEST_CASE("scan CSV golden rendering") {
    std::vector<ScanRecord> recs(2);
    recs[0].d = -1679;
    recs[0].x = 10.0;
    recs[0].sum = 46;
    recs[0].normalized = 3.5;
    recs[0].r_weight = 9.0;
    recs[0].has_r_weight = true;
    recs[1].d = 5;
    recs[1].x = 10.0;
    recs[1].sum = 0;
    recs[1].normalized = 0.0;
    std::string csv = scan_records_csv(recs);
    CHECK(csv ==
          "d,x,sum,normalized,r_weight\n"
          "-1679,10,46,3.5,9\n"
          "5,10,0,0,\n");
}

TEST_CASE("write_file then read_file round-trips") {
    std::string path = "io_test_" + std::to_string(getpid()) + ".txt";
    write_file(path, "alpha\nbeta\n");
    CHECK(read_file(path) == "alpha\nbeta\n");
    write_file(path, "overwritten");
    CHECK(read_file(path) == "overwritten");
    std::remove(path.c_str());
    CHECK_THROWS(read_file(path));
}

TEST_CASE("kahan summation survives catastrophic cancellation") {
    KahanSum s;
    s.add(1e16);
    for (int i = 0; i < 10; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("block geometry is a fixed function of the range") {
    CHECK(block_count(1, 0) == 0);
    CHECK(block_count(1, 1) == 1);
    CHECK(block_count(1, kReductionBlock) == 1);
    CHECK(block_count(1, kReductionBlock + 1) == 2);
    // block boundaries depend on the range, never on the thread count
    std::vector<std::pair<int64_t, int64_t>> seen1, seen4;
    for_blocks(100, 400000, 1, [&](int64_t, int64_t lo, int64_t hi) {
        seen1.push_back({lo, hi});
    });
    std::vector<std::pair<int64_t, int64_t>> bounds(seen1.size());
    for_blocks(100, 400000, 4, [&](int64_t b, int64_t lo, int64_t hi) {
        bounds[static_cast<size_t>(b)] = {lo, hi};
    });
    CHECK(seen1 == bounds);
    int64_t covered = 0;
    for (auto [lo, hi] : seen1) covered += hi - lo + 1;
    CHECK(covered == 400000 - 100 + 1);
}

TEST_CASE("threaded reduction is bit-identical to serial") {
    auto run = [](int threads) {
        int64_t nb = block_count(1, 300000);
        std::vector<double> parts(static_cast<size_t>(nb));
        for_blocks(1, 300000, threads, [&](int64_t b, int64_t lo, int64_t hi) {
            KahanSum s;
            for (int64_t v = lo; v <= hi; ++v)
                s.add(1.0 / static_cast<double>(v));
            parts[static_cast<size_t>(b)] = s.value();
        });
        KahanSum total;
        for (double p : parts) total.add(p);
        return total.value();
    };
    double serial = run(1);
    double twice = run(1);
    double threaded = run(4);
    CHECK(serial == twice);
    CHECK(serial == threaded);  // identical block partials, identical merge
}

TEST_CASE("verify suites pass at reduced scale") {
    for (const CheckResult& r : verify_innersum()) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
    for (const CheckResult& r : verify_parity()) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
    VerifyOptions small;
    small.X = 100000;
    for (const CheckResult& r : verify_polya(small)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
    for (const CheckResult& r : verify_average(small)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
