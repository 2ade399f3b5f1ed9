#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "qcs/arith.hpp"
#include "qcs/discriminant.hpp"

using namespace qcs;

namespace {

bool brute_squarefree(int64_t n) {
    for (int64_t q = 2; q * q <= n; ++q)
        if (n % (q * q) == 0) return false;
    return true;
}

// definition-level check, no shared code with the library path
bool brute_fundamental(int64_t d) {
    if (d == 0 || d == 1) return false;
    int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return brute_squarefree(d < 0 ? -d : d);
    if (d % 4 != 0) return false;
    int64_t m = d / 4;
    int64_t mr = ((m % 4) + 4) % 4;
    if (mr != 2 && mr != 3) return false;
    return brute_squarefree(m < 0 ? -m : m);
}

}  // namespace

TEST_CASE("is_fundamental literals") {
    CHECK(is_fundamental(5));
    CHECK_FALSE(is_fundamental(9));
    CHECK(is_fundamental(-4));
    CHECK_FALSE(is_fundamental(1));
    CHECK(is_fundamental(8));
    CHECK(is_fundamental(-8));
    CHECK_FALSE(is_fundamental(4));
    CHECK_FALSE(is_fundamental(-3 * 4));  // m = -3 = 1 mod 4
    CHECK(is_fundamental(-3));
    CHECK_THROWS_AS(is_fundamental(0), std::domain_error);
}

TEST_CASE("is_fundamental agrees with the definition up to 1e4") {
    for (int64_t t = 1; t <= 10000; ++t) {
        CHECK(is_fundamental(t) == brute_fundamental(t));
        CHECK(is_fundamental(-t) == brute_fundamental(-t));
    }
}

TEST_CASE("make_fundamental validates") {
    FundamentalDiscriminant d = make_fundamental(-3);
    CHECK(d.d == -3);
    CHECK(d.parity == -1);
    CHECK(make_fundamental(5).parity == 1);
    CHECK_THROWS_AS(make_fundamental(9), std::domain_error);
    CHECK_THROWS_AS(make_fundamental(1), std::domain_error);
}

TEST_CASE("window (2, 4] holds exactly -3 and -4") {
    CHECK(fundamental_in({2, Sign::both}) == std::vector<int64_t>{-3, -4});
    CHECK(fundamental_in({2, Sign::positive}).empty());
    CHECK(fundamental_in({2, Sign::negative}) == std::vector<int64_t>{-3, -4});
}

TEST_CASE("enumeration equals the membership filter") {
    for (int64_t X : {100, 1000, 10000}) {
        std::vector<int64_t> expect;
        for (int64_t t = X + 1; t <= 2 * X; ++t) {
            if (is_fundamental(t)) expect.push_back(t);   // positive first at equal |d|
            if (is_fundamental(-t)) expect.push_back(-t);
        }
        CHECK(fundamental_in({X, Sign::both}) == expect);
    }
}

TEST_CASE("sign filters partition the window") {
    std::vector<int64_t> both = fundamental_in({500, Sign::both});
    std::vector<int64_t> pos = fundamental_in({500, Sign::positive});
    std::vector<int64_t> neg = fundamental_in({500, Sign::negative});
    CHECK(both.size() == pos.size() + neg.size());
    for (int64_t d : pos) CHECK(d > 0);
    for (int64_t d : neg) CHECK(d < 0);
}

TEST_CASE("enumeration ascends in |d|") {
    std::vector<int64_t> ds = fundamental_between(2, 5000);
    for (size_t i = 1; i < ds.size(); ++i) {
        int64_t a = ds[i - 1] < 0 ? -ds[i - 1] : ds[i - 1];
        int64_t b = ds[i] < 0 ? -ds[i] : ds[i];
        CHECK(a <= b);
        if (a == b) {
            CHECK(ds[i - 1] > 0);
            CHECK(ds[i] < 0);
        }
    }
}

TEST_CASE("parity equals the sign and the character at -1") {
    int64_t sampled = 0;
    for (int64_t d : fundamental_between(2, 3000)) {
        FundamentalDiscriminant f{d, d > 0 ? 1 : -1};
        CHECK(f.parity == (d > 0 ? 1 : -1));
        CHECK(f.parity == kronecker(d, -1));
        ++sampled;
    }
    CHECK(sampled >= 1000);
}

TEST_CASE("counts: frozen values and density") {
    CHECK(count_fundamental_up_to(10000) == 6086);
    CHECK(count_fundamental_up_to(100000) == 60786);
    int64_t c = count_fundamental_up_to(1000000);
    CHECK(c == 607925);
    double main = 1000000.0 * 6.0 / (3.14159265358979323846 * 3.14159265358979323846);
    CHECK(std::abs(static_cast<double>(c) - main) / main <= 0.002);
    // window population equals the difference of cumulative counts
    CHECK(static_cast<int64_t>(fundamental_in({100000, Sign::both}).size()) ==
          count_fundamental_up_to(200000) - count_fundamental_up_to(100000));
}

TEST_CASE("squarefree_flags window") {
    std::vector<uint8_t> flags = squarefree_flags(48, 54);
    std::vector<uint8_t> expect{0, 0, 0, 1, 0, 1, 0};  // 48..54
    CHECK(flags == expect);
}

TEST_CASE("characters are nonvanishing on some coprime residue") {
    for (int64_t d : fundamental_between(2, 400)) {
        int64_t q = d < 0 ? -d : d;
        bool hit = false;
        for (int64_t n = 1; n <= q && !hit; ++n)
            if (kronecker(d, n) != 0) hit = true;
        CHECK(hit);
    }
}
