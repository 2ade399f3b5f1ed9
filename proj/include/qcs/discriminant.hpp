#pragma once

#include <cstdint>
#include <vector>

namespace qcs {

enum class Sign { both, positive, negative };

// A validated fundamental discriminant. parity records chi_d(-1): +1 for
// d > 0 (even character), -1 for d < 0 (odd character).
struct FundamentalDiscriminant {
    int64_t d;
    int parity;
};

// Membership test: d = 1 (mod 4) squarefree, or d = 4m with m = 2,3 (mod 4)
// squarefree. d = 1 is excluded. d = 0 is a domain error.
bool is_fundamental(int64_t d);

// Validating constructor; throws std::domain_error for non-members.
FundamentalDiscriminant make_fundamental(int64_t d);

struct DiscriminantRange {
    int64_t X;
    Sign sign_filter = Sign::both;
};

// All fundamental d with lo <= |d| <= hi, ordered by ascending |d| with the
// positive one first when both signs share an absolute value.
std::vector<int64_t> fundamental_between(int64_t lo, int64_t hi, Sign filter = Sign::both);

// The dyadic window X < |d| <= 2X used by the moment and scan routines.
std::vector<int64_t> fundamental_in(const DiscriminantRange& range);

// |{d fundamental : |d| <= limit}| without materializing the list.
int64_t count_fundamental_up_to(int64_t limit);

// flags[i] = 1 iff lo + i is squarefree, for the window [lo, hi].
std::vector<uint8_t> squarefree_flags(int64_t lo, int64_t hi);

}  // namespace qcs
