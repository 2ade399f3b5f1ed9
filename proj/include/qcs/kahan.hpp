#pragma once

#include <cmath>

namespace qcs {

// Kahan-Babuska compensated accumulator. Addition order still matters for
// bit-reproducibility, so hot loops must feed it in a fixed sequence.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace qcs
