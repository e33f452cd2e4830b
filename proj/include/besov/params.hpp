#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "besov/errors.hpp"

namespace besov {

// Shared parameter bundle: dimension n >= 2, weight alpha > 0, exponent
// p >= 1, derivative order m >= 1. q is the conjugate exponent.
struct Params {
    int n = 2;
    double alpha = 1.0;
    double p = 2.0;
    int m = 1;

    double q() const {
        if (p <= 1.0) return std::numeric_limits<double>::infinity();
        return p / (p - 1.0);
    }

    // pm - n > -1 and m > (n-1)/p are the same constraint; both forms kept
    // for the audit trail.
    bool admissible() const { return p * m - n > -1.0; }

    void validate() const {
        if (n < 2) throw domain_error("dimension must be at least 2");
        if (!(alpha > 0.0)) throw domain_error("alpha must be positive");
        if (!(p >= 1.0)) throw domain_error("p must be at least 1");
        if (m < 1) throw domain_error("derivative order must be at least 1");
    }
};

// Smallest admissible derivative order for given n, p.
inline int min_order(int n, double p) {
    return static_cast<int>(std::floor((n - 1) / p)) + 1;
}

}  // namespace besov
