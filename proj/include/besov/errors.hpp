#pragma once

#include <stdexcept>
#include <string>

namespace besov {

// Parameter outside the mathematical domain of the callee (alpha <= 0,
// |x| >= 1, negative-integer gamma argument, ...). Always a caller bug.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A series or expansion hit its term cap before meeting the requested
// tolerance. Carries enough state for the caller to decide whether the
// partial result is usable.
class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, double last_increment,
                     double tail_bound, int terms_used)
        : std::runtime_error(what),
          last_increment(last_increment),
          tail_bound(tail_bound),
          terms_used(terms_used) {}

    double last_increment;  // magnitude of the final term added
    double tail_bound;      // certified bound on the dropped tail, -1 if none
    int terms_used;
};

// Non-finite value produced while evaluating an integrand at a node.
class evaluation_error : public std::runtime_error {
public:
    explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace besov
