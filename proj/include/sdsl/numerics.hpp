#pragma once

#include <concepts>
#include <utility>

#include "sdsl/errors.hpp"

namespace sdsl {

// Real branches of the Lambert W function (inverse of w -> w*e^w).
// Principal (W0) is defined on x >= -1/e with W0 >= -1; NegativeOne (W-1) on
// -1/e <= x < 0 with W-1 <= -1.
enum class LambertBranch { Principal, NegativeOne };

// Solves w*e^w = x on the requested branch.
// Throws DomainError outside the branch domain, ConvergenceError if the
// iteration budget is exhausted.
double lambert_w(LambertBranch branch, double x);

// W-1 evaluated from L = ln(-x), i.e. W-1(-e^L) for L <= -1. Works far below
// the underflow threshold of -e^L itself (L ~ -1e5 is fine), which is the form
// needed when the argument is alpha^(M/N-1)/e with huge M/N.
double lambert_wm1_from_log(double log_neg_x);

// Central difference (f(x+h) - f(x-h)) / (2h).
template <std::invocable<double> F>
double finite_difference(F&& f, double x, double h) {
    return (std::forward<F>(f)(x + h) - std::forward<F>(f)(x - h)) / (2.0 * h);
}

}  // namespace sdsl
