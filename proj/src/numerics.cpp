#include "sdsl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdsl {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kStepTol = 1e-14;
constexpr double kInvE = 0.36787944117144233;  // 1/e

double halley_direct(double x, double w) {
    // Halley on f(w) = w*e^w - x. Near the branch point f' -> 0 and the
    // computed step bottoms out on cancellation noise; stop once it no
    // longer shrinks.
    double last_step = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kMaxIterations; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = ew * (w + 1.0);
        const double fpp = ew * (w + 2.0);
        const double step = f / (fp - 0.5 * fpp * f / fp);
        if (i > 0 && std::abs(step) >= std::abs(last_step)) return w;
        w -= step;
        if (std::abs(step) < kStepTol * (1.0 + std::abs(w))) return w;
        last_step = step;
    }
    throw ConvergenceError("lambert_w: Halley iteration did not converge");
}

double halley_log_form(double target, double w) {
    // Halley on g(w) = w + ln(|w|) - target, the log of w*e^w = x taken so
    // that neither e^w nor x is ever formed. g' = 1 + 1/w vanishes at w = -1;
    // callers restrict to |w| >= 1 with w away from -1.
    double last_step = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kMaxIterations; ++i) {
        const double g = w + std::log(std::abs(w)) - target;
        const double gp = 1.0 + 1.0 / w;
        const double gpp = -1.0 / (w * w);
        const double step = g / (gp - 0.5 * gpp * g / gp);
        if (i > 0 && std::abs(step) >= std::abs(last_step)) return w;
        w -= step;
        if (std::abs(step) < kStepTol * (1.0 + std::abs(w))) return w;
        last_step = step;
    }
    throw ConvergenceError("lambert_w: log-form Halley iteration did not converge");
}

// Series about the branch point x = -1/e where both branches meet at w = -1:
// W = -1 + p - p^2/3 + (11/72) p^3, with p = +s on W0 and p = -s on W-1,
// s = sqrt(2(e*x + 1)).
double branch_point_series(double p) {
    return -1.0 + p * (1.0 - p * (1.0 / 3.0 - p * (11.0 / 72.0)));
}

double branch_point_s(double x) {
    return std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0)));
}

}  // namespace

double lambert_wm1_from_log(double log_neg_x) {
    if (!(log_neg_x <= -1.0))
        throw DomainError("lambert_w: W-1 requires x in [-1/e, 0)");

    // x = -e^L with L in (ln(2e^-2), -1] maps to w in [-2, -1]; x is
    // comfortably representable there, so iterate on the direct equation
    // from the branch-point series.
    constexpr double kLogTwoOverESq = -2.6931471805599453;  // ln(2*e^-2)
    if (log_neg_x > kLogTwoOverESq) {
        const double x = -std::exp(log_neg_x);
        const double s = branch_point_s(x);
        if (s == 0.0) return -1.0;
        return halley_direct(x, branch_point_series(-s));
    }

    // Outer region, w <= -2: asymptotic start w ~ L - ln(-L), refined once,
    // then log-form Halley. Never touches e^w, so L of any magnitude is fine.
    const double l1 = log_neg_x;
    double w = l1 - std::log(-l1);
    w = l1 - std::log(-w);
    return halley_log_form(l1, w);
}

double lambert_w(LambertBranch branch, double x) {
    if (std::isnan(x)) throw DomainError("lambert_w: NaN argument");

    if (branch == LambertBranch::NegativeOne) {
        if (x < -kInvE || x >= 0.0)
            throw DomainError("lambert_w: W-1 requires x in [-1/e, 0)");
        if (x == -kInvE) return -1.0;
        return lambert_wm1_from_log(std::log(-x));
    }

    if (x < -kInvE) throw DomainError("lambert_w: W0 requires x >= -1/e");
    if (x == 0.0) return 0.0;

    if (x < -0.27) {
        const double s = branch_point_s(x);
        if (s == 0.0) return -1.0;
        return halley_direct(x, branch_point_series(s));
    }
    if (x < std::exp(1.0)) {
        // Winitzki's log-series start covers [-0.27, e) in a couple of steps.
        const double l = std::log1p(x);
        return halley_direct(x, l * (1.0 - std::log1p(l) / (2.0 + l)));
    }
    // Large x: solve w + ln(w) = ln(x); immune to e^w overflow.
    const double lx = std::log(x);
    return halley_log_form(lx, lx - std::log(lx));
}

}  // namespace sdsl
