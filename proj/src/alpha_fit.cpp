#include "sdsl/alpha_fit.hpp"

#include <algorithm>
#include <cmath>

#include "sdsl/scaling_models.hpp"

namespace sdsl {

namespace {

constexpr double kAlphaLo = 1e-6;
constexpr double kAlphaHi = 1.0 - 1e-6;

double rss_at(double alpha, const std::vector<TarObservation>& obs) {
    double rss = 0.0;
    for (const auto& o : obs) {
        const double r = expected_tar(alpha, o.lookahead) - o.measured_tar;
        rss += r * r;
    }
    return rss;
}

}  // namespace

std::vector<double> tar_residuals(double alpha, const std::vector<TarObservation>& obs) {
    if (obs.empty()) throw EmptyInput("tar_residuals: no observations");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    std::vector<double> r;
    r.reserve(obs.size());
    for (const auto& o : obs) r.push_back(expected_tar(alpha, o.lookahead) - o.measured_tar);
    return r;
}

std::vector<double> tar_jacobian(double alpha, const std::vector<TarObservation>& obs) {
    if (obs.empty()) throw EmptyInput("tar_jacobian: no observations");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    std::vector<double> j;
    j.reserve(obs.size());
    const double one_m = 1.0 - alpha;
    for (const auto& o : obs) {
        const double g = o.lookahead;
        const double ag = std::pow(alpha, g);
        j.push_back((-(g + 1.0) * ag * one_m + (1.0 - ag * alpha)) / (one_m * one_m));
    }
    return j;
}

AlphaEstimate estimate_alpha(const std::vector<TarObservation>& obs) {
    if (obs.size() < 2) throw EmptyInput("estimate_alpha: need at least 2 observations");
    const bool informative = std::any_of(obs.begin(), obs.end(),
                                         [](const TarObservation& o) { return o.lookahead >= 1.0; });
    if (!informative)
        throw DegenerateFit("estimate_alpha: all lookaheads are 0, residuals carry no alpha signal");

    // Golden-section minimization of RSS.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = kAlphaLo, hi = kAlphaHi;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = rss_at(c, obs);
    double fd = rss_at(d, obs);
    int iter = 0;
    while (hi - lo > 1e-12) {
        if (++iter > 200) throw ConvergenceError("estimate_alpha: golden section stalled");
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = rss_at(c, obs);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = rss_at(d, obs);
        }
    }
    double alpha = 0.5 * (lo + hi);

    // Gauss-Newton polish with the analytic Jacobian.
    for (int i = 0; i < 12; ++i) {
        const auto r = tar_residuals(alpha, obs);
        const auto j = tar_jacobian(alpha, obs);
        double jr = 0.0, jj = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            jr += j[k] * r[k];
            jj += j[k] * j[k];
        }
        if (jj == 0.0) break;
        const double step = jr / jj;
        const double next = std::clamp(alpha - step, kAlphaLo, kAlphaHi);
        // The polish refines a bracketed minimum; reject steps that escape it.
        if (rss_at(next, obs) > rss_at(alpha, obs) + 1e-30) break;
        alpha = next;
        if (std::abs(step) < 1e-15) break;
    }

    const auto r = tar_residuals(alpha, obs);
    const auto j = tar_jacobian(alpha, obs);
    double rss = 0.0, jj = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        rss += r[k] * r[k];
        jj += j[k] * j[k];
    }
    const std::size_t dof = obs.size() - 1;
    const double sigma2 = rss / static_cast<double>(dof);
    const double se = std::sqrt(sigma2 / jj);

    AlphaEstimate est;
    est.alpha = alpha;
    est.std_error = se;
    est.ci_low = std::max(0.0, alpha - 1.96 * se);
    est.ci_high = std::min(1.0, alpha + 1.96 * se);
    est.residual_variance = sigma2;
    est.dof = dof;
    return est;
}

}  // namespace sdsl
