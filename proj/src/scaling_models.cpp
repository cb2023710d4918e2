#include "sdsl/scaling_models.hpp"

#include <cmath>

#include "sdsl/numerics.hpp"

namespace sdsl {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha must lie in (0,1)");
}

// W-1 of -alpha^(M/N-1)/e, computed through ln(-x) = (M/N-1) ln(alpha) - 1 so
// that huge M/N ratios never underflow.
double w_term(const SpecSystem& system, double alpha) {
    const double log_neg_arg =
        (system.target_size / system.draft_size - 1.0) * std::log(alpha) - 1.0;
    return lambert_wm1_from_log(log_neg_arg);
}

}  // namespace

void ChinchillaParams::validate() const {
    if (!(coef_model > 0.0) || !(coef_data > 0.0))
        throw DomainError("chinchilla coefficients must be positive");
    if (!(exp_model > 0.0 && exp_model < 1.0) || !(exp_data > 0.0 && exp_data < 1.0))
        throw DomainError("chinchilla exponents must lie in (0,1)");
}

void SpecSystem::validate() const {
    if (!(draft_size > 0.0) || !(target_size > draft_size))
        throw DomainError("system requires target_size > draft_size > 0");
}

void TrainingBudgets::validate() const {
    if (!(draft_tokens > 0.0) || !(target_tokens > 0.0))
        throw DomainError("training budgets must be positive");
}

double chinchilla_loss(double n, double d, const ChinchillaParams& p) {
    if (!(n > 0.0) || !(d > 0.0))
        throw DomainError("chinchilla_loss requires positive n and d");
    return p.irreducible + p.coef_model * std::pow(n, -p.exp_model) +
           p.coef_data * std::pow(d, -p.exp_data);
}

double perplexity_of(double n, double d, const ChinchillaParams& p) {
    return std::exp(chinchilla_loss(n, d, p));
}

double alpha_plane(double x, double y, const PlaneCoefficients& plane) {
    if (!(x >= 0.0) || !(y >= 0.0))
        throw DomainError("alpha_plane requires non-negative perplexities");
    const double alpha = plane.a * x + plane.b * y + plane.c;
    if (!(alpha > 0.0 && alpha < 1.0))
        throw AlphaOutOfRange(alpha, "affine acceptance rate outside (0,1)");
    return alpha;
}

double improvement_factor(double alpha, double gamma, double cost_ratio) {
    check_alpha(alpha);
    if (gamma < 0.0) throw DomainError("gamma must be non-negative");
    if (cost_ratio < 0.0) throw DomainError("cost ratio must be non-negative");
    return (1.0 - std::pow(alpha, gamma + 1.0)) /
           ((1.0 - alpha) * (gamma * cost_ratio + 1.0));
}

double expected_tar(double alpha, double gamma) {
    if (gamma < 0.0) throw DomainError("gamma must be non-negative");
    if (std::abs(1.0 - alpha) < 1e-12 && alpha > 0.0) return gamma + 1.0;
    check_alpha(alpha);
    return (1.0 - std::pow(alpha, gamma + 1.0)) / (1.0 - alpha);
}

double throughput(const SpecSystem& system, double alpha, double gamma) {
    system.validate();
    check_alpha(alpha);
    if (gamma < 0.0) throw DomainError("gamma must be non-negative");
    return (1.0 - std::pow(alpha, gamma + 1.0)) /
           (2.0 * (system.target_size + gamma * system.draft_size) * (1.0 - alpha));
}

double gamma_opt(const SpecSystem& system, double alpha) {
    system.validate();
    check_alpha(alpha);
    const double log_alpha = std::log(alpha);
    const double w = w_term(system, alpha);
    const double value =
        (-system.target_size * log_alpha + system.draft_size * (w + 1.0)) /
        (system.draft_size * log_alpha);
    return value > 0.0 ? value : 0.0;
}

double throughput_at_opt(const SpecSystem& system, double alpha) {
    const double gamma = gamma_opt(system, alpha);
    if (gamma == 0.0) return 1.0 / (2.0 * system.target_size);
    return -std::log(alpha) /
           (2.0 * system.draft_size * (alpha - 1.0) * w_term(system, alpha));
}

double throughput_from_hparams(double n, const TrainingBudgets& budgets, double m,
                               const PlaneCoefficients& plane,
                               const ChinchillaParams& p_draft,
                               const ChinchillaParams& p_target) {
    budgets.validate();
    const SpecSystem system{m, n};
    system.validate();
    const double x = perplexity_of(n, budgets.draft_tokens, p_draft);
    const double y = perplexity_of(m, budgets.target_tokens, p_target);
    const double alpha = alpha_plane(x, y, plane);
    return throughput_at_opt(system, alpha);
}

}  // namespace sdsl
