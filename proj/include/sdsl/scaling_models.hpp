#pragma once

#include "sdsl/errors.hpp"

namespace sdsl {

// Constants of the pre-training loss law L(N,D) = E + A/N^nu + B/D^delta
// (nats). The replication constants used throughout the bundled configs are
// E=1.8172, A=482.01, nu=0.3478, B=2085.43, delta=0.3658.
struct ChinchillaParams {
    double irreducible;  // E
    double coef_model;   // A
    double coef_data;    // B
    double exp_model;    // nu
    double exp_data;     // delta

    void validate() const;
};

// Affine acceptance law alpha = a*x + b*y + c over draft perplexity x and
// target perplexity y. In the fitted regime a < 0 and b > 0; violations are a
// data-quality signal, not an error.
struct PlaneCoefficients {
    double a;
    double b;
    double c;

    bool expected_signs() const { return a < 0.0 && b > 0.0; }
};

// A draft/target pairing by parameter count. Sizes are real-valued: optimal
// sizes coming off a log grid are fractional.
struct SpecSystem {
    double target_size;  // M
    double draft_size;   // N

    void validate() const;
};

struct TrainingBudgets {
    double draft_tokens;   // D
    double target_tokens;  // D'

    void validate() const;
};

// L(n,d) in nats; strictly decreasing in both arguments, bounded below by E.
double chinchilla_loss(double n, double d, const ChinchillaParams& p);

// exp(L(n,d)).
double perplexity_of(double n, double d, const ChinchillaParams& p);

// a*x + b*y + c, required to land in (0,1); otherwise AlphaOutOfRange.
double alpha_plane(double x, double y, const PlaneCoefficients& plane);

// Expected wall-clock improvement factor (1 - a^(g+1)) / ((1-a)(g*c + 1)).
double improvement_factor(double alpha, double gamma, double cost_ratio);

// Expected tokens per decoding iteration (1 - a^(g+1)) / (1 - a), the
// geometric sum 1 + a + ... + a^g; in [1, gamma+1].
double expected_tar(double alpha, double gamma);

// Tokens per FLOP up to the architecture constant:
// (1 - a^(g+1)) / (2(M + g*N)(1 - a)). gamma may be fractional.
double throughput(const SpecSystem& system, double alpha, double gamma);

// Lookahead maximizing throughput:
// (-M ln a + N W-1(-a^(M/N-1)/e) + N) / (N ln a), clamped at 0 when the
// interior optimum does not exist.
double gamma_opt(const SpecSystem& system, double alpha);

// Throughput at the optimal lookahead, -ln(a) / (2N(a-1) W-1(...)); falls
// back to the gamma=0 value 1/(2M) when gamma_opt clamps.
double throughput_at_opt(const SpecSystem& system, double alpha);

// Full composition: perplexities from the loss law for both models, alpha
// from the plane, then throughput at optimal lookahead. Propagates
// AlphaOutOfRange for infeasible configurations.
double throughput_from_hparams(double n, const TrainingBudgets& budgets, double m,
                               const PlaneCoefficients& plane,
                               const ChinchillaParams& p_draft,
                               const ChinchillaParams& p_target);

}  // namespace sdsl
