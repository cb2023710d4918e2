#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdsl/errors.hpp"
#include "sdsl/scaling_models.hpp"

namespace sdsl {

// Row-major regressor matrix.
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // rows*cols, row-major

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Regression output: per-parameter estimates with normal-approximation
// (z = 1.96) margins, plus fit quality. mse is RSS/n, the convention the
// bundled reference tables use; std errors follow the estimator requested
// (classical or HC3 sandwich).
struct FitResult {
    std::vector<double> estimates;
    std::vector<double> std_errors;
    std::vector<double> margins;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    double mse = 0.0;
    double r_squared = 0.0;
    std::size_t n_obs = 0;
};

// One (draft, target) pairing: measured perplexities and estimated alpha.
struct AlphaObservation {
    std::string draft_id;
    std::string target_id;
    double draft_ppl;          // x
    double target_ppl;         // y
    double alpha;
    double alpha_ci_halfwidth;
};

enum class CurveForm { Linear, Logarithmic, PowerLaw };

// Classical OLS via column-pivoted QR (condition guard 1e12).
FitResult ols(const DesignMatrix& X, const std::vector<double>& y);

// Same point estimates as ols; standard errors from the HC3 sandwich
// (X'X)^-1 X' diag(e_i^2/(1-h_ii)^2) X (X'X)^-1.
FitResult ols_hc3(const DesignMatrix& X, const std::vector<double>& y);

struct PlaneFit {
    PlaneCoefficients plane;
    FitResult diagnostics;
};

// OLS of alpha on (x, y, 1). When weighted, rows are scaled by
// 1/ci_halfwidth (inverse-variance weighting); the reference fit is unweighted.
PlaneFit fit_alpha_plane(const std::vector<AlphaObservation>& obs, bool weighted = false);

// Two-parameter single-regressor laws of alpha against draft perplexity:
//   Linear       alpha = p1*x + p2
//   Logarithmic  alpha = p1*ln(x) + p2
//   PowerLaw     alpha = p1*x^p2   (Gauss-Newton, log-log OLS start)
FitResult fit_draft_curve(CurveForm form, const std::vector<std::pair<double, double>>& points);

}  // namespace sdsl
