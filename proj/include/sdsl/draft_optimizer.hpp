#pragma once

#include <vector>

#include "sdsl/regression.hpp"
#include "sdsl/scaling_models.hpp"

namespace sdsl {

// Log-spaced search mesh. Endpoints are included on every axis. The draft
// axis is additionally clipped to N < M when a cell is evaluated.
struct GridSpec {
    double n_low, n_high;
    std::size_t n_points;
    double m_low, m_high;
    std::size_t m_points;
    double d_low, d_high;
    std::size_t d_points;
    double dprime_low, dprime_high;
    std::size_t dprime_points;

    void validate() const;
};

// log-spaced points over [low, high], endpoints included.
std::vector<double> log_spaced(double low, double high, std::size_t points);

struct OptimalDraftRecord {
    double target_size;      // M
    double draft_tokens;     // D
    double target_tokens;    // D'
    double optimal_draft;    // N*
    double best_throughput;
    double alpha_at_opt;
};

struct SweepSummary {
    std::vector<OptimalDraftRecord> records;
    std::size_t cells_total = 0;
    std::size_t cells_skipped = 0;  // every grid point infeasible
};

// N*/M = mu + M0/M + g*ln(D) + g'*ln(D'), fit with HC3 errors.
struct AnsatzFit {
    double mu;
    double m0;
    double log_draft_data_coef;   // g
    double log_target_data_coef;  // g'
    FitResult diagnostics;
};

// N* = mu*M + M0, pooled over all (D, D').
struct PooledFit {
    double mu;
    double m0;
    FitResult diagnostics;
};

// Argmax of the hyperparameter throughput over the log-spaced N grid,
// skipping infeasible points (alpha outside (0,1), or N >= M).
OptimalDraftRecord optimal_draft_size(double m, const TrainingBudgets& budgets,
                                      const PlaneCoefficients& plane,
                                      const ChinchillaParams& p_draft,
                                      const ChinchillaParams& p_target, const GridSpec& grid);

// One record per (M, D, D') mesh cell, in lexicographic (M, D, D') order.
// Cells with no feasible point are dropped and counted in the summary.
// threads = 0 picks the hardware concurrency.
SweepSummary sweep_grid(const GridSpec& grid, const PlaneCoefficients& plane,
                        const ChinchillaParams& p_draft, const ChinchillaParams& p_target,
                        std::size_t threads = 0);

AnsatzFit fit_ansatz(const std::vector<OptimalDraftRecord>& records);

PooledFit fit_pooled(const std::vector<OptimalDraftRecord>& records);

}  // namespace sdsl
