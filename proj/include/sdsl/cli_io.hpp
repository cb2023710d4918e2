#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdsl/alpha_fit.hpp"
#include "sdsl/draft_optimizer.hpp"
#include "sdsl/regression.hpp"

namespace sdsl {

struct LatencyRow {
    std::string prompt_id;
    double ttft_seconds;
    double ttot_seconds;
    double tokens_generated;
};

struct LatencyReport {
    std::size_t n_prompts = 0;
    double ttft_mean = 0.0, ttft_moe = 0.0;
    double ttot_mean = 0.0, ttot_moe = 0.0;
    double tpot_mean = 0.0, tpot_moe = 0.0;
    double normalized_distance = 0.0;  // |N - N*| / M
};

enum class ReportKind {
    PlaneFit,
    AlphaEstimate,
    OptimalDraft,
    Sweep,
    AnsatzFit,
    PooledFit,
    CurveFit,
    Simulation,
    Latency,
};

// A structured result document; serializes as {"kind": ..., "payload": ...}.
struct Report {
    ReportKind kind;
    nlohmann::json payload;

    std::string serialize() const;
    static Report parse(const std::string& text);
    bool operator==(const Report& other) const;
};

// --- CSV schemas (headers are exact) -------------------------------------
// alpha table:  draft_id,target_id,draft_ppl,target_ppl,alpha,alpha_ci
// TAR samples:  gamma,tar
// latency log:  prompt_id,ttft_s,ttot_s,tokens
std::vector<AlphaObservation> load_alpha_table(const std::string& path);
std::vector<TarObservation> load_tar_samples(const std::string& path);
std::vector<LatencyRow> load_latency_rows(const std::string& path);

// --- bundled config files -------------------------------------------------
PlaneCoefficients load_plane(const std::string& path);        // JSON {a,b,c}
ChinchillaParams load_chinchilla(const std::string& path);    // JSON constants
GridSpec load_grid(const std::string& path);                  // key = value lines

// Sweep records as CSV (round-trip exact doubles).
std::string records_to_csv(const std::vector<OptimalDraftRecord>& records);
std::vector<OptimalDraftRecord> load_records_csv(const std::string& path);

// Means and 1.96 * sample_std / sqrt(n) margins for TTFT, TTOT and per-row
// TPOT (= ttot/tokens), plus the normalized distance |n - n_star| / m.
LatencyReport latency_report(const std::vector<LatencyRow>& rows, double n, double n_star,
                             double m);

// CSV of (n, alpha, gamma_opt, throughput, feasible) over the grid's N axis.
// Infeasible points keep their row with feasible = 0 and empty value fields.
std::string emit_curve(double m, const TrainingBudgets& budgets, const PlaneCoefficients& plane,
                       const ChinchillaParams& p_draft, const ChinchillaParams& p_target,
                       const GridSpec& grid);

// Whole-file atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// CLI entry point. Exit codes: 0 success, 1 computation error, 2 usage error.
// Reports are printed to `out` as JSON; diagnostics go to `err`.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace sdsl
