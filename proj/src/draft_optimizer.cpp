#include "sdsl/draft_optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

namespace sdsl {

namespace {

void check_range(double low, double high, std::size_t points, const char* axis) {
    if (!(low > 0.0) || !(low <= high))
        throw DomainError(std::string("grid: need 0 < low <= high on axis ") + axis);
    if (points < 1) throw DomainError(std::string("grid: need >= 1 point on axis ") + axis);
    if (points > 1 && !(low < high))
        throw DomainError(std::string("grid: need low < high for a multi-point axis ") + axis);
}

}  // namespace

void GridSpec::validate() const {
    check_range(n_low, n_high, n_points, "N");
    check_range(m_low, m_high, m_points, "M");
    check_range(d_low, d_high, d_points, "D");
    check_range(dprime_low, dprime_high, dprime_points, "D'");
}

std::vector<double> log_spaced(double low, double high, std::size_t points) {
    if (points == 1) return {low};
    std::vector<double> out;
    out.reserve(points);
    const double l0 = std::log10(low);
    const double l1 = std::log10(high);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        out.push_back(std::pow(10.0, l0 + t * (l1 - l0)));
    }
    out.front() = low;
    out.back() = high;
    return out;
}

OptimalDraftRecord optimal_draft_size(double m, const TrainingBudgets& budgets,
                                      const PlaneCoefficients& plane,
                                      const ChinchillaParams& p_draft,
                                      const ChinchillaParams& p_target, const GridSpec& grid) {
    grid.validate();
    budgets.validate();
    if (!(grid.n_low < m))
        throw NoFeasiblePoint("optimal_draft_size: every grid point has N >= M");

    // Same composition as throughput_from_hparams; the target perplexity and
    // the draft data term are invariant over the N loop.
    const double y = perplexity_of(m, budgets.target_tokens, p_target);
    const double draft_data_term =
        p_draft.coef_data * std::pow(budgets.draft_tokens, -p_draft.exp_data);

    const std::vector<double> n_grid = log_spaced(grid.n_low, grid.n_high, grid.n_points);
    OptimalDraftRecord best{m, budgets.draft_tokens, budgets.target_tokens, 0.0, -1.0, 0.0};
    for (const double n : n_grid) {
        if (!(n < m)) break;
        const double x = std::exp(p_draft.irreducible +
                                  p_draft.coef_model * std::pow(n, -p_draft.exp_model) +
                                  draft_data_term);
        const double alpha = plane.a * x + plane.b * y + plane.c;
        if (!(alpha > 0.0 && alpha < 1.0)) continue;
        const double t = throughput_at_opt(SpecSystem{m, n}, alpha);
        if (t > best.best_throughput) {
            best.optimal_draft = n;
            best.best_throughput = t;
            best.alpha_at_opt = alpha;
        }
    }
    if (best.best_throughput <= 0.0)
        throw NoFeasiblePoint("optimal_draft_size: no grid point yields alpha in (0,1)");
    return best;
}

SweepSummary sweep_grid(const GridSpec& grid, const PlaneCoefficients& plane,
                        const ChinchillaParams& p_draft, const ChinchillaParams& p_target,
                        std::size_t threads) {
    grid.validate();
    const auto ms = log_spaced(grid.m_low, grid.m_high, grid.m_points);
    const auto ds = log_spaced(grid.d_low, grid.d_high, grid.d_points);
    const auto dps = log_spaced(grid.dprime_low, grid.dprime_high, grid.dprime_points);

    struct Cell {
        double m, d, dp;
        bool ok = false;
        OptimalDraftRecord rec{};
    };
    std::vector<Cell> cells;
    cells.reserve(ms.size() * ds.size() * dps.size());
    for (const double m : ms)
        for (const double d : ds)
            for (const double dp : dps) cells.push_back(Cell{m, d, dp});

    if (threads == 0) {
        threads = std::thread::hardware_concurrency();
        if (threads == 0) threads = 1;
    }
    threads = std::min<std::size_t>(threads, cells.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            Cell& c = cells[i];
            try {
                c.rec = optimal_draft_size(c.m, TrainingBudgets{c.d, c.dp}, plane, p_draft,
                                           p_target, grid);
                c.ok = true;
            } catch (const NoFeasiblePoint&) {
                c.ok = false;
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    SweepSummary out;
    out.cells_total = cells.size();
    for (const Cell& c : cells) {
        if (c.ok)
            out.records.push_back(c.rec);
        else
            ++out.cells_skipped;
    }
    return out;
}

AnsatzFit fit_ansatz(const std::vector<OptimalDraftRecord>& records) {
    if (records.size() < 5) throw InsufficientData("fit_ansatz: need at least 5 records");
    std::set<double> ms, dsv, dpsv;
    for (const auto& r : records) {
        ms.insert(r.target_size);
        dsv.insert(r.draft_tokens);
        dpsv.insert(r.target_tokens);
    }
    if (ms.size() < 2 || dsv.size() < 2 || dpsv.size() < 2)
        throw RankDeficient("fit_ansatz: no variation in M, D or D'");

    const std::size_t n = records.size();
    DesignMatrix X{n, 4, std::vector<double>(n * 4)};
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        X.values[i * 4 + 0] = 1.0;
        X.values[i * 4 + 1] = 1.0 / r.target_size;
        X.values[i * 4 + 2] = std::log(r.draft_tokens);
        X.values[i * 4 + 3] = std::log(r.target_tokens);
        y[i] = r.optimal_draft / r.target_size;
    }
    FitResult fit = ols_hc3(X, y);
    AnsatzFit out;
    out.mu = fit.estimates[0];
    out.m0 = fit.estimates[1];
    out.log_draft_data_coef = fit.estimates[2];
    out.log_target_data_coef = fit.estimates[3];
    out.diagnostics = std::move(fit);
    return out;
}

PooledFit fit_pooled(const std::vector<OptimalDraftRecord>& records) {
    std::set<double> ms;
    for (const auto& r : records) ms.insert(r.target_size);
    if (ms.size() < 2) throw RankDeficient("fit_pooled: need at least 2 distinct target sizes");

    const std::size_t n = records.size();
    DesignMatrix X{n, 2, std::vector<double>(n * 2)};
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X.values[i * 2 + 0] = records[i].target_size;
        X.values[i * 2 + 1] = 1.0;
        y[i] = records[i].optimal_draft;
    }
    FitResult fit = ols_hc3(X, y);
    PooledFit out;
    out.mu = fit.estimates[0];
    out.m0 = fit.estimates[1];
    out.diagnostics = std::move(fit);
    return out;
}

}  // namespace sdsl
