#include "sdsl/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sdsl/numerics.hpp"
#include "sdsl/specdec_sim.hpp"

namespace sdsl {

using nlohmann::json;

namespace {

// Round-trip exact decimal form for doubles (17 significant digits).
std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& token, std::size_t row, const std::string& column) {
    std::string t = token;
    // from_chars rejects leading spaces and a leading '+'
    t.erase(0, t.find_first_not_of(" \t"));
    const auto tail = t.find_last_not_of(" \t");
    if (tail != std::string::npos) t.erase(tail + 1);
    if (!t.empty() && t.front() == '+') t.erase(0, 1);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError(row, column, "cannot parse number from '" + token + "'");
    return v;
}

struct CsvReader {
    std::vector<std::string> lines;  // data lines, file line = index + 2
    std::vector<std::string> header;

    CsvReader(const std::string& path, const std::string& expected_header) {
        std::ifstream in(path);
        if (!in) throw SchemaError("cannot open '" + path + "'");
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (first) {
                if (line != expected_header)
                    throw SchemaError("'" + path + "': expected header '" + expected_header +
                                      "', found '" + line + "'");
                header = split_fields(line);
                first = false;
                continue;
            }
            if (line.empty()) continue;
            lines.push_back(line);
        }
        if (first) throw SchemaError("'" + path + "': missing header line");
    }
};

std::string kind_name(ReportKind k) {
    switch (k) {
        case ReportKind::PlaneFit: return "plane_fit";
        case ReportKind::AlphaEstimate: return "alpha_estimate";
        case ReportKind::OptimalDraft: return "optimal_draft";
        case ReportKind::Sweep: return "sweep";
        case ReportKind::AnsatzFit: return "ansatz_fit";
        case ReportKind::PooledFit: return "pooled_fit";
        case ReportKind::CurveFit: return "curve_fit";
        case ReportKind::Simulation: return "simulation";
        case ReportKind::Latency: return "latency";
    }
    throw DomainError("unknown report kind");
}

ReportKind kind_from_name(const std::string& name) {
    for (const auto k :
         {ReportKind::PlaneFit, ReportKind::AlphaEstimate, ReportKind::OptimalDraft,
          ReportKind::Sweep, ReportKind::AnsatzFit, ReportKind::PooledFit, ReportKind::CurveFit,
          ReportKind::Simulation, ReportKind::Latency}) {
        if (kind_name(k) == name) return k;
    }
    throw SchemaError("unknown report kind '" + name + "'");
}

json fit_to_json(const FitResult& fit) {
    return json{{"estimates", fit.estimates}, {"std_errors", fit.std_errors},
                {"margins", fit.margins},     {"ci_low", fit.ci_low},
                {"ci_high", fit.ci_high},     {"mse", fit.mse},
                {"r_squared", fit.r_squared}, {"n_obs", fit.n_obs}};
}

json config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("'" + path + "': " + e.what());
    }
    return j;
}

double config_field(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw SchemaError("'" + path + "': missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

}  // namespace

std::string Report::serialize() const {
    const json j{{"kind", kind_name(kind)}, {"payload", payload}};
    return j.dump(2);
}

Report Report::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("report parse: ") + e.what());
    }
    if (!j.contains("kind") || !j.contains("payload"))
        throw SchemaError("report parse: missing 'kind' or 'payload'");
    Report r;
    r.kind = kind_from_name(j.at("kind").get<std::string>());
    r.payload = j.at("payload");
    return r;
}

bool Report::operator==(const Report& other) const {
    return kind == other.kind && payload == other.payload;
}

std::vector<AlphaObservation> load_alpha_table(const std::string& path) {
    const CsvReader csv(path, "draft_id,target_id,draft_ppl,target_ppl,alpha,alpha_ci");
    std::vector<AlphaObservation> out;
    out.reserve(csv.lines.size());
    for (std::size_t i = 0; i < csv.lines.size(); ++i) {
        const std::size_t row = i + 2;  // file line number
        const auto f = split_fields(csv.lines[i]);
        if (f.size() != 6) throw ParseError(row, "", "expected 6 fields");
        AlphaObservation o;
        o.draft_id = f[0];
        o.target_id = f[1];
        o.draft_ppl = parse_number(f[2], row, "draft_ppl");
        o.target_ppl = parse_number(f[3], row, "target_ppl");
        o.alpha = parse_number(f[4], row, "alpha");
        o.alpha_ci_halfwidth = parse_number(f[5], row, "alpha_ci");
        if (!(o.draft_ppl > 1.0)) throw ParseError(row, "draft_ppl", "perplexity must exceed 1");
        if (!(o.target_ppl > 1.0)) throw ParseError(row, "target_ppl", "perplexity must exceed 1");
        if (!(o.alpha > 0.0 && o.alpha < 1.0))
            throw ParseError(row, "alpha", "alpha must lie in (0,1)");
        if (!(o.alpha_ci_halfwidth >= 0.0))
            throw ParseError(row, "alpha_ci", "CI half-width must be non-negative");
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<TarObservation> load_tar_samples(const std::string& path) {
    const CsvReader csv(path, "gamma,tar");
    std::vector<TarObservation> out;
    out.reserve(csv.lines.size());
    for (std::size_t i = 0; i < csv.lines.size(); ++i) {
        const std::size_t row = i + 2;
        const auto f = split_fields(csv.lines[i]);
        if (f.size() != 2) throw ParseError(row, "", "expected 2 fields");
        TarObservation o;
        o.lookahead = parse_number(f[0], row, "gamma");
        o.measured_tar = parse_number(f[1], row, "tar");
        if (!(o.lookahead >= 0.0) || o.lookahead != std::floor(o.lookahead))
            throw ParseError(row, "gamma", "lookahead must be a non-negative integer");
        if (!(o.measured_tar >= 1.0 && o.measured_tar <= o.lookahead + 1.0))
            throw ParseError(row, "tar", "TAR must lie in [1, gamma+1]");
        out.push_back(o);
    }
    return out;
}

std::vector<LatencyRow> load_latency_rows(const std::string& path) {
    const CsvReader csv(path, "prompt_id,ttft_s,ttot_s,tokens");
    std::vector<LatencyRow> out;
    out.reserve(csv.lines.size());
    for (std::size_t i = 0; i < csv.lines.size(); ++i) {
        const std::size_t row = i + 2;
        const auto f = split_fields(csv.lines[i]);
        if (f.size() != 4) throw ParseError(row, "", "expected 4 fields");
        LatencyRow o;
        o.prompt_id = f[0];
        o.ttft_seconds = parse_number(f[1], row, "ttft_s");
        o.ttot_seconds = parse_number(f[2], row, "ttot_s");
        o.tokens_generated = parse_number(f[3], row, "tokens");
        if (!(o.ttft_seconds > 0.0)) throw ParseError(row, "ttft_s", "time must be positive");
        if (!(o.ttot_seconds > 0.0)) throw ParseError(row, "ttot_s", "time must be positive");
        if (!(o.tokens_generated > 0.0)) throw ParseError(row, "tokens", "tokens must be positive");
        out.push_back(std::move(o));
    }
    return out;
}

PlaneCoefficients load_plane(const std::string& path) {
    const json j = config_json(path);
    return PlaneCoefficients{config_field(j, path, "a"), config_field(j, path, "b"),
                             config_field(j, path, "c")};
}

ChinchillaParams load_chinchilla(const std::string& path) {
    const json j = config_json(path);
    ChinchillaParams p{config_field(j, path, "irreducible"), config_field(j, path, "coef_model"),
                       config_field(j, path, "coef_data"), config_field(j, path, "exp_model"),
                       config_field(j, path, "exp_data")};
    p.validate();
    return p;
}

GridSpec load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::map<std::string, double> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "", "expected 'key = value'");
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        kv[key] = parse_number(line.substr(eq + 1), lineno, key);
    }
    auto get = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw SchemaError("'" + path + "': missing grid key '" + std::string(key) + "'");
        return it->second;
    };
    auto get_count = [&](const char* key) {
        const double v = get(key);
        if (!(v >= 1.0) || v != std::floor(v))
            throw SchemaError("'" + path + "': '" + key + "' must be a positive integer");
        return static_cast<std::size_t>(v);
    };
    GridSpec g{get("n_low"),      get("n_high"),      get_count("n_points"),
               get("m_low"),      get("m_high"),      get_count("m_points"),
               get("d_low"),      get("d_high"),      get_count("d_points"),
               get("dprime_low"), get("dprime_high"), get_count("dprime_points")};
    g.validate();
    return g;
}

std::string records_to_csv(const std::vector<OptimalDraftRecord>& records) {
    std::string out =
        "target_size,draft_tokens,target_tokens,optimal_draft,best_throughput,alpha_at_opt\n";
    for (const auto& r : records) {
        out += num17(r.target_size) + ',' + num17(r.draft_tokens) + ',' +
               num17(r.target_tokens) + ',' + num17(r.optimal_draft) + ',' +
               num17(r.best_throughput) + ',' + num17(r.alpha_at_opt) + '\n';
    }
    return out;
}

std::vector<OptimalDraftRecord> load_records_csv(const std::string& path) {
    const CsvReader csv(
        path, "target_size,draft_tokens,target_tokens,optimal_draft,best_throughput,alpha_at_opt");
    std::vector<OptimalDraftRecord> out;
    out.reserve(csv.lines.size());
    for (std::size_t i = 0; i < csv.lines.size(); ++i) {
        const std::size_t row = i + 2;
        const auto f = split_fields(csv.lines[i]);
        if (f.size() != 6) throw ParseError(row, "", "expected 6 fields");
        OptimalDraftRecord r;
        r.target_size = parse_number(f[0], row, "target_size");
        r.draft_tokens = parse_number(f[1], row, "draft_tokens");
        r.target_tokens = parse_number(f[2], row, "target_tokens");
        r.optimal_draft = parse_number(f[3], row, "optimal_draft");
        r.best_throughput = parse_number(f[4], row, "best_throughput");
        r.alpha_at_opt = parse_number(f[5], row, "alpha_at_opt");
        if (!(r.optimal_draft > 0.0 && r.optimal_draft < r.target_size))
            throw ParseError(row, "optimal_draft", "needs 0 < N* < M");
        out.push_back(r);
    }
    return out;
}

LatencyReport latency_report(const std::vector<LatencyRow>& rows, double n, double n_star,
                             double m) {
    if (rows.size() < 2)
        throw InsufficientData("latency_report: need >= 2 rows for a sample std");
    if (!(m > 0.0)) throw DomainError("latency_report: target size must be positive");

    const auto count = static_cast<double>(rows.size());
    auto aggregate = [&](auto&& metric, double& mean, double& moe) {
        double sum = 0.0;
        for (const auto& r : rows) sum += metric(r);
        mean = sum / count;
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = metric(r) - mean;
            ss += d * d;
        }
        const double sample_std = std::sqrt(ss / (count - 1.0));
        moe = 1.96 * sample_std / std::sqrt(count);
    };

    LatencyReport rep;
    rep.n_prompts = rows.size();
    aggregate([](const LatencyRow& r) { return r.ttft_seconds; }, rep.ttft_mean, rep.ttft_moe);
    aggregate([](const LatencyRow& r) { return r.ttot_seconds; }, rep.ttot_mean, rep.ttot_moe);
    aggregate([](const LatencyRow& r) { return r.ttot_seconds / r.tokens_generated; },
              rep.tpot_mean, rep.tpot_moe);
    rep.normalized_distance = std::abs(n - n_star) / m;
    return rep;
}

std::string emit_curve(double m, const TrainingBudgets& budgets, const PlaneCoefficients& plane,
                       const ChinchillaParams& p_draft, const ChinchillaParams& p_target,
                       const GridSpec& grid) {
    grid.validate();
    budgets.validate();
    const double y = perplexity_of(m, budgets.target_tokens, p_target);

    std::string out = "n,alpha,gamma_opt,throughput,feasible\n";
    bool any_feasible = false;
    for (const double n : log_spaced(grid.n_low, grid.n_high, grid.n_points)) {
        if (!(n < m)) {
            out += num17(n) + ",,,,0\n";
            continue;
        }
        const double x = perplexity_of(n, budgets.draft_tokens, p_draft);
        const double alpha = plane.a * x + plane.b * y + plane.c;
        if (!(alpha > 0.0 && alpha < 1.0)) {
            out += num17(n) + ",,,,0\n";
            continue;
        }
        const SpecSystem sys{m, n};
        out += num17(n) + ',' + num17(alpha) + ',' + num17(gamma_opt(sys, alpha)) + ',' +
               num17(throughput_at_opt(sys, alpha)) + ",1\n";
        any_feasible = true;
    }
    if (!any_feasible) throw NoFeasiblePoint("emit_curve: every grid point is infeasible");
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SchemaError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw SchemaError("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

struct CommonModelArgs {
    std::string plane_path;
    std::string chinchilla_path;
    std::string chinchilla_target_path;  // defaults to the draft constants

    void add_to(CLI::App* cmd) {
        cmd->add_option("--plane", plane_path, "plane coefficients JSON")->required();
        cmd->add_option("--chinchilla", chinchilla_path, "loss-law constants JSON")->required();
        cmd->add_option("--chinchilla-target", chinchilla_target_path,
                        "separate loss-law constants for the target (defaults to --chinchilla)");
    }

    PlaneCoefficients plane() const { return load_plane(plane_path); }
    ChinchillaParams draft_params() const { return load_chinchilla(chinchilla_path); }
    ChinchillaParams target_params() const {
        return load_chinchilla(chinchilla_target_path.empty() ? chinchilla_path
                                                              : chinchilla_target_path);
    }
};

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"speculative-decoding scaling laws toolkit"};
    app.require_subcommand(1);

    auto emit = [&out](const Report& r) { out << r.serialize() << "\n"; };

    // fit-plane
    auto* fit_plane_cmd = app.add_subcommand("fit-plane", "fit alpha = A x + B y + C");
    std::string fp_table;
    bool fp_weighted = false;
    std::string fp_out;
    fit_plane_cmd->add_option("--table", fp_table, "alpha table CSV")->required();
    fit_plane_cmd->add_flag("--weighted", fp_weighted, "weight rows by 1/alpha_ci");
    fit_plane_cmd->add_option("--out", fp_out, "write the plane JSON here");
    fit_plane_cmd->callback([&] {
        const auto obs = load_alpha_table(fp_table);
        const PlaneFit fit = fit_alpha_plane(obs, fp_weighted);
        if (!fit.plane.expected_signs())
            err << "warning: fitted plane signs differ from the expected a < 0, b > 0\n";
        Report r{ReportKind::PlaneFit,
                 json{{"a", fit.plane.a},
                      {"b", fit.plane.b},
                      {"c", fit.plane.c},
                      {"weighted", fp_weighted},
                      {"diagnostics", fit_to_json(fit.diagnostics)}}};
        if (!fp_out.empty()) {
            const json plane_json{{"a", fit.plane.a}, {"b", fit.plane.b}, {"c", fit.plane.c}};
            write_file_atomic(fp_out, plane_json.dump(2) + "\n");
        }
        emit(r);
    });

    // alpha-estimate
    auto* alpha_cmd = app.add_subcommand("alpha-estimate", "estimate alpha from TAR samples");
    std::string ae_tar;
    alpha_cmd->add_option("--tar", ae_tar, "TAR samples CSV")->required();
    alpha_cmd->callback([&] {
        const auto obs = load_tar_samples(ae_tar);
        const AlphaEstimate est = estimate_alpha(obs);
        emit(Report{ReportKind::AlphaEstimate,
                    json{{"alpha", est.alpha},
                         {"std_error", est.std_error},
                         {"ci_low", est.ci_low},
                         {"ci_high", est.ci_high},
                         {"residual_variance", est.residual_variance},
                         {"dof", est.dof},
                         {"n_obs", obs.size()}}});
    });

    // throughput / gamma-opt (scalar queries on one system)
    double q_m = 0.0, q_n = 0.0, q_alpha = 0.0, q_gamma = -1.0;
    auto add_system_options = [&](CLI::App* cmd) {
        cmd->add_option("--target-size", q_m, "target size M")->required();
        cmd->add_option("--draft-size", q_n, "draft size N")->required();
        cmd->add_option("--alpha", q_alpha, "acceptance rate")->required();
    };
    auto* tp_cmd = app.add_subcommand("throughput", "tokens/FLOP for a system");
    add_system_options(tp_cmd);
    tp_cmd->add_option("--gamma", q_gamma, "lookahead (omit for the optimal one)")
        ->check(CLI::NonNegativeNumber);
    tp_cmd->callback([&] {
        const SpecSystem sys{q_m, q_n};
        json payload{{"target_size", q_m}, {"draft_size", q_n}, {"alpha", q_alpha}};
        if (q_gamma >= 0.0) {
            payload["gamma"] = q_gamma;
            payload["throughput"] = throughput(sys, q_alpha, q_gamma);
        } else {
            const double g = gamma_opt(sys, q_alpha);
            payload["gamma"] = g;
            payload["throughput"] = throughput_at_opt(sys, q_alpha);
            payload["at_optimal_gamma"] = true;
        }
        emit(Report{ReportKind::OptimalDraft, payload});
    });

    auto* go_cmd = app.add_subcommand("gamma-opt", "throughput-optimal lookahead");
    add_system_options(go_cmd);
    go_cmd->callback([&] {
        const SpecSystem sys{q_m, q_n};
        const double g = gamma_opt(sys, q_alpha);
        emit(Report{ReportKind::OptimalDraft,
                    json{{"target_size", q_m},
                         {"draft_size", q_n},
                         {"alpha", q_alpha},
                         {"gamma_opt", g},
                         {"throughput_at_opt", throughput_at_opt(sys, q_alpha)}}});
    });

    // optimal-draft
    auto* od_cmd = app.add_subcommand("optimal-draft", "grid-search the optimal draft size");
    CommonModelArgs od_model;
    od_model.add_to(od_cmd);
    double od_m = 0.0, od_d = 0.0, od_dp = 0.0;
    std::string od_grid;
    od_cmd->add_option("--target-size", od_m, "target size M")->required();
    od_cmd->add_option("--draft-tokens", od_d, "draft training tokens D")->required();
    od_cmd->add_option("--target-tokens", od_dp, "target training tokens D'")->required();
    od_cmd->add_option("--grid", od_grid, "grid spec file")->required();
    od_cmd->callback([&] {
        const OptimalDraftRecord rec =
            optimal_draft_size(od_m, TrainingBudgets{od_d, od_dp}, od_model.plane(),
                               od_model.draft_params(), od_model.target_params(),
                               load_grid(od_grid));
        emit(Report{ReportKind::OptimalDraft,
                    json{{"target_size", rec.target_size},
                         {"draft_tokens", rec.draft_tokens},
                         {"target_tokens", rec.target_tokens},
                         {"optimal_draft", rec.optimal_draft},
                         {"best_throughput", rec.best_throughput},
                         {"alpha_at_opt", rec.alpha_at_opt}}});
    });

    // sweep
    auto* sw_cmd = app.add_subcommand("sweep", "optimal draft over the (M, D, D') mesh");
    CommonModelArgs sw_model;
    sw_model.add_to(sw_cmd);
    std::string sw_grid, sw_records_out;
    std::size_t sw_threads = 0;
    sw_cmd->add_option("--grid", sw_grid, "grid spec file")->required();
    sw_cmd->add_option("--records-out", sw_records_out, "write records CSV here")->required();
    sw_cmd->add_option("--threads", sw_threads, "worker threads (0 = hardware)");
    sw_cmd->callback([&] {
        const SweepSummary sum = sweep_grid(load_grid(sw_grid), sw_model.plane(),
                                            sw_model.draft_params(), sw_model.target_params(),
                                            sw_threads);
        if (sum.cells_skipped > 0)
            err << "warning: " << sum.cells_skipped << " of " << sum.cells_total
                << " cells had no feasible point and were skipped\n";
        write_file_atomic(sw_records_out, records_to_csv(sum.records));
        emit(Report{ReportKind::Sweep,
                    json{{"cells_total", sum.cells_total},
                         {"cells_skipped", sum.cells_skipped},
                         {"n_records", sum.records.size()},
                         {"records_path", sw_records_out}}});
    });

    // ansatz-fit / pooled-fit
    std::string rf_records;
    auto* af_cmd = app.add_subcommand("ansatz-fit", "fit N*/M = mu + M0/M + g lnD + g' lnD'");
    af_cmd->add_option("--records", rf_records, "sweep records CSV")->required();
    af_cmd->callback([&] {
        const AnsatzFit fit = fit_ansatz(load_records_csv(rf_records));
        emit(Report{ReportKind::AnsatzFit,
                    json{{"mu", fit.mu},
                         {"m0", fit.m0},
                         {"log_draft_data_coef", fit.log_draft_data_coef},
                         {"log_target_data_coef", fit.log_target_data_coef},
                         {"diagnostics", fit_to_json(fit.diagnostics)}}});
    });
    auto* pf_cmd = app.add_subcommand("pooled-fit", "fit N* = mu M + M0");
    pf_cmd->add_option("--records", rf_records, "sweep records CSV")->required();
    pf_cmd->callback([&] {
        const PooledFit fit = fit_pooled(load_records_csv(rf_records));
        emit(Report{ReportKind::PooledFit,
                    json{{"mu", fit.mu},
                         {"m0", fit.m0},
                         {"diagnostics", fit_to_json(fit.diagnostics)}}});
    });

    // curve-fit
    auto* cf_cmd = app.add_subcommand("curve-fit", "alpha vs draft perplexity for one target");
    std::string cf_table, cf_target, cf_form;
    cf_cmd->add_option("--table", cf_table, "alpha table CSV")->required();
    cf_cmd->add_option("--target", cf_target, "target model id")->required();
    cf_cmd->add_option("--form", cf_form, "linear | logarithmic | power")
        ->required()
        ->check(CLI::IsMember({"linear", "logarithmic", "power"}));
    cf_cmd->callback([&] {
        const auto obs = load_alpha_table(cf_table);
        std::vector<std::pair<double, double>> points;
        for (const auto& o : obs)
            if (o.target_id == cf_target) points.emplace_back(o.draft_ppl, o.alpha);
        if (points.empty())
            throw EmptyInput("curve-fit: no rows for target '" + cf_target + "'");
        const CurveForm form = cf_form == "linear"        ? CurveForm::Linear
                               : cf_form == "logarithmic" ? CurveForm::Logarithmic
                                                          : CurveForm::PowerLaw;
        const FitResult fit = fit_draft_curve(form, points);
        emit(Report{ReportKind::CurveFit,
                    json{{"target", cf_target},
                         {"form", cf_form},
                         {"p1", fit.estimates[0]},
                         {"p2", fit.estimates[1]},
                         {"diagnostics", fit_to_json(fit)}}});
    });

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo speculative acceptance");
    std::size_t sim_vocab = 1000, sim_gamma = 4, sim_iters = 100000;
    std::uint64_t sim_seed = 1;
    double sim_knob = 0.5;
    std::string sim_tar_out;
    std::size_t sim_gamma_max = 9;
    sim_cmd->add_option("--vocab", sim_vocab, "vocabulary size");
    sim_cmd->add_option("--knob", sim_knob, "divergence knob in [0,1]");
    sim_cmd->add_option("--gamma", sim_gamma, "lookahead");
    sim_cmd->add_option("--iterations", sim_iters, "iterations");
    sim_cmd->add_option("--seed", sim_seed, "PRNG seed");
    sim_cmd->add_option("--tar-out", sim_tar_out,
                        "also write a TAR CSV over gamma = 1..gamma-max");
    sim_cmd->add_option("--gamma-max", sim_gamma_max, "largest gamma for --tar-out");
    sim_cmd->callback([&] {
        const CategoricalPair pair = synth_pair(sim_vocab, sim_knob, sim_seed);
        const SimResult res = simulate_tar(pair, sim_gamma, sim_iters, sim_seed);
        if (!sim_tar_out.empty()) {
            std::string csv = "gamma,tar\n";
            for (std::size_t g = 1; g <= sim_gamma_max; ++g) {
                const SimResult r = simulate_tar(pair, g, sim_iters, sim_seed + g);
                csv += std::to_string(g) + ',' + num17(r.mean_accepted + 1.0) + '\n';
            }
            write_file_atomic(sim_tar_out, csv);
        }
        emit(Report{ReportKind::Simulation,
                    json{{"vocab", sim_vocab},
                         {"knob", sim_knob},
                         {"seed", sim_seed},
                         {"exact_alpha", exact_alpha(pair)},
                         {"lookahead", res.lookahead},
                         {"iterations", res.iterations},
                         {"mean_accepted", res.mean_accepted},
                         {"accept_histogram", res.accept_histogram}}});
    });

    // emit-curve
    auto* ec_cmd = app.add_subcommand("emit-curve", "throughput vs draft size CSV");
    CommonModelArgs ec_model;
    ec_model.add_to(ec_cmd);
    double ec_m = 0.0, ec_d = 0.0, ec_dp = 0.0;
    std::string ec_grid, ec_out;
    ec_cmd->add_option("--target-size", ec_m, "target size M")->required();
    ec_cmd->add_option("--draft-tokens", ec_d, "draft training tokens D")->required();
    ec_cmd->add_option("--target-tokens", ec_dp, "target training tokens D'")->required();
    ec_cmd->add_option("--grid", ec_grid, "grid spec file")->required();
    ec_cmd->add_option("--out", ec_out, "curve CSV path")->required();
    ec_cmd->callback([&] {
        const std::string csv =
            emit_curve(ec_m, TrainingBudgets{ec_d, ec_dp}, ec_model.plane(),
                       ec_model.draft_params(), ec_model.target_params(), load_grid(ec_grid));
        write_file_atomic(ec_out, csv);
        std::size_t rows = 0, feasible = 0;
        std::istringstream ss(csv);
        std::string line;
        std::getline(ss, line);
        while (std::getline(ss, line)) {
            ++rows;
            if (line.size() >= 2 && line.compare(line.size() - 2, 2, ",1") == 0) ++feasible;
        }
        emit(Report{ReportKind::OptimalDraft,
                    json{{"curve_path", ec_out}, {"rows", rows}, {"feasible_rows", feasible}}});
    });

    // latency-report
    auto* lr_cmd = app.add_subcommand("latency-report", "aggregate latency measurements");
    std::string lr_csv;
    double lr_n = 0.0, lr_nstar = 0.0, lr_m = 0.0;
    lr_cmd->add_option("--latency", lr_csv, "latency CSV")->required();
    lr_cmd->add_option("--draft-size", lr_n, "evaluated draft size N")->required();
    lr_cmd->add_option("--optimal-draft", lr_nstar, "predicted optimum N*")->required();
    lr_cmd->add_option("--target-size", lr_m, "target size M")->required();
    lr_cmd->callback([&] {
        const LatencyReport rep = latency_report(load_latency_rows(lr_csv), lr_n, lr_nstar, lr_m);
        emit(Report{ReportKind::Latency,
                    json{{"n_prompts", rep.n_prompts},
                         {"ttft_mean", rep.ttft_mean},
                         {"ttft_moe", rep.ttft_moe},
                         {"ttot_mean", rep.ttot_mean},
                         {"ttot_moe", rep.ttot_moe},
                         {"tpot_mean", rep.tpot_mean},
                         {"tpot_moe", rep.tpot_moe},
                         {"normalized_distance", rep.normalized_distance}}});
    });

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace sdsl
