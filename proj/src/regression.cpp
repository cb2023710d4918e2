#include "sdsl/regression.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <set>

namespace sdsl {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kZCritical = 1.96;

Eigen::MatrixXd to_eigen(const DesignMatrix& X) {
    if (X.rows < X.cols) throw RankDeficient("design matrix has fewer rows than columns");
    if (X.values.size() != X.rows * X.cols)
        throw DomainError("design matrix storage does not match its shape");
    Eigen::MatrixXd M(X.rows, X.cols);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) M(i, j) = X.at(i, j);
    if (!M.allFinite()) throw DomainError("design matrix has non-finite entries");
    return M;
}

struct QrSolve {
    Eigen::VectorXd beta;
    Eigen::MatrixXd xtx_inverse;
    Eigen::VectorXd residuals;
    Eigen::VectorXd leverage;  // hat-matrix diagonals
};

QrSolve solve_qr(const Eigen::MatrixXd& M, const Eigen::VectorXd& yv) {
    // Equilibrate columns to unit norm so the condition test measures
    // collinearity, not units; undo the scaling on the way out.
    const Eigen::Index p = M.cols();
    Eigen::VectorXd scale(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double norm = M.col(j).norm();
        if (norm == 0.0) throw RankDeficient("design matrix has an all-zero column");
        scale(j) = 1.0 / norm;
    }
    const Eigen::MatrixXd Ms = M * scale.asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ms);
    const auto& Rdiag = qr.matrixR().diagonal();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < p; ++k) {
        const double d = std::abs(Rdiag(k));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmin == 0.0 || dmax / dmin > kConditionLimit)
        throw RankDeficient("design matrix is rank deficient (condition > 1e12)");

    QrSolve s;
    s.beta = scale.asDiagonal() * qr.solve(yv);
    s.residuals = yv - M * s.beta;
    // Thin Q of the (scaled) factorization spans the same column space;
    // h_ii = ||row_i(Q1)||^2.
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), p);
    s.leverage = Q.rowwise().squaredNorm();
    const Eigen::MatrixXd R1 = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd P = qr.colsPermutation();
    const Eigen::MatrixXd Rinv = R1.inverse();
    s.xtx_inverse =
        scale.asDiagonal() * P * Rinv * Rinv.transpose() * P.transpose() * scale.asDiagonal();
    return s;
}

FitResult assemble(const Eigen::VectorXd& beta, const Eigen::VectorXd& se,
                   const Eigen::VectorXd& resid, const Eigen::VectorXd& yv) {
    FitResult out;
    const auto n = yv.size();
    const double rss = resid.squaredNorm();
    const double tss = (yv.array() - yv.mean()).square().sum();
    out.n_obs = static_cast<std::size_t>(n);
    out.mse = rss / static_cast<double>(n);
    out.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
        out.estimates.push_back(beta(k));
        out.std_errors.push_back(se(k));
        out.margins.push_back(kZCritical * se(k));
        out.ci_low.push_back(beta(k) - kZCritical * se(k));
        out.ci_high.push_back(beta(k) + kZCritical * se(k));
    }
    return out;
}

FitResult ols_impl(const Eigen::MatrixXd& M, const Eigen::VectorXd& yv, bool hc3) {
    const QrSolve s = solve_qr(M, yv);
    const auto n = M.rows();
    const auto p = M.cols();

    Eigen::VectorXd se(p);
    if (!hc3) {
        const double sigma2 = s.residuals.squaredNorm() / static_cast<double>(n - p);
        se = (sigma2 * s.xtx_inverse.diagonal()).cwiseSqrt();
    } else {
        Eigen::VectorXd omega(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double h = s.leverage(i);
            if (h >= 1.0 - 1e-12)
                throw LeverageOne("HC3 undefined: observation with leverage 1");
            const double e = s.residuals(i);
            omega(i) = e * e / ((1.0 - h) * (1.0 - h));
        }
        const Eigen::MatrixXd meat = M.transpose() * omega.asDiagonal() * M;
        se = (s.xtx_inverse * meat * s.xtx_inverse).diagonal().cwiseSqrt();
    }
    return assemble(s.beta, se, s.residuals, yv);
}

Eigen::VectorXd to_vector(const std::vector<double>& y) {
    return Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

FitResult ols_on(const std::vector<double>& reg, const std::vector<double>& y) {
    const std::size_t n = y.size();
    Eigen::MatrixXd M(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        M(static_cast<Eigen::Index>(i), 0) = reg[i];
        M(static_cast<Eigen::Index>(i), 1) = 1.0;
    }
    return ols_impl(M, to_vector(y), false);
}

}  // namespace

FitResult ols(const DesignMatrix& X, const std::vector<double>& y) {
    if (y.size() != X.rows) throw DomainError("ols: response length mismatch");
    return ols_impl(to_eigen(X), to_vector(y), false);
}

FitResult ols_hc3(const DesignMatrix& X, const std::vector<double>& y) {
    if (y.size() != X.rows) throw DomainError("ols_hc3: response length mismatch");
    return ols_impl(to_eigen(X), to_vector(y), true);
}

PlaneFit fit_alpha_plane(const std::vector<AlphaObservation>& obs, bool weighted) {
    if (obs.size() < 4) throw InsufficientData("fit_alpha_plane: need at least 4 observations");
    std::set<double> xs, ys;
    for (const auto& o : obs) {
        xs.insert(o.draft_ppl);
        ys.insert(o.target_ppl);
    }
    if (xs.size() < 2 || ys.size() < 2)
        throw RankDeficient("fit_alpha_plane: perplexities span fewer than 2 distinct values");

    const std::size_t n = obs.size();
    Eigen::MatrixXd M(n, 3);
    Eigen::VectorXd yv(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (weighted) {
            if (!(obs[i].alpha_ci_halfwidth > 0.0))
                throw DomainError("fit_alpha_plane: weighted fit requires positive CI widths");
            w = 1.0 / obs[i].alpha_ci_halfwidth;
        }
        const auto r = static_cast<Eigen::Index>(i);
        M(r, 0) = w * obs[i].draft_ppl;
        M(r, 1) = w * obs[i].target_ppl;
        M(r, 2) = w;
        yv(r) = w * obs[i].alpha;
    }
    FitResult fit = ols_impl(M, yv, false);
    PlaneFit out;
    out.plane = PlaneCoefficients{fit.estimates[0], fit.estimates[1], fit.estimates[2]};
    out.diagnostics = std::move(fit);
    return out;
}

FitResult fit_draft_curve(CurveForm form, const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw InsufficientData("fit_draft_curve: need at least 3 points");
    std::set<double> xs;
    std::vector<double> x, a;
    for (const auto& [px, pa] : points) {
        xs.insert(px);
        x.push_back(px);
        a.push_back(pa);
    }
    if (xs.size() != points.size()) throw RankDeficient("fit_draft_curve: duplicate x values");

    const std::size_t n = points.size();
    switch (form) {
        case CurveForm::Linear:
            return ols_on(x, a);
        case CurveForm::Logarithmic: {
            std::vector<double> lx(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (!(x[i] > 0.0)) throw DomainError("logarithmic fit requires x > 0");
                lx[i] = std::log(x[i]);
            }
            return ols_on(lx, a);
        }
        case CurveForm::PowerLaw:
            break;
    }

    // PowerLaw: log-log OLS start, Gauss-Newton on r_i = p1*x^p2 - a_i.
    std::vector<double> lx(n), la(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0)) throw DomainError("power-law fit requires x > 0");
        if (!(a[i] > 0.0)) throw DomainError("power-law fit requires positive responses");
        lx[i] = std::log(x[i]);
        la[i] = std::log(a[i]);
    }
    const FitResult init = ols_on(lx, la);
    double p2 = init.estimates[0];
    double p1 = std::exp(init.estimates[1]);

    Eigen::MatrixXd J(n, 2);
    Eigen::VectorXd r(n);
    bool converged = false;
    for (int it = 0; it < 200 && !converged; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            const double f = p1 * std::pow(x[i], p2);
            const auto k = static_cast<Eigen::Index>(i);
            r(k) = f - a[i];
            J(k, 0) = std::pow(x[i], p2);
            J(k, 1) = f * lx[i];
        }
        const Eigen::Vector2d step = J.colPivHouseholderQr().solve(-r);
        p1 += step(0);
        p2 += step(1);
        if (!std::isfinite(p1) || !std::isfinite(p2))
            throw ConvergenceError("power-law fit diverged");
        converged = step.cwiseAbs().maxCoeff() < 1e-13 * (1.0 + std::abs(p1) + std::abs(p2));
    }
    if (!converged) throw ConvergenceError("power-law fit did not converge");

    Eigen::VectorXd av = to_vector(a);
    Eigen::VectorXd resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double f = p1 * std::pow(x[i], p2);
        resid(k) = av(k) - f;
        J(k, 0) = std::pow(x[i], p2);
        J(k, 1) = f * lx[i];
    }
    const double sigma2 = resid.squaredNorm() / static_cast<double>(n - 2);
    const Eigen::Matrix2d jtj_inv = (J.transpose() * J).inverse();
    Eigen::Vector2d se = (sigma2 * jtj_inv.diagonal()).cwiseSqrt();
    Eigen::Vector2d beta(p1, p2);
    return assemble(beta, se, resid, av);
}

}  // namespace sdsl
