#include <doctest.h>

#include <cmath>
#include <random>

#include "sdsl/numerics.hpp"
#include "sdsl/scaling_models.hpp"

using namespace sdsl;

namespace {

// Replication constants of the loss law used by the bundled configs.
const ChinchillaParams kPaperParams{1.8172, 482.01, 2085.43, 0.3478, 0.3658};
const PlaneCoefficients kPaperPlane{-0.0067, 0.012971, 0.642084};

}  // namespace

TEST_CASE("chinchilla_loss anchors and monotonicity") {
    // Irreducible-loss limit.
    CHECK(chinchilla_loss(1e30, 1e30, kPaperParams) == doctest::Approx(1.8172).epsilon(1e-6));
    // High-precision evaluation of the three terms at (1e9, 1e12).
    CHECK(chinchilla_loss(1e9, 1e12, kPaperParams) ==
          doctest::Approx(2.259389024804116).epsilon(1e-14));
    CHECK(perplexity_of(1e9, 1e12, kPaperParams) ==
          doctest::Approx(9.577235925258309).epsilon(1e-14));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logn(15.0, 26.0);
    for (int i = 0; i < 100; ++i) {
        const double n = std::exp(logn(rng));
        const double d = std::exp(logn(rng) + 3.0);
        const double l = chinchilla_loss(n, d, kPaperParams);
        CHECK(l > kPaperParams.irreducible);
        CHECK(chinchilla_loss(2.0 * n, d, kPaperParams) < l);
        CHECK(chinchilla_loss(n, 2.0 * d, kPaperParams) < l);
        CHECK(perplexity_of(n, d, kPaperParams) == doctest::Approx(std::exp(l)).epsilon(1e-15));
        CHECK(perplexity_of(n, d, kPaperParams) > std::exp(kPaperParams.irreducible));
    }
    CHECK_THROWS_AS(chinchilla_loss(0.0, 1e12, kPaperParams), DomainError);
    CHECK_THROWS_AS(chinchilla_loss(1e9, -1.0, kPaperParams), DomainError);
}

TEST_CASE("alpha_plane evaluation and range guard") {
    // OPT-125M / OPT-13B perplexities against the fitted plane; the measured
    // alpha 0.5959 is a residual of the fit, not an identity.
    const double a = alpha_plane(29.793, 15.585, kPaperPlane);
    CHECK(a == doctest::Approx(0.644623935).epsilon(1e-12));
    CHECK(std::abs(a - 0.5959) < 0.06);

    CHECK(alpha_plane(0.0, 0.0, kPaperPlane) == doctest::Approx(0.642084));
    CHECK_THROWS_AS(alpha_plane(-1.0, 1.0, kPaperPlane), DomainError);

    // a < 0: alpha strictly decreasing in draft perplexity.
    CHECK(alpha_plane(10.0, 15.0, kPaperPlane) > alpha_plane(20.0, 15.0, kPaperPlane));

    try {
        alpha_plane(200.0, 10.0, kPaperPlane);  // affine value < 0
        FAIL("expected AlphaOutOfRange");
    } catch (const AlphaOutOfRange& e) {
        CHECK(e.value() < 0.0);
    }
    CHECK_THROWS_AS(alpha_plane(1.0, 40.0, kPaperPlane), AlphaOutOfRange);  // > 1
}

TEST_CASE("improvement_factor") {
    CHECK(improvement_factor(0.8, 4.0, 0.05) ==
          doctest::Approx((1.0 - std::pow(0.8, 5)) / (0.2 * 1.2)).epsilon(1e-15));
    CHECK(improvement_factor(0.8, 4.0, 0.05) == doctest::Approx(2.801333333).epsilon(1e-9));
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (int i = 0; i < 20; ++i)
        CHECK(improvement_factor(unit(rng), 0.0, unit(rng)) == doctest::Approx(1.0));
    CHECK(improvement_factor(1e-12, 5.0, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(improvement_factor(1.5, 2.0, 0.05), DomainError);
}

TEST_CASE("expected_tar") {
    // Closed form vs geometric-series cross-check.
    CHECK(expected_tar(0.5, 2.0) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(expected_tar(0.5, 2.0) == doctest::Approx(1.0 + 0.5 + 0.25).epsilon(1e-15));
    CHECK(expected_tar(0.3, 0.0) == doctest::Approx(1.0));
    CHECK(expected_tar(1.0 - 1e-13, 9.0) == doctest::Approx(10.0).epsilon(1e-9));

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ua(0.3, 0.9);
    std::uniform_int_distribution<int> ug(1, 8);
    for (int i = 0; i < 200; ++i) {
        // increments of a^(g+1) stay far above double precision in this range
        const double a = ua(rng);
        const double g = ug(rng);
        const double tar = expected_tar(a, g);
        CHECK(tar >= 1.0);
        CHECK(tar <= g + 1.0);
        CHECK(expected_tar(a + 0.01, g) > tar);
        CHECK(expected_tar(a, g + 1.0) > tar);
        // algebraic identity tar*(1-a) + a^(g+1) = 1
        CHECK(std::abs(tar * (1.0 - a) + std::pow(a, g + 1.0) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(expected_tar(0.0, 3.0), DomainError);
}

TEST_CASE("throughput basics and factorizations") {
    const SpecSystem sys{100.0, 1.0};
    CHECK(throughput(sys, 0.7, 0.0) == doctest::Approx(5e-3).epsilon(1e-15));

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ua(0.05, 0.95);
    std::uniform_real_distribution<double> ug(0.0, 30.0);
    std::uniform_real_distribution<double> uratio(std::log(2.0), std::log(1e4));
    for (int i = 0; i < 50; ++i) {
        const double ratio = std::exp(uratio(rng));
        const SpecSystem s{ratio, 1.0};
        const double a = ua(rng);
        const double g = ug(rng);
        const double t = throughput(s, a, g);
        CHECK(t == doctest::Approx(expected_tar(a, g) / (2.0 * (s.target_size + g))).epsilon(1e-12));
        // improvement factor at c = N/M over the 1/(2M) baseline
        CHECK(t == doctest::Approx(improvement_factor(a, g, 1.0 / ratio) / (2.0 * ratio))
                       .epsilon(1e-12));
    }
    CHECK_THROWS_AS(throughput(sys, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(throughput(SpecSystem{1.0, 2.0}, 0.5, 2.0), DomainError);
}

TEST_CASE("gamma_opt agrees with a dense scan of the raw throughput") {
    const SpecSystem sys{100.0, 1.0};
    const double g = gamma_opt(sys, 0.7);

    double best_g = 0.0, best_t = -1.0;
    for (double gg = 0.0; gg <= 50.0; gg += 1e-3) {
        const double t = throughput(sys, 0.7, gg);
        if (t > best_t) {
            best_t = t;
            best_g = gg;
        }
    }
    CHECK(g == doctest::Approx(best_g).epsilon(2e-4));
    CHECK(throughput(sys, 0.7, g) >= best_t - 1e-15);
    CHECK(g == doctest::Approx(9.342391009972406).epsilon(1e-12));

    // Monotone increase of the optimal lookahead with alpha at fixed M/N.
    double prev = -1.0;
    for (const double a : {0.5, 0.7, 0.9}) {
        double scan_g = 0.0, scan_t = -1.0;
        for (double gg = 0.0; gg <= 80.0; gg += 1e-3) {
            const double t = throughput(sys, a, gg);
            if (t > scan_t) {
                scan_t = t;
                scan_g = gg;
            }
        }
        const double got = gamma_opt(sys, a);
        CHECK(got == doctest::Approx(scan_g).epsilon(2e-4));
        CHECK(got > prev);
        prev = got;
    }
    CHECK_THROWS_AS(gamma_opt(SpecSystem{1.0, 1.0}, 0.7), DomainError);
    CHECK_THROWS_AS(gamma_opt(sys, 1.0), DomainError);
}

TEST_CASE("gamma_opt clamps when speculation is unprofitable") {
    const SpecSystem sys{2.0, 1.0};
    CHECK(gamma_opt(sys, 0.05) == 0.0);
    CHECK(throughput_at_opt(sys, 0.05) == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("throughput_at_opt consistency sweep") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> ua(0.05, 0.95);
    std::uniform_real_distribution<double> uratio(std::log(2.0), std::log(1e4));
    int interior = 0;
    for (int i = 0; i < 1000; ++i) {
        const SpecSystem s{std::exp(uratio(rng)), 1.0};
        const double a = ua(rng);
        const double g = gamma_opt(s, a);
        const double t_opt = throughput_at_opt(s, a);
        CHECK(t_opt == doctest::Approx(throughput(s, a, g)).epsilon(1e-10));
        if (g > 0.0) {
            ++interior;
            // Stationarity of the raw curve at the interior optimum.
            const double h = 1e-4 * (1.0 + g);
            const double d =
                finite_difference([&](double x) { return throughput(s, a, x); }, g, h);
            const double curvature_scale =
                std::abs(throughput(s, a, g + h) - 2.0 * throughput(s, a, g) +
                         throughput(s, a, g - h)) /
                (h * h) * (1.0 + g);
            CHECK(std::abs(d) <= 1e-6 * curvature_scale);
        }
        // Discrete optimality against integer lookaheads.
        for (int gg = 0; gg <= 30; ++gg)
            CHECK(t_opt >= throughput(s, a, gg) * (1.0 - 1e-12));
    }
    CHECK(interior > 800);  // the sweep must actually exercise the interior branch
}

TEST_CASE("throughput_at_opt reproduces the OPT-13B operating point") {
    // N fixed at the published optimum; alpha comes through the loss-law ->
    // plane chain with D = D' = 180e9.
    const double m = 12853473280.0;
    const double n = 117313808.0;
    const double x = perplexity_of(n, 180e9, kPaperParams);
    const double y = perplexity_of(m, 180e9, kPaperParams);
    const double a = alpha_plane(x, y, kPaperPlane);
    const double t = throughput_at_opt(SpecSystem{m, n}, a);
    CHECK(std::abs(t - 1.009e-10) / 1.009e-10 < 0.10);
}

TEST_CASE("throughput_from_hparams composes the three-step pipeline") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> un(std::log(5e7), std::log(5e9));
    std::uniform_real_distribution<double> um(std::log(1e10), std::log(2e11));
    std::uniform_real_distribution<double> ud(std::log(1e11), std::log(2e13));
    for (int i = 0; i < 100; ++i) {
        const double n = std::exp(un(rng));
        const double m = std::exp(um(rng));
        const TrainingBudgets b{std::exp(ud(rng)), std::exp(ud(rng))};
        const double composed =
            throughput_from_hparams(n, b, m, kPaperPlane, kPaperParams, kPaperParams);
        const double x = perplexity_of(n, b.draft_tokens, kPaperParams);
        const double y = perplexity_of(m, b.target_tokens, kPaperParams);
        const double manual = throughput_at_opt(SpecSystem{m, n}, alpha_plane(x, y, kPaperPlane));
        CHECK(composed == doctest::Approx(manual).epsilon(1e-12));
    }

    // Published OPT-13B / OPT-draft operating point.
    const double t = throughput_from_hparams(117313808.0, TrainingBudgets{180e9, 180e9},
                                             12853473280.0, kPaperPlane, kPaperParams,
                                             kPaperParams);
    CHECK(std::abs(t - 1.009e-10) / 1.009e-10 < 0.10);

    // Driving N tiny pushes the affine alpha negative.
    CHECK_THROWS_AS(throughput_from_hparams(1e6, TrainingBudgets{180e9, 180e9}, 12853473280.0,
                                            kPaperPlane, kPaperParams, kPaperParams),
                    AlphaOutOfRange);
}

TEST_CASE("throughput_at_opt is monotone in alpha at fixed sizes") {
    const SpecSystem sys{5e9, 5e7};
    double prev = 0.0;
    for (double a = 0.3; a < 0.95; a += 0.05) {
        const double t = throughput_at_opt(sys, a);
        CHECK(t >= prev);
        prev = t;
    }
}
