#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sdsl/alpha_fit.hpp"
#include "sdsl/numerics.hpp"
#include "sdsl/scaling_models.hpp"

using namespace sdsl;

namespace {

std::vector<TarObservation> exact_obs(double alpha, int gamma_max) {
    std::vector<TarObservation> obs;
    for (int g = 1; g <= gamma_max; ++g)
        obs.push_back({static_cast<double>(g), expected_tar(alpha, g)});
    return obs;
}

}  // namespace

TEST_CASE("tar_residuals") {
    CHECK_THROWS_AS(tar_residuals(0.5, {}), EmptyInput);
    CHECK_THROWS_AS(tar_residuals(1.5, {{1.0, 1.2}}), DomainError);

    const auto zero = tar_residuals(0.6, exact_obs(0.6, 9));
    for (const double r : zero) CHECK(std::abs(r) <= 1e-14);

    CHECK(tar_residuals(0.37, {{0.0, 1.0}})[0] == doctest::Approx(0.0));
    CHECK(tar_residuals(0.5, {{2.0, 1.5}})[0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("tar_jacobian matches finite differences of the TAR model") {
    std::vector<TarObservation> obs;
    for (int g = 0; g <= 9; ++g) obs.push_back({static_cast<double>(g), 1.0});

    for (const double alpha : {0.1, 0.35, 0.6, 0.85, 0.97}) {
        const auto jac = tar_jacobian(alpha, obs);
        CHECK(jac[0] == doctest::Approx(0.0).epsilon(1e-12));  // gamma = 0
        CHECK(jac[1] == doctest::Approx(1.0).epsilon(1e-10));  // d(1+a)/da
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const double g = obs[i].lookahead;
            const double fd = finite_difference(
                [g](double a) { return expected_tar(a, g); }, alpha, 1e-6);
            CHECK(std::abs(jac[i] - fd) <= 1e-6);
        }
    }
}

TEST_CASE("estimate_alpha recovers noiseless data") {
    const auto est = estimate_alpha(exact_obs(0.6, 9));
    CHECK(std::abs(est.alpha - 0.6) <= 1e-8);
    CHECK(est.residual_variance <= 1e-16);
    CHECK(est.dof == 8);
}

TEST_CASE("estimate_alpha is permutation invariant") {
    auto obs = exact_obs(0.73, 9);
    for (auto& o : obs) o.measured_tar += 0.01 * std::sin(37.0 * o.lookahead);
    const double a0 = estimate_alpha(obs).alpha;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(obs.begin(), obs.end(), rng);
        CHECK(estimate_alpha(obs).alpha == doctest::Approx(a0).epsilon(1e-12));
    }
}

TEST_CASE("estimate_alpha degenerate and error paths") {
    CHECK_THROWS_AS(estimate_alpha({{1.0, 1.5}}), EmptyInput);
    CHECK_THROWS_AS(estimate_alpha({{0.0, 1.0}, {0.0, 1.0}}), DegenerateFit);
}

TEST_CASE("estimate_alpha CI covers the truth under Gaussian noise") {
    // 200 seeds of sigma = 0.01 noise on the exact gamma = 1..9 curve at 0.7.
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.01);
    int covered = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto obs = exact_obs(0.7, 9);
        for (auto& o : obs)
            o.measured_tar = std::clamp(o.measured_tar + noise(rng), 1.0, o.lookahead + 1.0);
        const auto est = estimate_alpha(obs);
        if (est.ci_low <= 0.7 && 0.7 <= est.ci_high) ++covered;
    }
    CHECK(covered >= 180);
}

TEST_CASE("std_error scales with the residual noise") {
    // Identical noise shape at two amplitudes; the reported error must scale.
    std::mt19937_64 rng(77);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> shape(9);
    for (auto& s : shape) s = noise(rng);

    auto with_amp = [&](double amp) {
        auto obs = exact_obs(0.7, 9);
        for (std::size_t i = 0; i < obs.size(); ++i) obs[i].measured_tar += amp * shape[i];
        return estimate_alpha(obs);
    };
    const auto small = with_amp(0.005);
    const auto big = with_amp(0.010);
    CHECK(big.std_error / small.std_error == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("estimate_alpha CI geometry") {
    auto obs = exact_obs(0.55, 9);
    for (auto& o : obs) o.measured_tar += 0.005 * std::cos(11.0 * o.lookahead);
    const auto est = estimate_alpha(obs);
    CHECK(est.ci_low < est.alpha);
    CHECK(est.alpha < est.ci_high);
    CHECK(est.ci_high - est.alpha == doctest::Approx(1.96 * est.std_error).epsilon(1e-12));
    CHECK(est.alpha - est.ci_low == doctest::Approx(1.96 * est.std_error).epsilon(1e-12));
}
