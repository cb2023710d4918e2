#include "sdsl/specdec_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sdsl {

namespace {

// Walker/Vose alias table for O(1) categorical sampling.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t n = weights.size();
        prob_.resize(n);
        alias_.resize(n, 0);
        std::vector<double> scaled(n);
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n);
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            const std::size_t l = large.back();
            small.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (const std::size_t i : large) prob_[i] = 1.0;
        for (const std::size_t i : small) prob_[i] = 1.0;
    }

    std::size_t draw(std::mt19937_64& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng) *
                         static_cast<double>(prob_.size());
        auto k = static_cast<std::size_t>(u);
        if (k >= prob_.size()) k = prob_.size() - 1;
        return (u - static_cast<double>(k)) < prob_[k] ? k : alias_[k];
    }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

}  // namespace

void CategoricalPair::validate() const {
    if (vocab_size < 1) throw DomainError("categorical pair: empty vocabulary");
    if (p.size() != vocab_size || q.size() != vocab_size)
        throw DomainError("categorical pair: vector lengths do not match vocab_size");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < vocab_size; ++i) {
        if (p[i] < 0.0 || q[i] < 0.0) throw DomainError("categorical pair: negative mass");
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12)
        throw DomainError("categorical pair: distributions must sum to 1 within 1e-12");
}

double exact_alpha(const CategoricalPair& pair) {
    pair.validate();
    double a = 0.0;
    for (std::size_t i = 0; i < pair.vocab_size; ++i) a += std::min(pair.p[i], pair.q[i]);
    return a;
}

SimResult simulate_tar(const CategoricalPair& pair, std::size_t gamma, std::size_t iterations,
                       std::uint64_t seed) {
    pair.validate();
    if (gamma < 1) throw DomainError("simulate_tar: gamma must be >= 1");
    if (iterations < 1) throw DomainError("simulate_tar: iterations must be >= 1");

    // Acceptance probability of a q-drawn token x is min(1, p(x)/q(x)).
    // Tokens with q(x) = 0 are never drawn (alias table assigns them no mass).
    std::vector<double> accept_prob(pair.vocab_size, 0.0);
    for (std::size_t i = 0; i < pair.vocab_size; ++i)
        if (pair.q[i] > 0.0) accept_prob[i] = std::min(1.0, pair.p[i] / pair.q[i]);

    const AliasTable table(pair.q);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SimResult out;
    out.lookahead = gamma;
    out.iterations = iterations;
    out.accept_histogram.assign(gamma + 1, 0);

    std::uint64_t total_accepted = 0;
    for (std::size_t it = 0; it < iterations; ++it) {
        std::size_t n = gamma;
        for (std::size_t i = 0; i < gamma; ++i) {
            const std::size_t token = table.draw(rng);
            const double r = unit(rng);
            // accept on r <= p/q; the complement of the rejection rule, with
            // ties accepted
            if (!(r <= accept_prob[token])) {
                n = i;
                break;
            }
        }
        ++out.accept_histogram[n];
        total_accepted += n;
    }
    out.mean_accepted = static_cast<double>(total_accepted) / static_cast<double>(iterations);
    return out;
}

CategoricalPair synth_pair(std::size_t vocab, double divergence_knob, std::uint64_t seed) {
    if (vocab < 2) throw DomainError("synth_pair: vocab must be >= 2");
    if (!(divergence_knob >= 0.0 && divergence_knob <= 1.0))
        throw DomainError("synth_pair: knob must lie in [0,1]");

    std::mt19937_64 rng(seed);
    // Sparse Dirichlet draws (gamma shape < 1) give spiky next-token-like
    // distributions.
    std::gamma_distribution<double> gamma_draw(0.3, 1.0);
    auto draw_dist = [&] {
        std::vector<double> v(vocab);
        double sum = 0.0;
        for (auto& x : v) {
            x = gamma_draw(rng);
            sum += x;
        }
        for (auto& x : v) x /= sum;
        return v;
    };

    CategoricalPair pair;
    pair.vocab_size = vocab;
    pair.p = draw_dist();
    if (divergence_knob == 0.0) {
        pair.q = pair.p;
        return pair;
    }
    const std::vector<double> u = draw_dist();
    pair.q.resize(vocab);
    double sum = 0.0;
    for (std::size_t i = 0; i < vocab; ++i) {
        pair.q[i] = (1.0 - divergence_knob) * pair.p[i] + divergence_knob * u[i];
        sum += pair.q[i];
    }
    for (auto& x : pair.q) x /= sum;
    return pair;
}

}  // namespace sdsl
