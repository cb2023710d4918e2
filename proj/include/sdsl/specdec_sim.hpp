#pragma once

#include <cstdint>
#include <vector>

#include "sdsl/errors.hpp"

namespace sdsl {

// Target (p) and draft (q) next-token distributions over a shared vocabulary.
// The same pair is used at every speculative position (i.i.d. positions), so
// sum_x min(p_x, q_x) is the exact acceptance probability.
struct CategoricalPair {
    std::size_t vocab_size = 0;
    std::vector<double> p;
    std::vector<double> q;

    void validate() const;
};

// Outcome of a Monte-Carlo acceptance run at one lookahead. mean_accepted
// counts draft acceptances only (no bonus token), so it lives in [0, gamma];
// the empirical TAR observation is mean_accepted + 1.
struct SimResult {
    std::size_t lookahead = 0;
    std::size_t iterations = 0;
    double mean_accepted = 0.0;
    std::vector<std::uint64_t> accept_histogram;  // counts of n over {0..gamma}
};

// sum_x min(p_x, q_x).
double exact_alpha(const CategoricalPair& pair);

// Runs `iterations` speculative rounds: draw up to gamma tokens from q,
// accept each while r <= p(x)/q(x) (r uniform), record n = accepted count
// under the first-rejection rule. Deterministic for a fixed seed.
SimResult simulate_tar(const CategoricalPair& pair, std::size_t gamma, std::size_t iterations,
                       std::uint64_t seed);

// Random sparse target p; draft q linearly interpolated between p (knob = 0)
// and an independently drawn distribution (knob = 1).
CategoricalPair synth_pair(std::size_t vocab, double divergence_knob, std::uint64_t seed);

}  // namespace sdsl
