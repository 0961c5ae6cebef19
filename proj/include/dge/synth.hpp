#pragma once

#include "dge/types.hpp"

#include <array>

// Synthetic sequence generator: a Markov switching model over a set of 2-D
// Gaussian states. The probability of staying in a state decays
// exponentially with the time already spent in it, so segment lengths are
// short-tailed rather than geometric.

namespace dge {

struct SynthConfig {
    Index n_frames = 350;
    std::vector<std::array<double, 2>> state_means = {
        {-7.8, 5.1}, {-1.4, 2.8}, {-2.9, 12.1}, {2.5, 3.4}};
    double sigma = 3.7;    // standard deviation of the isotropic Gaussian per state
    double hazard = 0.04;  // lambda: stay probability after t frames is exp(-lambda * t)
    std::uint64_t seed = 0;
};

struct SynthResult {
    Matrix features;        // n_frames x 2
    ClusterLabels labels;   // 1-based state per frame
    BoundaryList boundaries;  // first frame of every new segment
};

/// Expected segment length of the switching model: sum over t of the
/// probability that a segment lasts beyond t frames.
double expected_segment_length(double hazard);

/// Draws the state sequence and one Gaussian sample per frame. Consecutive
/// states always differ; boundaries are exactly the frames where the state
/// changes. Deterministic given the seed.
SynthResult gen_markov_gaussian(const SynthConfig& config);

}  // namespace dge
