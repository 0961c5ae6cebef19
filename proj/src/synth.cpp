#include "dge/synth.hpp"

#include <cmath>
#include <random>

namespace dge {

namespace {

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Box-Muller pair of standard normals from two uniforms.
std::pair<double, double> next_normal_pair(std::mt19937_64& rng) {
    double u1 = next_uniform(rng);
    while (u1 <= 0.0) u1 = next_uniform(rng);
    const double u2 = next_uniform(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

double expected_segment_length(double hazard) {
    double total = 0.0;
    double survive = 1.0;
    for (int t = 0;; ++t) {
        total += survive;
        survive *= std::exp(-hazard * static_cast<double>(t + 1));
        if (survive < 1e-14) break;
    }
    return total;
}

SynthResult gen_markov_gaussian(const SynthConfig& config) {
    const int n_states = static_cast<int>(config.state_means.size());
    if (n_states < 2) throw std::invalid_argument("at least two states required");
    if (!(config.sigma > 0.0)) throw std::invalid_argument("sigma out of range");
    if (!(config.hazard > 0.0)) throw std::invalid_argument("hazard rate out of range");
    if (config.n_frames < 1) throw std::invalid_argument("frame count out of range");

    std::mt19937_64 rng(config.seed);
    SynthResult result;
    result.features.resize(config.n_frames, 2);
    result.labels.resize(static_cast<size_t>(config.n_frames));

    int state = static_cast<int>(next_uniform(rng) * n_states);
    state = std::min(state, n_states - 1);
    Index frames_in_state = 0;

    for (Index k = 0; k < config.n_frames; ++k) {
        if (frames_in_state > 0) {
            const double stay = std::exp(-config.hazard * static_cast<double>(frames_in_state));
            if (next_uniform(rng) >= stay) {
                // Switch to one of the other states, uniformly.
                int pick = static_cast<int>(next_uniform(rng) * (n_states - 1));
                pick = std::min(pick, n_states - 2);
                state = pick >= state ? pick + 1 : pick;
                frames_in_state = 0;
                result.boundaries.push_back(k);
            }
        }
        ++frames_in_state;

        result.labels[static_cast<size_t>(k)] = state + 1;
        const auto [z1, z2] = next_normal_pair(rng);
        result.features(k, 0) = config.state_means[static_cast<size_t>(state)][0] + config.sigma * z1;
        result.features(k, 1) = config.state_means[static_cast<size_t>(state)][1] + config.sigma * z2;
    }
    return result;
}

}  // namespace dge
