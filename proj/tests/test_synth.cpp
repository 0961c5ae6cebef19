#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dge/synth.hpp"

#include <cmath>

using namespace dge;

TEST_CASE("a vanishing hazard keeps a single segment") {
    SynthConfig config;
    config.hazard = 1e-12;
    config.seed = 3;
    const SynthResult result = gen_markov_gaussian(config);
    CHECK(result.boundaries.empty());
    for (const int label : result.labels) CHECK(label == result.labels.front());
}

TEST_CASE("labels and boundaries are mutually consistent") {
    SynthConfig config;
    config.seed = 11;
    const SynthResult result = gen_markov_gaussian(config);

    BoundaryList changes;
    for (size_t k = 1; k < result.labels.size(); ++k)
        if (result.labels[k] != result.labels[k - 1]) changes.push_back(static_cast<Index>(k));
    CHECK(result.boundaries == changes);

    // A switch never re-selects the current state, so consecutive segments
    // always carry different labels (already implied by the check above).
    for (const Index b : result.boundaries) {
        CHECK(b >= 1);
        CHECK(b < config.n_frames);
    }
}

TEST_CASE("mean segment length tracks the analytic series") {
    const double hazard = 0.04;
    // Independent evaluation of the series sum_t prod_{s<=t} exp(-hazard*s).
    double expected = 0.0;
    for (int t = 0; t < 200; ++t) expected += std::exp(-hazard * 0.5 * t * (t + 1.0));
    CHECK(expected_segment_length(hazard) == doctest::Approx(expected).epsilon(1e-9));

    SynthConfig config;
    config.hazard = hazard;
    config.n_frames = 350;
    double total_frames = 0.0;
    double total_segments = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        config.seed = seed;
        const SynthResult result = gen_markov_gaussian(config);
        total_frames += static_cast<double>(config.n_frames);
        total_segments += static_cast<double>(result.boundaries.size() + 1);
    }
    const double mean_length = total_frames / total_segments;
    CHECK(mean_length > 0.8 * expected);
    CHECK(mean_length < 1.2 * expected);
}

TEST_CASE("per-state sample means approach the configured means") {
    SynthConfig config;
    config.n_frames = 40000;
    config.seed = 17;
    const SynthResult result = gen_markov_gaussian(config);

    for (size_t state = 0; state < config.state_means.size(); ++state) {
        double sum0 = 0.0, sum1 = 0.0;
        double count = 0.0;
        for (Index k = 0; k < config.n_frames; ++k) {
            if (result.labels[static_cast<size_t>(k)] != static_cast<int>(state) + 1) continue;
            sum0 += result.features(k, 0);
            sum1 += result.features(k, 1);
            count += 1.0;
        }
        REQUIRE(count > 100.0);
        const double bound = 3.0 * config.sigma / std::sqrt(count);
        CHECK(std::abs(sum0 / count - config.state_means[state][0]) < bound);
        CHECK(std::abs(sum1 / count - config.state_means[state][1]) < bound);
    }
}

TEST_CASE("generation is deterministic given the seed") {
    SynthConfig config;
    config.seed = 23;
    const SynthResult a = gen_markov_gaussian(config);
    const SynthResult b = gen_markov_gaussian(config);
    CHECK((a.features - b.features).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.labels == b.labels);
    CHECK(a.boundaries == b.boundaries);

    config.seed = 24;
    const SynthResult c = gen_markov_gaussian(config);
    CHECK((a.features - c.features).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("invalid configurations are rejected") {
    SynthConfig config;
    SUBCASE("single state") {
        config.state_means = {{0.0, 0.0}};
        CHECK_THROWS_AS(gen_markov_gaussian(config), std::invalid_argument);
    }
    SUBCASE("nonpositive sigma") {
        config.sigma = 0.0;
        CHECK_THROWS_AS(gen_markov_gaussian(config), std::invalid_argument);
    }
    SUBCASE("nonpositive hazard") {
        config.hazard = 0.0;
        CHECK_THROWS_AS(gen_markov_gaussian(config), std::invalid_argument);
    }
}
