#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dge/io.hpp"
#include "dge/types.hpp"

#include <cmath>

using namespace dge;

TEST_CASE("defaults match the reference configuration") {
    const Hyperparams p;
    CHECK(p.patch_halfwidth == 1);
    CHECK(p.search_halfwidth == 3);
    CHECK(p.nl_decay == 0.25);
    CHECK(p.feature_kernel_decay == 0.0025);
    CHECK(p.embed_dim == 15);
    CHECK(p.embed_kernel_decay == 0.02 * 15);
    CHECK(p.dge_iterations == 2);
    CHECK(p.loss_mix == 0.1);
    CHECK(p.average_kernel_size == 3);
    CHECK(p.temporal_shrink == 0.3);
    CHECK(p.semantic_shrink == 0.1);
    CHECK(p.cluster_count == 10);
    CHECK(p.descent_iterations == 150);
    CHECK(p.detector_window == 5);
    CHECK(p.detector_z == 1.0);
    CHECK(p.detector_min_separation == 5);
    CHECK(Hyperparams::default_embed_decay(p.embed_dim) == p.embed_kernel_decay);
}

TEST_CASE("validate accepts the defaults on a realistic sequence") {
    const Hyperparams p;
    const Hyperparams out = validate_params(p, 1000, 2048);
    CHECK(out.embed_dim == p.embed_dim);
    CHECK(out.seed == p.seed);
}

TEST_CASE("validate names the first violated constraint") {
    Hyperparams p;

    SUBCASE("alpha out of range") {
        p.loss_mix = 1.2;
        CHECK_THROWS_WITH_AS(validate_params(p, 1000, 2048), "alpha out of range",
                             std::invalid_argument);
    }
    SUBCASE("embedding dim exceeds frame count") {
        p.embed_dim = 100;
        CHECK_THROWS_WITH_AS(validate_params(p, 50, 2048), "embedding dim exceeds frame count",
                             std::invalid_argument);
    }
    SUBCASE("embedding dim exceeds feature dimension") {
        p.embed_dim = 100;
        CHECK_THROWS_WITH_AS(validate_params(p, 1000, 64), "embedding dim exceeds feature dimension",
                             std::invalid_argument);
    }
    SUBCASE("search half-width must exceed patch half-width") {
        p.search_halfwidth = 1;
        CHECK_THROWS_AS(validate_params(p, 1000, 2048), std::invalid_argument);
    }
    SUBCASE("search window half the sequence") {
        CHECK_THROWS_AS(validate_params(p, 6, 2048), std::invalid_argument);
    }
    SUBCASE("eta out of range") {
        p.temporal_shrink = 1.0;
        CHECK_THROWS_WITH_AS(validate_params(p, 1000, 2048), "eta out of range",
                             std::invalid_argument);
    }
    SUBCASE("mu out of range") {
        p.semantic_shrink = 0.0;
        CHECK_THROWS_WITH_AS(validate_params(p, 1000, 2048), "mu out of range",
                             std::invalid_argument);
    }
    SUBCASE("even averaging kernel") {
        p.average_kernel_size = 4;
        CHECK_THROWS_AS(validate_params(p, 1000, 2048), std::invalid_argument);
    }
    SUBCASE("cluster count") {
        p.cluster_count = 1;
        CHECK_THROWS_AS(validate_params(p, 1000, 2048), std::invalid_argument);
    }
}

TEST_CASE("hyperparameter serialization round-trips bit-exactly") {
    Hyperparams p;
    p.nl_decay = 0.1;  // not exactly representable
    p.feature_kernel_decay = 1.0 / 3.0;
    p.embed_kernel_decay = std::nextafter(0.3, 1.0);
    p.loss_mix = 0.30000000000000004;
    p.detector_z = -1.25;
    p.seed = 0xDEADBEEFCAFEull;
    p.embed_dim = 7;
    p.dge_iterations = 11;

    const nlohmann::json j = nlohmann::json::parse(hyperparams_to_json(p).dump());
    const Hyperparams q = hyperparams_from_json(j);

    CHECK(q.patch_halfwidth == p.patch_halfwidth);
    CHECK(q.search_halfwidth == p.search_halfwidth);
    CHECK(q.nl_decay == p.nl_decay);
    CHECK(q.feature_kernel_decay == p.feature_kernel_decay);
    CHECK(q.embed_kernel_decay == p.embed_kernel_decay);
    CHECK(q.embed_dim == p.embed_dim);
    CHECK(q.dge_iterations == p.dge_iterations);
    CHECK(q.loss_mix == p.loss_mix);
    CHECK(q.average_kernel_size == p.average_kernel_size);
    CHECK(q.temporal_shrink == p.temporal_shrink);
    CHECK(q.semantic_shrink == p.semantic_shrink);
    CHECK(q.cluster_count == p.cluster_count);
    CHECK(q.descent_iterations == p.descent_iterations);
    CHECK(q.detector_window == p.detector_window);
    CHECK(q.detector_z == p.detector_z);
    CHECK(q.detector_min_separation == p.detector_min_separation);
    CHECK(q.seed == p.seed);
}
