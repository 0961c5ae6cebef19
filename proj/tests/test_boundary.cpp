#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dge/boundary.hpp"
#include "dge/eval.hpp"

#include <cmath>
#include <random>

using namespace dge;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
    return m;
}

// Piecewise-constant embedding over mutually orthogonal unit levels.
Matrix orthogonal_segments(const std::vector<Index>& lengths) {
    Index n = 0;
    for (const Index len : lengths) n += len;
    Matrix x = Matrix::Zero(n, static_cast<Index>(lengths.size()));
    Index row = 0;
    for (size_t s = 0; s < lengths.size(); ++s)
        for (Index i = 0; i < lengths[s]; ++i, ++row) x(row, static_cast<Index>(s)) = 1.0;
    return x;
}

}  // namespace

TEST_CASE("context prediction windows") {
    SUBCASE("constant embedding predicts itself") {
        const Matrix x = Matrix::Constant(20, 3, 0.5);
        const auto [forward, backward] = context_predict(x, 10, 4);
        CHECK((forward - backward).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("window of one picks the adjacent rows") {
        const Matrix x = random_matrix(10, 2, 3);
        const auto [forward, backward] = context_predict(x, 4, 1);
        CHECK((forward.transpose() - x.row(3)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((backward.transpose() - x.row(5)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("matches a direct slice mean") {
        const Matrix x = random_matrix(30, 4, 7);
        const int window = 5;
        for (const Index k : {Index(5), Index(12), Index(24)}) {
            const auto [forward, backward] = context_predict(x, k, window);
            Vector fw = Vector::Zero(4), bw = Vector::Zero(4);
            for (Index j = k - window; j <= k - 1; ++j) fw += x.row(j).transpose();
            for (Index j = k + 1; j <= k + window; ++j) bw += x.row(j).transpose();
            fw /= window;
            bw /= window;
            CHECK((forward - fw).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((backward - bw).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("inadmissible frames are rejected") {
        const Matrix x = random_matrix(12, 2, 9);
        CHECK_THROWS_AS(context_predict(x, 2, 3), std::invalid_argument);
        CHECK_THROWS_AS(context_predict(x, 10, 3), std::invalid_argument);
    }
}

TEST_CASE("scores peak at an orthogonal junction") {
    const Index junction = 12;
    const Matrix x = orthogonal_segments({junction, 12});
    const int window = 3;
    const BoundaryScores scores = boundary_scores(x, window);

    // Both frames whose windows sit fully on opposite sides score exactly 1.
    CHECK(scores.values[junction - 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scores.values[junction] == doctest::Approx(1.0).epsilon(1e-12));
    for (Index k = 0; k < x.rows(); ++k) {
        if (k == junction - 1 || k == junction) continue;
        CHECK(scores.values[k] < 1.0 - 1e-9);
    }
    CHECK(scores.values.maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("constant embeddings score zero everywhere") {
    const Matrix x = Matrix::Constant(25, 3, 0.4);
    const BoundaryScores scores = boundary_scores(x, 5);
    CHECK(scores.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scores ignore uniform positive scaling") {
    const Matrix x = random_matrix(40, 3, 13);
    const BoundaryScores a = boundary_scores(x, 4);
    const BoundaryScores b = boundary_scores(3.0 * x, 4);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("edge frames carry zero scores and short sequences are rejected") {
    const Matrix x = random_matrix(20, 2, 15);
    const BoundaryScores scores = boundary_scores(x, 4);
    for (Index k = 0; k < 4; ++k) {
        CHECK(scores.values[k] == 0.0);
        CHECK(scores.values[19 - k] == 0.0);
    }
    CHECK_THROWS_AS(boundary_scores(random_matrix(8, 2, 16), 4), std::invalid_argument);
}

TEST_CASE("detection handles degenerate and peaked score vectors") {
    BoundaryScores scores;
    scores.window = 2;

    SUBCASE("all-zero scores yield no boundaries") {
        scores.values = Vector::Zero(20);
        CHECK(detect_boundaries(scores, 1.0, 5).empty());
    }
    SUBCASE("a single sharp peak is found") {
        scores.values = Vector::Zero(20);
        scores.values[9] = 1.0;
        const BoundaryList found = detect_boundaries(scores, 1.0, 5);
        REQUIRE(found.size() == 1);
        CHECK(found[0] == 9);
    }
    SUBCASE("close peaks collapse to the higher one") {
        scores.values = Vector::Zero(24);
        scores.values[8] = 0.8;
        scores.values[10] = 1.0;
        const BoundaryList found = detect_boundaries(scores, 0.5, 5);
        REQUIRE(found.size() == 1);
        CHECK(found[0] == 10);
    }
    SUBCASE("score ties keep the earlier frame") {
        scores.values = Vector::Zero(24);
        scores.values[8] = 1.0;
        scores.values[10] = 1.0;
        const BoundaryList found = detect_boundaries(scores, 0.5, 5);
        REQUIRE(found.size() == 1);
        CHECK(found[0] == 8);
    }
    SUBCASE("min separation is honored on random scores") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        scores.values.resize(200);
        for (Index i = 0; i < 200; ++i) scores.values[i] = dist(rng);
        scores.values.head(2).setZero();
        scores.values.tail(2).setZero();
        for (const int min_sep : {1, 3, 7}) {
            const BoundaryList found = detect_boundaries(scores, 0.5, min_sep);
            for (size_t i = 1; i < found.size(); ++i)
                CHECK(found[i] - found[i - 1] >= min_sep);
        }
    }
    SUBCASE("invalid separation is rejected") {
        scores.values = Vector::Zero(10);
        CHECK_THROWS_AS(detect_boundaries(scores, 1.0, 0), std::invalid_argument);
    }
}

TEST_CASE("orthogonal segments are segmented perfectly at tolerance one") {
    const int window = 5;
    const std::vector<Index> lengths = {14, 13, 16, 12, 15};
    const Matrix x = orthogonal_segments(lengths);
    const BoundaryScores scores = boundary_scores(x, window);
    const BoundaryList found = detect_boundaries(scores, 1.0, 5);

    BoundaryList truth;
    Index acc = 0;
    for (size_t s = 0; s + 1 < lengths.size(); ++s) {
        acc += lengths[s];
        truth.push_back(acc);
    }
    const PrfReport report = prf_at_tolerance(found, truth, 1);
    CHECK(report.precision == doctest::Approx(1.0));
    CHECK(report.recall == doctest::Approx(1.0));
    CHECK(report.f_score == doctest::Approx(1.0));
}

TEST_CASE("detected boundaries survive coordinate-wise scaled copies") {
    // Cosine invariance at the score level implies identical detections.
    const Matrix x = random_matrix(60, 3, 21);
    const BoundaryScores a = boundary_scores(x, 5);
    const BoundaryScores b = boundary_scores(0.25 * x, 5);
    CHECK(detect_boundaries(a, 1.0, 5) == detect_boundaries(b, 1.0, 5));
}
