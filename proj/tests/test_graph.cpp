#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dge/graph.hpp"

#include <cmath>
#include <random>

using namespace dge;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
    return m;
}

Matrix random_symmetric(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = r; c < n; ++c) {
            m(r, c) = dist(rng);
            m(c, r) = m(r, c);
        }
    return m;
}

}  // namespace

TEST_CASE("affinity of identical, orthogonal and antiparallel rows") {
    Matrix x(4, 3);
    x.row(0) << 1.0, 2.0, 0.0;
    x.row(1) << 1.0, 2.0, 0.0;   // identical to row 0
    x.row(2) << -2.0, 1.0, 0.0;  // orthogonal to row 0
    x.row(3) << -1.0, -2.0, 0.0; // antiparallel to row 0
    const double decay = 0.3;
    const Matrix g = cosine_affinity(x, decay);

    CHECK(g(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(0, 2) == doctest::Approx(std::exp(-1.0 / decay)).epsilon(1e-12));
    CHECK(g(0, 2) == doctest::Approx(0.03567).epsilon(1e-3));
    CHECK(g(0, 3) == doctest::Approx(std::exp(-2.0 / decay)).epsilon(1e-12));
    CHECK(g(0, 3) == doctest::Approx(1.2726e-3).epsilon(1e-3));
}

TEST_CASE("affinity is exactly symmetric with unit diagonal and entries in (0,1]") {
    const Matrix x = random_matrix(20, 5, 11);
    const Matrix g = cosine_affinity(x, 0.3);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (Index k = 0; k < g.rows(); ++k) CHECK(g(k, k) == 1.0);
    CHECK(g.minCoeff() > 0.0);
    CHECK(g.maxCoeff() <= 1.0);
}

TEST_CASE("zero rows act as cosine similarity zero") {
    Matrix x(3, 2);
    x.row(0) << 0.0, 0.0;
    x.row(1) << 1.0, 0.0;
    x.row(2) << 0.0, 2.0;
    const double decay = 0.5;
    const Matrix g = cosine_affinity(x, decay);
    CHECK(g(0, 1) == doctest::Approx(std::exp(-1.0 / decay)).epsilon(1e-12));
    CHECK(g(0, 2) == doctest::Approx(std::exp(-1.0 / decay)).epsilon(1e-12));
    CHECK(g(0, 0) == 1.0);
}

TEST_CASE("bump kernel samples the mollifier") {
    SUBCASE("p = 1 is the identity kernel") {
        const BumpKernel k = make_bump_kernel(1);
        CHECK(k.size() == 1);
        CHECK(k.weights(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("p = 3 matches the hand-evaluated samples") {
        // r = o/2 for o in {-1,0,1}: weights prop. to exp(-4/3), exp(-1), exp(-4/3).
        const double side = std::exp(-4.0 / 3.0);
        const double center = std::exp(-1.0);
        const double z = 2.0 * side + center;
        const BumpKernel k = make_bump_kernel(3);
        const Vector marginal = k.weights.rowwise().sum();
        CHECK(marginal[0] == doctest::Approx(side / z).epsilon(1e-12));
        CHECK(marginal[1] == doctest::Approx(center / z).epsilon(1e-12));
        CHECK(marginal[2] == doctest::Approx(side / z).epsilon(1e-12));
        CHECK(marginal[0] == doctest::Approx(0.2945).epsilon(1e-3));
        CHECK(marginal[1] == doctest::Approx(0.4110).epsilon(1e-3));
    }
    SUBCASE("kernels sum to one and are flip-symmetric") {
        for (const int p : {1, 3, 5, 7, 9}) {
            const BumpKernel k = make_bump_kernel(p);
            CHECK(std::abs(k.weights.sum() - 1.0) < 1e-12);
            CHECK((k.weights - k.weights.transpose()).cwiseAbs().maxCoeff() < 1e-15);
            CHECK((k.weights - k.weights.rowwise().reverse().eval()).cwiseAbs().maxCoeff() < 1e-15);
            CHECK((k.weights - k.weights.colwise().reverse().eval()).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
    SUBCASE("even or nonpositive sizes are rejected") {
        CHECK_THROWS_AS(make_bump_kernel(2), std::invalid_argument);
        CHECK_THROWS_AS(make_bump_kernel(0), std::invalid_argument);
        CHECK_THROWS_AS(make_bump_kernel(-3), std::invalid_argument);
    }
}

TEST_CASE("local averaging: constant input, unit kernel, brute-force oracle") {
    SUBCASE("constant matrix is unchanged") {
        const Matrix g = Matrix::Constant(8, 8, 0.4);
        const Matrix out = local_average(g, make_bump_kernel(3));
        CHECK((out - g).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("p = 1 is the identity") {
        const Matrix g = random_symmetric(6, 3);
        const Matrix out = local_average(g, make_bump_kernel(1));
        CHECK((out - g).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("matches an independent double-loop convolution") {
        const Matrix g = random_symmetric(6, 17);
        const BumpKernel kernel = make_bump_kernel(3);
        const Matrix out = local_average(g, kernel);
        for (Index i = 0; i < 6; ++i)
            for (Index j = 0; j < 6; ++j) {
                double acc = 0.0, mass = 0.0;
                for (int a = -1; a <= 1; ++a)
                    for (int b = -1; b <= 1; ++b) {
                        const Index r = i + a, c = j + b;
                        if (r < 0 || r >= 6 || c < 0 || c >= 6) continue;
                        acc += kernel.weights(a + 1, b + 1) * g(r, c);
                        mass += kernel.weights(a + 1, b + 1);
                    }
                CHECK(out(i, j) == doctest::Approx(acc / mass).epsilon(1e-12));
            }
    }
    SUBCASE("preserves symmetry and global range") {
        const Matrix g = random_symmetric(12, 29);
        const Matrix out = local_average(g, make_bump_kernel(5));
        CHECK((out - out.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(out.minCoeff() >= g.minCoeff() - 1e-12);
        CHECK(out.maxCoeff() <= g.maxCoeff() + 1e-12);
    }
}

TEST_CASE("temporal shrink damps only non-adjacent edges") {
    Matrix g = random_symmetric(12, 41);
    g(5, 9) = 0.5;
    g(9, 5) = 0.5;
    g(5, 6) = 0.5;
    g(6, 5) = 0.5;
    const Matrix out = temporal_shrink(g, 0.3);

    CHECK(out(5, 9) == doctest::Approx(0.35).epsilon(1e-14));
    CHECK(out(5, 6) == 0.5);
    for (Index k = 0; k < 12; ++k) CHECK(out(k, k) == g(k, k));
    for (Index k = 0; k + 1 < 12; ++k) CHECK(out(k, k + 1) == g(k, k + 1));
    CHECK((out - out.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(((g - out).array() >= -1e-15).all());
    CHECK_THROWS_AS(temporal_shrink(g, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(temporal_shrink(g, 0.0), std::invalid_argument);
}

TEST_CASE("semantic shrink damps only cross-cluster edges") {
    Matrix g = random_symmetric(10, 43);
    g(2, 7) = 0.4;
    g(7, 2) = 0.4;

    SUBCASE("single cluster leaves the graph untouched") {
        const ClusterLabels one(10, 1);
        const Matrix out = semantic_shrink(g, one, 0.1);
        CHECK((out - g).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("cross-cluster entries scale by 1 - mu") {
        ClusterLabels labels(10, 1);
        for (size_t i = 5; i < 10; ++i) labels[i] = 2;
        const Matrix out = semantic_shrink(g, labels, 0.1);
        CHECK(out(2, 7) == doctest::Approx(0.36).epsilon(1e-14));
        CHECK(out(2, 3) == g(2, 3));
        CHECK((out - out.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("applying twice composes multiplicatively") {
        ClusterLabels labels(10, 1);
        for (size_t i = 0; i < 10; i += 2) labels[i] = 2;
        const double mu = 0.17;
        const Matrix twice = semantic_shrink(semantic_shrink(g, labels, mu), labels, mu);
        const double composed = 1.0 - (1.0 - mu) * (1.0 - mu);
        const Matrix once = semantic_shrink(g, labels, composed);
        CHECK((twice - once).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("label length mismatch is rejected") {
        const ClusterLabels labels(4, 1);
        CHECK_THROWS_AS(semantic_shrink(g, labels, 0.1), std::invalid_argument);
    }
}

TEST_CASE("updates commute with consistent reindexing") {
    const Index n = 9;
    const Matrix g = random_symmetric(n, 57);

    // Reversal preserves temporal adjacency, so both structural updates
    // commute with it.
    const auto reverse = [n](const Matrix& m) {
        Matrix out(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) out(i, j) = m(n - 1 - i, n - 1 - j);
        return out;
    };

    const Matrix a = reverse(temporal_shrink(g, 0.3));
    const Matrix b = temporal_shrink(reverse(g), 0.3);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

    const Matrix c = reverse(local_average(g, make_bump_kernel(3)));
    const Matrix d = local_average(reverse(g), make_bump_kernel(3));
    CHECK((c - d).cwiseAbs().maxCoeff() < 1e-15);

    ClusterLabels labels(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = 1 + static_cast<int>(i % 3);
    ClusterLabels reversed_labels(labels.rbegin(), labels.rend());
    const Matrix e = reverse(semantic_shrink(g, labels, 0.1));
    const Matrix f = semantic_shrink(reverse(g), reversed_labels, 0.1);
    CHECK((e - f).cwiseAbs().maxCoeff() == 0.0);
}
