#include "dge/dge.hpp"

#include "dge/boundary.hpp"
#include "dge/graph.hpp"
#include "dge/preprocess.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace dge {

namespace {

// Platform-independent uniform double in [0, 1).
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Index weighted_pick(const Vector& weights, double total, std::mt19937_64& rng) {
    const double u = next_uniform(rng) * total;
    double acc = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

Matrix kmeanspp_seed(const Matrix& points, int cluster_count, std::mt19937_64& rng) {
    const Index n = points.rows();
    Matrix centroids(cluster_count, points.cols());
    const Index first = static_cast<Index>(next_uniform(rng) * static_cast<double>(n));
    centroids.row(0) = points.row(std::min(first, n - 1));

    Vector min_sq = Vector::Constant(n, std::numeric_limits<double>::infinity());
    for (int c = 1; c < cluster_count; ++c) {
        for (Index i = 0; i < n; ++i) {
            const double d = (points.row(i) - centroids.row(c - 1)).squaredNorm();
            if (d < min_sq[i]) min_sq[i] = d;
        }
        const double total = min_sq.sum();
        Index pick;
        if (total > 0.0) {
            pick = weighted_pick(min_sq, total, rng);
        } else {
            // All points coincide with a centroid already.
            pick = static_cast<Index>(next_uniform(rng) * static_cast<double>(n));
            pick = std::min(pick, n - 1);
        }
        centroids.row(c) = points.row(pick);
    }
    return centroids;
}

std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(now() - start).count();
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int cluster_count, std::uint64_t seed) {
    const Index n = points.rows();
    if (cluster_count < 1) throw std::invalid_argument("cluster count out of range");
    if (n < cluster_count) throw std::invalid_argument("cluster count exceeds frame count");

    std::mt19937_64 rng(seed);
    Matrix centroids = kmeanspp_seed(points, cluster_count, rng);

    KmeansResult result;
    result.labels.assign(static_cast<size_t>(n), 0);
    std::vector<int> assignment(static_cast<size_t>(n), -1);
    Vector point_sq(n);

    std::vector<int> nearest(static_cast<size_t>(n), 0);
    constexpr int kMaxIterations = 300;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        // Assignment step; ties go to the lowest centroid index.
        detail::parallel_for(n, [&](Index i) {
            int best = 0;
            double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
            for (int c = 1; c < cluster_count; ++c) {
                const double d = (points.row(i) - centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            nearest[static_cast<size_t>(i)] = best;
            point_sq[i] = best_d;
        });
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            if (assignment[static_cast<size_t>(i)] != nearest[static_cast<size_t>(i)]) changed = true;
            assignment[static_cast<size_t>(i)] = nearest[static_cast<size_t>(i)];
        }

        // Re-seed empty clusters from the farthest points.
        std::vector<Index> counts(static_cast<size_t>(cluster_count), 0);
        for (Index i = 0; i < n; ++i) ++counts[static_cast<size_t>(assignment[static_cast<size_t>(i)])];
        for (int c = 0; c < cluster_count; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) continue;
            Index farthest = 0;
            for (Index i = 1; i < n; ++i)
                if (point_sq[i] > point_sq[farthest]) farthest = i;
            centroids.row(c) = points.row(farthest);
            assignment[static_cast<size_t>(farthest)] = c;
            point_sq[farthest] = 0.0;
            counts[static_cast<size_t>(c)] = 1;
            changed = true;
        }

        result.inertia = point_sq.sum();
        result.inertia_trajectory.push_back(result.inertia);
        if (!changed) break;

        // Update step.
        Matrix sums = Matrix::Zero(cluster_count, points.cols());
        std::vector<Index> members(static_cast<size_t>(cluster_count), 0);
        for (Index i = 0; i < n; ++i) {
            const int c = assignment[static_cast<size_t>(i)];
            sums.row(c) += points.row(i);
            ++members[static_cast<size_t>(c)];
        }
        for (int c = 0; c < cluster_count; ++c)
            if (members[static_cast<size_t>(c)] > 0)
                centroids.row(c) = sums.row(c) / static_cast<double>(members[static_cast<size_t>(c)]);
    }

    for (Index i = 0; i < n; ++i)
        result.labels[static_cast<size_t>(i)] = assignment[static_cast<size_t>(i)] + 1;
    result.centroids = std::move(centroids);
    return result;
}

std::pair<Matrix, LossReport> embedding_update(const DgeState& state, const Matrix& feature_graph,
                                               const Hyperparams& params) {
    const ObjectiveSpec spec = ObjectiveSpec::mixed(state.graph, feature_graph, params.loss_mix,
                                                    params.embed_kernel_decay);
    return bb_minimize(spec, state.embedding, params.descent_iterations);
}

std::pair<Matrix, ClusterLabels> graph_update(const Matrix& embedding, const Hyperparams& params,
                                              std::uint64_t seed) {
    Matrix graph = cosine_affinity(embedding, params.embed_kernel_decay);
    graph = local_average(graph, make_bump_kernel(params.average_kernel_size));
    graph = temporal_shrink(graph, params.temporal_shrink);
    KmeansResult clusters = kmeans(embedding, params.cluster_count, seed);
    graph = semantic_shrink(graph, clusters.labels, params.semantic_shrink);
    return {std::move(graph), std::move(clusters.labels)};
}

DgeResult run_dge(const Matrix& features, const Hyperparams& params, const RunOptions& options) {
    validate_params(params, features.rows(), features.cols());
    if (!features.allFinite()) throw std::invalid_argument("features contain non-finite values");

    DgeResult result;
    Matrix working = features;
    auto start = now();
    if (options.normalize) {
        working = normalize_features(working);
        result.stage_seconds.emplace_back("normalize", seconds_since(start));
    }
    start = now();
    if (options.denoise) {
        working = nlmeans_1d(working, params);
        result.stage_seconds.emplace_back("denoise", seconds_since(start));
    }

    InitOptions init_options;
    init_options.use_pca = options.pca_init;
    init_options.descent_iterations = options.init_descent_iterations;
    start = now();
    InitEmbedding init = init_embedding(working, params, init_options);
    result.stage_seconds.emplace_back("initialize", seconds_since(start));

    result.feature_graph = std::move(init.feature_graph);

    DgeState state;
    state.iteration = 0;
    state.embedding = std::move(init.embedding);
    state.graph = std::move(init.embed_graph);
    state.descent = std::move(init.descent);
    result.history.push_back(state);

    start = now();
    for (int i = 1; i <= params.dge_iterations; ++i) {
        auto [embedding, report] = embedding_update(state, result.feature_graph, params);
        auto [graph, labels] = graph_update(embedding, params, params.seed + static_cast<std::uint64_t>(i));
        state.iteration = i;
        state.embedding = std::move(embedding);
        state.graph = std::move(graph);
        state.labels = std::move(labels);
        state.descent = std::move(report);
        result.history.push_back(state);
    }
    result.stage_seconds.emplace_back("iterate", seconds_since(start));

    result.embedding = state.embedding;
    result.graph = state.graph;
    return result;
}

SegmentOutcome segment_sequence(const Matrix& features, const Hyperparams& params,
                                const RunOptions& options) {
    SegmentOutcome outcome;
    outcome.dge = run_dge(features, params, options);
    outcome.stage_seconds = outcome.dge.stage_seconds;

    const auto start = now();
    const BoundaryScores scores = boundary_scores(outcome.dge.embedding, params.detector_window);
    outcome.boundaries =
        detect_boundaries(scores, params.detector_z, params.detector_min_separation);
    outcome.scores = scores.values;
    outcome.stage_seconds.emplace_back("detect", seconds_since(start));
    return outcome;
}

}  // namespace dge
