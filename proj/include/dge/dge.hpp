#pragma once

#include "dge/embed.hpp"
#include "dge/types.hpp"

// The alternating core loop: fit the embedding to the current graphs, then
// rebuild the graph from the embedding under the temporal and semantic
// priors. Clustering is plain k-means on the embedding rows.

namespace dge {

struct KmeansResult {
    ClusterLabels labels;          // values in {1..cluster_count}
    Matrix centroids;              // cluster_count x d
    double inertia = 0.0;          // sum of squared distances to the assigned centroid
    std::vector<double> inertia_trajectory;  // one value per Lloyd iteration
};

/// Lloyd's algorithm with k-means++ seeding, run to an assignment fixpoint
/// or 300 iterations. Deterministic given the seed. Empty clusters are
/// re-seeded from the point farthest from its assigned centroid.
KmeansResult kmeans(const Matrix& points, int cluster_count, std::uint64_t seed);

/// State of the alternating loop after an iteration.
struct DgeState {
    int iteration = 0;             // 0 is the initialization
    Matrix embedding;              // N x d
    Matrix graph;                  // N x N, embedding-space affinity after the priors
    ClusterLabels labels;          // empty at iteration 0
    LossReport descent;            // trace of the embedding update that produced this state
};

/// One embedding update: descend the mixed objective (previous embedding
/// graph, weight 1 - alpha; feature graph, weight alpha), warm-started at the
/// previous embedding.
std::pair<Matrix, LossReport> embedding_update(const DgeState& state, const Matrix& feature_graph,
                                               const Hyperparams& params);

/// One graph update: affinity of the embedding, locally averaged, temporally
/// shrunk, then semantically shrunk with fresh k-means labels.
std::pair<Matrix, ClusterLabels> graph_update(const Matrix& embedding, const Hyperparams& params,
                                              std::uint64_t seed);

/// Pipeline switches. The defaults run the full pipeline; the raw variants
/// exist for data that is already clean or already low-dimensional.
struct RunOptions {
    bool normalize = true;        // min-max feature normalization
    bool denoise = true;          // 1-D nonlocal means
    bool pca_init = true;         // false: start the init descent from the input rows (n == d)
    int init_descent_iterations = -1;  // -1: params.descent_iterations; 0: keep the start
};

struct DgeResult {
    Matrix embedding;              // final embedding
    Matrix graph;                  // final graph
    Matrix feature_graph;          // affinity of the (denoised) features
    std::vector<DgeState> history; // states 0..K
    std::vector<std::pair<std::string, double>> stage_seconds;
};

/// Full run: normalize, denoise, initialize, then K alternating iterations.
/// history[i] holds the state after iteration i (i = 0 is the
/// initialization, whose graph carries no priors yet).
DgeResult run_dge(const Matrix& features, const Hyperparams& params, const RunOptions& options = {});

/// run_dge followed by the boundary detector on the final embedding.
struct SegmentOutcome {
    DgeResult dge;
    Vector scores;                 // boundary prediction function, length N
    BoundaryList boundaries;
    std::vector<std::pair<std::string, double>> stage_seconds;  // wall-clock per stage
};

SegmentOutcome segment_sequence(const Matrix& features, const Hyperparams& params,
                                const RunOptions& options = {});

}  // namespace dge
