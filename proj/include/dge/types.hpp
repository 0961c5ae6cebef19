#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Shared domain types for the dynamic-graph-embedding engine.
//
// Conventions used throughout:
//  - a feature matrix is N x n, one row per frame;
//  - an affinity matrix is N x N, symmetric, entries in [0, 1], unit diagonal;
//  - an embedding matrix is N x d with d << n;
//  - cluster labels are 1-based integers in {1..cluster_count};
//  - boundary indices are 0-based frame indices, index b meaning that frames
//    [prev, b-1] and [b, next-1] belong to different events. Index 0 is never
//    a boundary.

namespace dge {

using Index = std::int64_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, strictly increasing 0-based frame indices, each marking the first
/// frame of a new event.
using BoundaryList = std::vector<Index>;

/// Length-N community assignment, values in {1..cluster_count}.
using ClusterLabels = std::vector<int>;

/// All tunables of the pipeline. Defaults are the reference configuration;
/// the embedding kernel decay follows the embedding dimension (0.02 * d)
/// unless set explicitly.
struct Hyperparams {
    int patch_halfwidth = 1;             // M, frames compared per side in the self-similarity patch
    int search_halfwidth = 3;            // L, frames averaged per side by the denoiser
    double nl_decay = 0.25;              // h, nonlocal weight decay
    double feature_kernel_decay = 0.0025;  // decay of the affinity kernel in feature space
    double embed_kernel_decay = 0.3;     // decay of the affinity kernel in embedding space
    int embed_dim = 15;                  // d
    int dge_iterations = 2;              // K, outer alternating iterations
    double loss_mix = 0.1;               // alpha, weight of the feature-space fit term
    int average_kernel_size = 3;         // p, side of the 2-D smoothing kernel (odd)
    double temporal_shrink = 0.3;        // eta, shrink factor for temporally non-adjacent edges
    double semantic_shrink = 0.1;        // mu, shrink factor for cross-cluster edges
    int cluster_count = 10;              // number of semantic communities
    int descent_iterations = 150;        // gradient-descent steps per embedding update
    int detector_window = 5;             // W, context window of the boundary detector
    double detector_z = 1.0;             // z, threshold factor (mean + z * std)
    int detector_min_separation = 5;     // minimum frame gap between detected boundaries
    std::uint64_t seed = 0;

    /// Decay rule for the embedding-space kernel given the embedding dimension.
    static double default_embed_decay(int dim) { return 0.02 * dim; }
};

/// Checks every hyperparameter constraint against a sequence of `n_frames`
/// frames with `n_features` features. Returns the params unchanged when all
/// constraints hold; throws std::invalid_argument naming the first violated
/// constraint otherwise.
Hyperparams validate_params(const Hyperparams& params, Index n_frames, Index n_features);

/// Number of worker threads used by row-parallel kernels. 0 selects the
/// hardware concurrency. Results are identical for every thread count.
void set_thread_count(int threads);
int thread_count();

/// Diagnostic warning sink (stderr). Degenerate-but-recoverable inputs warn
/// instead of aborting a run.
void warn(const std::string& message);

namespace detail {
/// Runs fn(i) for i in [0, count) across the configured worker threads.
/// Every index is processed exactly once; fn must write only to state owned
/// by index i so the result does not depend on the schedule.
void parallel_for(Index count, const std::function<void(Index)>& fn);
}  // namespace detail

}  // namespace dge
