#pragma once

#include "dge/types.hpp"

// Affinity-matrix construction and the structural updates applied to it:
// local edge averaging, temporal shrinkage and semantic (cross-cluster)
// shrinkage. Graphs stay fully connected; updates only reweight edges.

namespace dge {

/// Separable p x p smoothing kernel sampled from the bump function, weights
/// summing to one.
struct BumpKernel {
    Matrix weights;
    int size() const { return static_cast<int>(weights.rows()); }
};

/// Cosine similarity with both zero-vector conventions used by the engine:
/// the similarity of a zero vector against anything is 0.
double cosine_similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Pairwise affinity exp(-(1 - cos_sim)/decay) over rows of `points`.
/// Symmetric with unit diagonal, entries in (0, 1]. Rows of zero norm are
/// treated as cosine similarity 0 against every other row, with a warning.
Matrix cosine_affinity(const Matrix& points, double decay);

/// Builds the normalized p x p bump kernel (p odd).
BumpKernel make_bump_kernel(int size);

/// 2-D convolution of the graph with the kernel; near the borders the kernel
/// is truncated and renormalized over the in-bounds taps.
Matrix local_average(const Matrix& graph, const BumpKernel& kernel);

/// Scales every edge between non-adjacent frames (|k - j| > 1) by (1 - eta);
/// adjacent edges and the diagonal are untouched.
Matrix temporal_shrink(const Matrix& graph, double eta);

/// Scales every edge whose endpoints carry different cluster labels by
/// (1 - mu); same-cluster edges are untouched.
Matrix semantic_shrink(const Matrix& graph, const ClusterLabels& labels, double mu);

}  // namespace dge
