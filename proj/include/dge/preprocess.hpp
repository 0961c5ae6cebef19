#pragma once

#include "dge/types.hpp"

// Feature normalization and temporal denoising. Each frame is replaced by a
// weighted average of frames whose temporal neighborhoods look alike; the
// weights form a per-frame probability distribution.

namespace dge {

/// Nonlocal weights of one frame: neighbors j within the search window,
/// the normalized weight per neighbor, and the normalizer that made them
/// sum to one.
struct NlWeightRow {
    std::vector<Index> neighbors;
    Vector weights;
    double normalizer = 0.0;
};

/// Min-max maps every column to [-1, 1]; constant columns map to zero.
/// Throws on non-finite input.
Matrix normalize_features(const Matrix& features);

/// Weights of frame k over its search neighborhood: exp(-dist/h) normalized
/// to sum 1, where dist compares the patch around k with the patch around
/// each neighbor (sum of l1 row distances at matching offsets). Neighborhood
/// indices are clipped to the sequence; the center frame is excluded.
NlWeightRow nl_weights(const Matrix& features, Index frame, const Hyperparams& params);

/// 1-D nonlocal-means along time: every output row is the weighted average
/// of its search-window neighbors. Requires N > 2L.
Matrix nlmeans_1d(const Matrix& features, const Hyperparams& params);

}  // namespace dge
