#include "dge/preprocess.hpp"

#include <cmath>

namespace dge {

namespace {

// Patch distance between frames k and j: sum of l1 distances at matching
// offsets o in {-M..-1, 1..M}, using only offsets valid for both frames.
double patch_distance(const Matrix& x, Index k, Index j, int halfwidth) {
    const Index n = x.rows();
    double dist = 0.0;
    for (int o = -halfwidth; o <= halfwidth; ++o) {
        if (o == 0) continue;
        const Index a = k + o;
        const Index b = j + o;
        if (a < 0 || a >= n || b < 0 || b >= n) continue;
        dist += (x.row(a) - x.row(b)).cwiseAbs().sum();
    }
    return dist;
}

std::vector<Index> clipped_neighborhood(Index k, int halfwidth, Index n) {
    std::vector<Index> out;
    out.reserve(2 * halfwidth);
    for (Index j = k - halfwidth; j <= k + halfwidth; ++j) {
        if (j == k || j < 0 || j >= n) continue;
        out.push_back(j);
    }
    return out;
}

}  // namespace

Matrix normalize_features(const Matrix& features) {
    if (!features.allFinite()) throw std::invalid_argument("features contain non-finite values");
    if (features.rows() < 2) throw std::invalid_argument("sequence too short");
    if (features.cols() < 1) throw std::invalid_argument("feature dimension out of range");

    Matrix out(features.rows(), features.cols());
    for (Index c = 0; c < features.cols(); ++c) {
        const double lo = features.col(c).minCoeff();
        const double hi = features.col(c).maxCoeff();
        if (hi > lo) {
            out.col(c) = (features.col(c).array() - lo) * (2.0 / (hi - lo)) - 1.0;
        } else {
            out.col(c).setZero();
        }
    }
    return out;
}

NlWeightRow nl_weights(const Matrix& features, Index frame, const Hyperparams& params) {
    const Index n = features.rows();
    if (frame < 0 || frame >= n) throw std::invalid_argument("frame index out of range");

    NlWeightRow row;
    row.neighbors = clipped_neighborhood(frame, params.search_halfwidth, n);
    const Index count = static_cast<Index>(row.neighbors.size());
    row.weights.resize(count);
    for (Index i = 0; i < count; ++i) {
        const double d = patch_distance(features, frame, row.neighbors[i], params.patch_halfwidth);
        row.weights[i] = std::exp(-d / params.nl_decay);
    }
    row.normalizer = row.weights.sum();
    if (row.normalizer > 0.0) {
        row.weights /= row.normalizer;
    } else {
        // All weights underflowed; fall back to a uniform average.
        row.weights.setConstant(1.0 / static_cast<double>(count));
    }
    return row;
}

Matrix nlmeans_1d(const Matrix& features, const Hyperparams& params) {
    const Index n = features.rows();
    if (n <= 2 * static_cast<Index>(params.search_halfwidth))
        throw std::invalid_argument("sequence too short for the search window");

    Matrix out(n, features.cols());
    detail::parallel_for(n, [&](Index k) {
        const NlWeightRow row = nl_weights(features, k, params);
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(features.cols());
        for (Index i = 0; i < static_cast<Index>(row.neighbors.size()); ++i)
            acc += row.weights[i] * features.row(row.neighbors[i]);
        out.row(k) = acc;
    });
    return out;
}

}  // namespace dge
