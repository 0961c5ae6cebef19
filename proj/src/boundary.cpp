#include "dge/boundary.hpp"

#include "dge/graph.hpp"

#include <algorithm>
#include <cmath>

namespace dge {

std::pair<Vector, Vector> context_predict(const Matrix& embedding, Index frame, int window) {
    const Index n = embedding.rows();
    if (window < 1) throw std::invalid_argument("detector window out of range");
    if (frame < window || frame > n - 1 - window)
        throw std::invalid_argument("frame does not admit full context windows");

    Vector forward = Vector::Zero(embedding.cols());
    Vector backward = Vector::Zero(embedding.cols());
    for (int o = 1; o <= window; ++o) {
        forward += embedding.row(frame - o);
        backward += embedding.row(frame + o);
    }
    forward /= static_cast<double>(window);
    backward /= static_cast<double>(window);
    return {std::move(forward), std::move(backward)};
}

BoundaryScores boundary_scores(const Matrix& embedding, int window) {
    const Index n = embedding.rows();
    if (window < 1) throw std::invalid_argument("detector window out of range");
    if (n <= 2 * static_cast<Index>(window))
        throw std::invalid_argument("sequence too short for the detector window");

    BoundaryScores scores;
    scores.window = window;
    scores.values = Vector::Zero(n);
    detail::parallel_for(n - 2 * window, [&](Index offset) {
        const Index k = offset + window;
        const auto [forward, backward] = context_predict(embedding, k, window);
        const double distance = 1.0 - cosine_similarity(forward, backward);
        scores.values[k] = std::clamp(distance, 0.0, 2.0);
    });
    return scores;
}

BoundaryList detect_boundaries(const BoundaryScores& scores, double z, int min_sep) {
    if (min_sep < 1) throw std::invalid_argument("detector min separation out of range");
    const Index n = scores.values.size();
    const Index first = scores.window;
    const Index last = n - 1 - scores.window;
    if (first > last) return {};

    const Index count = last - first + 1;
    const double mean = scores.values.segment(first, count).mean();
    const double variance =
        (scores.values.segment(first, count).array() - mean).square().sum() / static_cast<double>(count);
    const double stddev = std::sqrt(variance);
    if (stddev == 0.0) return {};
    const double threshold = mean + z * stddev;

    // Local maxima above the threshold.
    std::vector<Index> candidates;
    for (Index k = first; k <= last; ++k) {
        const double s = scores.values[k];
        if (s < threshold) continue;
        if (k > 0 && scores.values[k - 1] > s) continue;
        if (k + 1 < n && scores.values[k + 1] > s) continue;
        candidates.push_back(k);
    }

    // Non-maximum suppression: higher score first, earlier frame on ties.
    std::stable_sort(candidates.begin(), candidates.end(), [&](Index a, Index b) {
        if (scores.values[a] != scores.values[b]) return scores.values[a] > scores.values[b];
        return a < b;
    });
    BoundaryList kept;
    for (const Index k : candidates) {
        bool blocked = false;
        for (const Index other : kept) {
            if (std::abs(k - other) < min_sep) {
                blocked = true;
                break;
            }
        }
        if (!blocked) kept.push_back(k);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace dge
