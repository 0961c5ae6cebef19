#include "dge/graph.hpp"

#include <cmath>

namespace dge {

double cosine_similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = a.dot(b) / (na * nb);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return c;
}

Matrix cosine_affinity(const Matrix& points, double decay) {
    if (!(decay > 0.0)) throw std::invalid_argument("kernel decay out of range");
    const Index n = points.rows();

    // Unit-normalize rows; zero rows stay zero so their dot products vanish,
    // which realizes the cos_sim = 0 convention.
    Matrix unit = points;
    bool zero_row = false;
    for (Index k = 0; k < n; ++k) {
        const double norm = unit.row(k).norm();
        if (norm > 0.0) {
            unit.row(k) /= norm;
        } else {
            zero_row = true;
        }
    }
    if (zero_row) warn("cosine affinity: zero row treated as similarity 0");

    Matrix affinity(n, n);
    detail::parallel_for(n, [&](Index k) {
        affinity(k, k) = 1.0;
        for (Index j = k + 1; j < n; ++j) {
            double c = unit.row(k).dot(unit.row(j));
            if (c > 1.0) c = 1.0;
            if (c < -1.0) c = -1.0;
            affinity(k, j) = std::exp(-(1.0 - c) / decay);
        }
    });
    // Mirror the upper triangle so symmetry is exact.
    for (Index k = 0; k < n; ++k)
        for (Index j = k + 1; j < n; ++j) affinity(j, k) = affinity(k, j);
    return affinity;
}

BumpKernel make_bump_kernel(int size) {
    if (size < 1 || size % 2 == 0) throw std::invalid_argument("averaging kernel size must be odd and positive");
    const int half = (size - 1) / 2;
    Vector samples(size);
    for (int o = -half; o <= half; ++o) {
        const double r = 2.0 * o / (size + 1.0);
        samples[o + half] = std::exp(-1.0 / (1.0 - r * r));
    }
    BumpKernel kernel;
    kernel.weights = samples * samples.transpose();
    kernel.weights /= kernel.weights.sum();
    return kernel;
}

Matrix local_average(const Matrix& graph, const BumpKernel& kernel) {
    const Index n = graph.rows();
    const int size = kernel.size();
    if (size == 1) return graph;
    const int half = (size - 1) / 2;

    Matrix out(n, graph.cols());
    detail::parallel_for(n, [&](Index i) {
        for (Index j = 0; j < graph.cols(); ++j) {
            double acc = 0.0;
            double mass = 0.0;
            for (int a = -half; a <= half; ++a) {
                const Index r = i + a;
                if (r < 0 || r >= graph.rows()) continue;
                for (int b = -half; b <= half; ++b) {
                    const Index c = j + b;
                    if (c < 0 || c >= graph.cols()) continue;
                    const double w = kernel.weights(a + half, b + half);
                    acc += w * graph(r, c);
                    mass += w;
                }
            }
            out(i, j) = acc / mass;
        }
    });
    return out;
}

Matrix temporal_shrink(const Matrix& graph, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta out of range");
    Matrix out = graph;
    const double keep = 1.0 - eta;
    for (Index k = 0; k < out.rows(); ++k)
        for (Index j = 0; j < out.cols(); ++j)
            if (std::abs(k - j) > 1) out(k, j) *= keep;
    return out;
}

Matrix semantic_shrink(const Matrix& graph, const ClusterLabels& labels, double mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu out of range");
    if (static_cast<Index>(labels.size()) != graph.rows())
        throw std::invalid_argument("label length does not match graph size");
    Matrix out = graph;
    const double keep = 1.0 - mu;
    for (Index k = 0; k < out.rows(); ++k)
        for (Index j = 0; j < out.cols(); ++j)
            if (labels[static_cast<size_t>(k)] != labels[static_cast<size_t>(j)]) out(k, j) *= keep;
    return out;
}

}  // namespace dge
