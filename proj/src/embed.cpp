#include "dge/embed.hpp"

#include "dge/graph.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace dge {

namespace {

// Principal directions (columns, descending variance) of the centered data.
// Small feature counts go through the covariance eigensolver; wide matrices
// through a thin SVD, which yields the same directions.
Matrix principal_directions(const Matrix& centered, int dim) {
    const Index n_features = centered.cols();
    Matrix directions;
    if (n_features <= 1024) {
        const Matrix cov =
            centered.adjoint() * centered / static_cast<double>(std::max<Index>(centered.rows() - 1, 1));
        Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
        if (solver.info() != Eigen::Success) throw std::runtime_error("pca eigensolver failed");
        directions.resize(n_features, dim);
        for (int k = 0; k < dim; ++k)
            directions.col(k) = solver.eigenvectors().col(n_features - 1 - k);
    } else {
        Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
        directions = svd.matrixV().leftCols(dim);
    }
    // Deterministic sign: the largest-magnitude loading of each direction is
    // made positive (earliest index wins ties).
    for (int k = 0; k < dim; ++k) {
        Index best = 0;
        for (Index i = 1; i < n_features; ++i)
            if (std::abs(directions(i, k)) > std::abs(directions(best, k))) best = i;
        if (directions(best, k) < 0.0) directions.col(k) = -directions.col(k);
    }
    return directions;
}

struct LossTerms {
    double value = 0.0;
    Matrix pair_weights;  // d(loss)/d(cosine) per pair, zero on the diagonal
    Matrix cosines;       // clamped pairwise cosine similarities (grad path only)
};

// Shared evaluation of the cross-entropy objective. Returns the loss and,
// when with_grad is set, the pair-weight matrix needed by the chain rule.
LossTerms evaluate(const Matrix& embedding, const ObjectiveSpec& spec, bool with_grad,
                   Matrix* unit_rows_out, Vector* row_norms_out) {
    const Index n = embedding.rows();
    if (n < 2) throw std::invalid_argument("sequence too short");
    if (!(spec.decay > 0.0)) throw std::invalid_argument("kernel decay out of range");
    if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) throw std::invalid_argument("alpha out of range");
    const double w_embed = 1.0 - spec.alpha;
    const double w_feature = spec.alpha;
    if (spec.embed_target == nullptr && w_embed != 0.0)
        throw std::invalid_argument("objective is missing its embedding-space target");
    if (spec.feature_target == nullptr && w_feature != 0.0)
        throw std::invalid_argument("objective is missing its feature-space target");
    for (const Matrix* target : {spec.embed_target, spec.feature_target})
        if (target != nullptr && (target->rows() != n || target->cols() != n))
            throw std::invalid_argument("target graph size does not match embedding");
    if (!embedding.allFinite()) throw std::invalid_argument("embedding contains non-finite values");

    Vector norms(n);
    Matrix unit = embedding;
    bool zero_row = false;
    for (Index k = 0; k < n; ++k) {
        norms[k] = unit.row(k).norm();
        if (norms[k] > 0.0) {
            unit.row(k) /= norms[k];
        } else {
            zero_row = true;
        }
    }
    if (zero_row && with_grad) warn("cross-entropy gradient: zero embedding row, gradient row set to 0");

    Matrix cosines = unit * unit.transpose();
    for (Index k = 0; k < n; ++k) {
        cosines(k, k) = 1.0;
        for (Index j = k + 1; j < n; ++j) {
            double c = std::clamp(cosines(k, j), -1.0, 1.0);
            cosines(k, j) = c;
            cosines(j, k) = c;
        }
    }

    const double lo = kProbabilityClamp;
    const double hi = 1.0 - kProbabilityClamp;
    const double pair_count = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;

    LossTerms terms;
    if (with_grad) terms.pair_weights = Matrix::Zero(n, n);
    Vector row_loss = Vector::Zero(n);

    detail::parallel_for(n, [&](Index k) {
        double acc = 0.0;
        for (Index j = 0; j < n; ++j) {
            if (j == k) continue;
            const double raw = std::exp(-(1.0 - cosines(k, j)) / spec.decay);
            const double p = std::clamp(raw, lo, hi);
            double weight = 0.0;
            double cell = 0.0;
            if (w_embed != 0.0) {
                const double q = (*spec.embed_target)(k, j);
                cell += w_embed * -(q * std::log(p) + (1.0 - q) * std::log1p(-p));
                weight += w_embed * (p - q) / (p * (1.0 - p));
            }
            if (w_feature != 0.0) {
                const double q = (*spec.feature_target)(k, j);
                cell += w_feature * -(q * std::log(p) + (1.0 - q) * std::log1p(-p));
                weight += w_feature * (p - q) / (p * (1.0 - p));
            }
            if (j > k) acc += cell;  // each unordered pair counted once
            if (with_grad) {
                const double dp_dc = (raw >= lo && raw <= hi) ? raw / spec.decay : 0.0;
                terms.pair_weights(k, j) = weight * dp_dc / pair_count;
            }
        }
        row_loss[k] = acc;
    });
    terms.value = row_loss.sum() / pair_count;

    if (with_grad) terms.cosines = std::move(cosines);
    if (unit_rows_out != nullptr) *unit_rows_out = std::move(unit);
    if (row_norms_out != nullptr) *row_norms_out = std::move(norms);
    return terms;
}

}  // namespace

Matrix pca_project(const Matrix& features, int dim) {
    const Index n_frames = features.rows();
    const Index n_features = features.cols();
    if (dim < 1) throw std::invalid_argument("embedding dim out of range");
    if (static_cast<Index>(dim) > n_frames) throw std::invalid_argument("embedding dim exceeds frame count");
    if (static_cast<Index>(dim) > n_features) throw std::invalid_argument("embedding dim exceeds feature dimension");

    Matrix centered = features.rowwise() - features.colwise().mean();
    return centered * principal_directions(centered, dim);
}

double ce_loss(const Matrix& embedding, const Matrix& target, double decay) {
    return evaluate(embedding, ObjectiveSpec::single(target, decay), false, nullptr, nullptr).value;
}

double ce_value(const Matrix& embedding, const ObjectiveSpec& spec) {
    return evaluate(embedding, spec, false, nullptr, nullptr).value;
}

double ce_value_and_grad(const Matrix& embedding, const ObjectiveSpec& spec, Matrix& grad) {
    Matrix unit;
    Vector norms;
    const LossTerms terms = evaluate(embedding, spec, true, &unit, &norms);
    const Index n = embedding.rows();

    // d(cos)/d(row k) = (unit_j - cos_kj * unit_k) / norm_k, summed with the
    // per-pair weights; the first term is one matrix product.
    Vector diag_mix(n);
    for (Index k = 0; k < n; ++k)
        diag_mix[k] = terms.pair_weights.row(k).dot(terms.cosines.row(k));
    grad = terms.pair_weights * unit;
    for (Index k = 0; k < n; ++k) {
        if (norms[k] > 0.0) {
            grad.row(k) = (grad.row(k) - diag_mix[k] * unit.row(k)) / norms[k];
        } else {
            grad.row(k).setZero();
        }
    }
    return terms.value;
}

Matrix ce_grad(const Matrix& embedding, const ObjectiveSpec& spec) {
    Matrix grad;
    ce_value_and_grad(embedding, spec, grad);
    return grad;
}

std::pair<Matrix, LossReport> bb_minimize(const Objective& objective, Matrix x, int iterations,
                                          const BbOptions& options) {
    if (iterations < 1) throw std::invalid_argument("descent iterations out of range");

    LossReport report;
    Matrix grad(x.rows(), x.cols());
    double value = objective(x, grad);
    report.initial_objective = value;
    report.final_gradient_norm = grad.norm();

    Matrix best_x = x;
    double best_value = value;
    if (!std::isfinite(value)) {
        report.diverged = true;
        warn("descent: non-finite objective at the starting point");
        return {std::move(best_x), std::move(report)};
    }

    Matrix prev_x, prev_grad;
    for (int t = 0; t < iterations; ++t) {
        double step = options.initial_step;
        if (t > 0) {
            const Matrix dx = x - prev_x;
            const Matrix dg = grad - prev_grad;
            const double curvature = (dx.array() * dg.array()).sum();
            if (curvature > 0.0)
                step = std::clamp(dx.squaredNorm() / curvature, options.min_step, options.max_step);
        }
        prev_x = x;
        prev_grad = grad;
        x -= step * grad;
        value = objective(x, grad);
        report.objectives.push_back(value);
        report.step_sizes.push_back(step);
        if (!std::isfinite(value)) {
            report.diverged = true;
            warn("descent: non-finite objective, returning best finite iterate");
            break;
        }
        report.final_gradient_norm = grad.norm();
        if (value < best_value) {
            best_value = value;
            best_x = x;
        }
    }
    return {std::move(best_x), std::move(report)};
}

std::pair<Matrix, LossReport> bb_minimize(const ObjectiveSpec& spec, const Matrix& init,
                                          int iterations, const BbOptions& options) {
    return bb_minimize(
        [&spec](const Matrix& x, Matrix& grad) { return ce_value_and_grad(x, spec, grad); },
        init, iterations, options);
}

InitEmbedding init_embedding(const Matrix& denoised, const Hyperparams& params,
                             const InitOptions& options) {
    InitEmbedding out;
    out.feature_graph = cosine_affinity(denoised, params.feature_kernel_decay);

    Matrix start;
    if (options.use_pca) {
        start = pca_project(denoised, params.embed_dim);
    } else {
        if (denoised.cols() != params.embed_dim)
            throw std::invalid_argument("identity start requires the embedding dim to equal the feature dimension");
        start = denoised;
    }

    const int iters =
        options.descent_iterations < 0 ? params.descent_iterations : options.descent_iterations;
    if (iters > 0) {
        const ObjectiveSpec spec = ObjectiveSpec::single(out.feature_graph, params.embed_kernel_decay);
        auto [embedding, report] = bb_minimize(spec, start, iters);
        out.embedding = std::move(embedding);
        out.descent = std::move(report);
    } else {
        out.embedding = std::move(start);
        out.descent.initial_objective =
            ce_loss(out.embedding, out.feature_graph, params.embed_kernel_decay);
    }
    out.embed_graph = cosine_affinity(out.embedding, params.embed_kernel_decay);
    return out;
}

}  // namespace dge
