#pragma once

#include "dge/types.hpp"

#include <functional>
#include <utility>

// Low-dimensional embedding machinery: PCA initialization, the pairwise
// cross-entropy objective that fits an embedding's affinity matrix to one or
// two target graphs, and Barzilai-Borwein gradient descent.

namespace dge {

/// Probability clamp applied to the embedding affinity inside the loss.
inline constexpr double kProbabilityClamp = 1e-7;

/// Objective of one embedding update: fit the embedding affinity to
/// `embed_target` with weight (1 - alpha) and to `feature_target` with
/// weight alpha. A null target is skipped (its weight must then be zero,
/// or one for the other side).
struct ObjectiveSpec {
    const Matrix* embed_target = nullptr;
    const Matrix* feature_target = nullptr;
    double alpha = 1.0;
    double decay = 0.3;

    /// Single-target fit (initialization objective).
    static ObjectiveSpec single(const Matrix& target, double decay) {
        return {nullptr, &target, 1.0, decay};
    }
    static ObjectiveSpec mixed(const Matrix& embed_target, const Matrix& feature_target,
                               double alpha, double decay) {
        return {&embed_target, &feature_target, alpha, decay};
    }
};

/// Descent trace: objective after every step, the step sizes used, and the
/// gradient norm at the last evaluated iterate.
struct LossReport {
    double initial_objective = 0.0;
    std::vector<double> objectives;
    std::vector<double> step_sizes;
    double final_gradient_norm = 0.0;
    bool diverged = false;
};

/// Centers the rows and projects them onto the top `dim` principal
/// directions (decreasing variance). The sign of each direction is fixed by
/// making its largest-magnitude loading positive.
Matrix pca_project(const Matrix& features, int dim);

/// Mean binary cross-entropy between the embedding affinity and `target`
/// over off-diagonal pairs k < j, with the affinity clamped away from
/// {0, 1}.
double ce_loss(const Matrix& embedding, const Matrix& target, double decay);

/// Weighted loss of the full objective (both targets).
double ce_value(const Matrix& embedding, const ObjectiveSpec& spec);

/// Analytic gradient of the objective with respect to every embedding
/// coordinate. Rows of zero norm get a zero gradient row and a warning.
Matrix ce_grad(const Matrix& embedding, const ObjectiveSpec& spec);

/// Loss and gradient in one pass.
double ce_value_and_grad(const Matrix& embedding, const ObjectiveSpec& spec, Matrix& grad);

struct BbOptions {
    double initial_step = 1e-2;
    double min_step = 1e-6;
    double max_step = 1e2;
};

/// Objective callback: returns the loss at x and fills grad (same shape).
using Objective = std::function<double(const Matrix& x, Matrix& grad)>;

/// Gradient descent with the Barzilai-Borwein step. The first step uses the
/// fixed initial step; later steps use (dx.dx)/(dx.dg) clamped to
/// [min_step, max_step], falling back to the initial step when dx.dg <= 0.
/// Returns the iterate with the lowest recorded objective (the start
/// included). A non-finite objective stops the descent at the best finite
/// iterate.
std::pair<Matrix, LossReport> bb_minimize(const Objective& objective, Matrix init,
                                          int iterations, const BbOptions& options = {});

/// Same, on the cross-entropy objective.
std::pair<Matrix, LossReport> bb_minimize(const ObjectiveSpec& spec, const Matrix& init,
                                          int iterations, const BbOptions& options = {});

/// Result of the embedding initialization: the fitted embedding, its
/// affinity graph, the feature-space affinity graph it was fitted to, and
/// the descent trace.
struct InitEmbedding {
    Matrix embedding;
    Matrix embed_graph;
    Matrix feature_graph;
    LossReport descent;
};

struct InitOptions {
    bool use_pca = true;         // false starts from the input rows (requires n == d)
    int descent_iterations = -1; // -1: params.descent_iterations; 0 keeps the start
};

/// Builds the feature-space graph from the (denoised) features, fits the
/// initial embedding to it by descent from the PCA projection, and returns
/// the embedding-space graph alongside.
InitEmbedding init_embedding(const Matrix& denoised, const Hyperparams& params,
                             const InitOptions& options = {});

}  // namespace dge
