#include "dge.h"

#include "dge/boundary.hpp"
#include "dge/dge.hpp"
#include "dge/eval.hpp"
#include "dge/io.hpp"
#include "dge/synth.hpp"
#include "dge/types.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

dge_status set_error(dge_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
dge_status guarded(Fn&& body) {
    clear_error();
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        return set_error(DGE_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return set_error(DGE_ERROR_IO, e.what());
    } catch (const std::exception& e) {
        return set_error(DGE_ERROR_INTERNAL, e.what());
    } catch (...) {
        return set_error(DGE_ERROR_INTERNAL, "unknown error");
    }
}

dge_status require(bool condition, const char* message) {
    if (condition) return DGE_OK;
    return set_error(DGE_ERROR_INVALID_ARGUMENT, message);
}

}  // namespace

// The C surface promises row-major data(), so handles store a row-major
// matrix; Eigen converts transparently when crossing into the core.
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct dge_matrix {
    RowMajorMatrix values;
};

struct dge_params {
    dge::Hyperparams values;
};

struct dge_index_list {
    std::vector<int64_t> values;
};

struct dge_segmentation {
    dge::SegmentOutcome outcome;
    dge::Hyperparams params;
    dge::Index n_features = 0;
};

extern "C" {

const char* dge_version(void) { return "1.0.0"; }

const char* dge_last_error(void) { return g_last_error.c_str(); }

void dge_set_thread_count(int threads) { dge::set_thread_count(threads); }

dge_status dge_matrix_create(int64_t rows, int64_t cols, const double* data, dge_matrix** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(out != nullptr, "null output pointer"); s != DGE_OK) return s;
        if (dge_status s = require(rows > 0 && cols > 0, "matrix dimensions out of range"); s != DGE_OK)
            return s;
        auto handle = new dge_matrix;
        handle->values.resize(rows, cols);
        if (data != nullptr) {
            std::memcpy(handle->values.data(), data,
                        sizeof(double) * static_cast<size_t>(rows) * static_cast<size_t>(cols));
        } else {
            handle->values.setZero();
        }
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_matrix_load(const char* path, dge_matrix** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(path != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_matrix;
        handle->values = dge::load_features(path);
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_matrix_save_csv(const dge_matrix* matrix, const char* path) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(matrix != nullptr && path != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::save_features_csv(matrix->values, path);
        return DGE_OK;
    });
}

dge_status dge_matrix_save_binary(const dge_matrix* matrix, const char* path) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(matrix != nullptr && path != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::save_features_binary(matrix->values, path);
        return DGE_OK;
    });
}

int64_t dge_matrix_rows(const dge_matrix* matrix) { return matrix == nullptr ? 0 : matrix->values.rows(); }

int64_t dge_matrix_cols(const dge_matrix* matrix) { return matrix == nullptr ? 0 : matrix->values.cols(); }

const double* dge_matrix_data(const dge_matrix* matrix) {
    return matrix == nullptr ? nullptr : matrix->values.data();
}

void dge_matrix_free(dge_matrix* matrix) { delete matrix; }

dge_status dge_params_create(dge_params** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(out != nullptr, "null output pointer"); s != DGE_OK) return s;
        *out = new dge_params;
        return DGE_OK;
    });
}

namespace {

dge_status params_access(dge::Hyperparams& p, const char* name, double* get, const double* set) {
    const auto field = [&](auto& member) -> dge_status {
        using T = std::decay_t<decltype(member)>;
        if (get != nullptr) *get = static_cast<double>(member);
        if (set != nullptr) {
            if constexpr (std::is_integral_v<T>) {
                if (*set != std::floor(*set))
                    return set_error(DGE_ERROR_INVALID_ARGUMENT,
                                     std::string(name) + " requires an integer value");
                member = static_cast<T>(*set);
            } else {
                member = *set;
            }
        }
        return DGE_OK;
    };
    const std::string key = name;
    if (key == "M") return field(p.patch_halfwidth);
    if (key == "L") return field(p.search_halfwidth);
    if (key == "h") return field(p.nl_decay);
    if (key == "lhat") return field(p.feature_kernel_decay);
    if (key == "ltilde") return field(p.embed_kernel_decay);
    if (key == "d") return field(p.embed_dim);
    if (key == "K") return field(p.dge_iterations);
    if (key == "alpha") return field(p.loss_mix);
    if (key == "p") return field(p.average_kernel_size);
    if (key == "eta") return field(p.temporal_shrink);
    if (key == "mu") return field(p.semantic_shrink);
    if (key == "nc") return field(p.cluster_count);
    if (key == "gd_iters") return field(p.descent_iterations);
    if (key == "window") return field(p.detector_window);
    if (key == "z") return field(p.detector_z);
    if (key == "min_sep") return field(p.detector_min_separation);
    if (key == "seed") return field(p.seed);
    return set_error(DGE_ERROR_INVALID_ARGUMENT, "unknown hyperparameter '" + key + "'");
}

}  // namespace

dge_status dge_params_set(dge_params* params, const char* name, double value) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(params != nullptr && name != nullptr, "null argument"); s != DGE_OK)
            return s;
        return params_access(params->values, name, nullptr, &value);
    });
}

dge_status dge_params_get(const dge_params* params, const char* name, double* out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(params != nullptr && name != nullptr && out != nullptr, "null argument");
            s != DGE_OK)
            return s;
        return params_access(const_cast<dge_params*>(params)->values, name, out, nullptr);
    });
}

dge_status dge_params_validate(const dge_params* params, int64_t n_frames, int64_t n_features) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(params != nullptr, "null argument"); s != DGE_OK) return s;
        dge::validate_params(params->values, n_frames, n_features);
        return DGE_OK;
    });
}

void dge_params_free(dge_params* params) { delete params; }

dge_status dge_index_list_create(const int64_t* values, int64_t count, dge_index_list** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(out != nullptr && (values != nullptr || count == 0), "null argument");
            s != DGE_OK)
            return s;
        if (dge_status s = require(count >= 0, "count out of range"); s != DGE_OK) return s;
        auto handle = new dge_index_list;
        handle->values.assign(values, values + count);
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_boundaries_load(const char* path, dge_index_list** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(path != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_index_list;
        handle->values = dge::load_boundaries(path);
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_labels_load(const char* path, dge_index_list** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(path != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_index_list;
        handle->values = dge::load_labels(path);
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_index_list_save(const dge_index_list* list, const char* path) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(list != nullptr && path != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::save_labels(list->values, path);
        return DGE_OK;
    });
}

int64_t dge_index_list_count(const dge_index_list* list) {
    return list == nullptr ? 0 : static_cast<int64_t>(list->values.size());
}

const int64_t* dge_index_list_data(const dge_index_list* list) {
    return list == nullptr ? nullptr : list->values.data();
}

void dge_index_list_free(dge_index_list* list) { delete list; }

dge_status dge_segment(const dge_matrix* features, const dge_params* params, int skip_preprocess,
                       dge_segmentation** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(features != nullptr && params != nullptr && out != nullptr,
                                   "null argument");
            s != DGE_OK)
            return s;
        dge::RunOptions options;
        if (skip_preprocess != 0) {
            options.normalize = false;
            options.denoise = false;
            options.pca_init = false;
        }
        auto handle = new dge_segmentation;
        handle->params = params->values;
        handle->n_features = features->values.cols();
        handle->outcome = dge::segment_sequence(features->values, params->values, options);
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_segmentation_boundaries(const dge_segmentation* seg, dge_index_list** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(seg != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_index_list;
        handle->values = seg->outcome.boundaries;
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_segmentation_embedding(const dge_segmentation* seg, dge_matrix** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(seg != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_matrix;
        handle->values = seg->outcome.dge.embedding;
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_segmentation_graph(const dge_segmentation* seg, dge_matrix** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(seg != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_matrix;
        handle->values = seg->outcome.dge.graph;
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_segmentation_labels(const dge_segmentation* seg, dge_index_list** out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(seg != nullptr && out != nullptr, "null argument"); s != DGE_OK)
            return s;
        auto handle = new dge_index_list;
        const auto& history = seg->outcome.dge.history;
        const auto& labels = history.back().labels;
        handle->values.assign(labels.begin(), labels.end());
        *out = handle;
        return DGE_OK;
    });
}

dge_status dge_segmentation_write_diagnostics(const dge_segmentation* seg, const char* path,
                                              const dge_index_list* gt, int include_timings) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(seg != nullptr && path != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::BoundaryList gt_list;
        const dge::BoundaryList* gt_ptr = nullptr;
        if (gt != nullptr) {
            gt_list.assign(gt->values.begin(), gt->values.end());
            gt_ptr = &gt_list;
        }
        const dge::RunDiagnostics diag =
            dge::make_diagnostics(seg->outcome, seg->params, seg->n_features, gt_ptr);
        dge::write_diagnostics(diag, path, include_timings != 0);
        return DGE_OK;
    });
}

dge_status dge_segmentation_write_heatmap(const dge_segmentation* seg, const char* path,
                                          double threshold_fraction) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(seg != nullptr && path != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::dump_graph_heatmap(seg->outcome.dge.graph, path, threshold_fraction);
        return DGE_OK;
    });
}

void dge_segmentation_free(dge_segmentation* seg) { delete seg; }

dge_status dge_matrix_write_heatmap(const dge_matrix* matrix, const char* path,
                                    double threshold_fraction) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(matrix != nullptr && path != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::dump_graph_heatmap(matrix->values, path, threshold_fraction);
        return DGE_OK;
    });
}

dge_status dge_synth(int64_t n_frames, double sigma, double hazard, uint64_t seed,
                     dge_matrix** out_features, dge_index_list** out_boundaries,
                     dge_index_list** out_labels) {
    return guarded([&]() -> dge_status {
        dge::SynthConfig config;
        config.n_frames = n_frames;
        config.sigma = sigma;
        config.hazard = hazard;
        config.seed = seed;
        const dge::SynthResult result = dge::gen_markov_gaussian(config);
        if (out_features != nullptr) {
            auto handle = new dge_matrix;
            handle->values = result.features;
            *out_features = handle;
        }
        if (out_boundaries != nullptr) {
            auto handle = new dge_index_list;
            handle->values = result.boundaries;
            *out_boundaries = handle;
        }
        if (out_labels != nullptr) {
            auto handle = new dge_index_list;
            handle->values.assign(result.labels.begin(), result.labels.end());
            *out_labels = handle;
        }
        return DGE_OK;
    });
}

dge_status dge_eval_prf(const dge_index_list* pred, const dge_index_list* gt, int64_t tolerance,
                        double* precision, double* recall, double* f_score, int64_t* matched) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(pred != nullptr && gt != nullptr, "null argument"); s != DGE_OK)
            return s;
        const dge::PrfReport report =
            dge::prf_at_tolerance(pred->values, gt->values, tolerance);
        if (precision != nullptr) *precision = report.precision;
        if (recall != nullptr) *recall = report.recall;
        if (f_score != nullptr) *f_score = report.f_score;
        if (matched != nullptr) *matched = report.matched;
        return DGE_OK;
    });
}

dge_status dge_eval_clusters(const dge_index_list* pred, const dge_index_list* gt, double* acc,
                             double* nmi_out) {
    return guarded([&]() -> dge_status {
        if (dge_status s = require(pred != nullptr && gt != nullptr, "null argument"); s != DGE_OK)
            return s;
        dge::ClusterLabels a(pred->values.begin(), pred->values.end());
        dge::ClusterLabels b(gt->values.begin(), gt->values.end());
        if (acc != nullptr) *acc = dge::clustering_accuracy(a, b);
        if (nmi_out != nullptr) *nmi_out = dge::nmi(a, b);
        return DGE_OK;
    });
}

}  // extern "C"
