/* Dynamic graph embedding engine - public C API.
 *
 * All objects are opaque handles created and destroyed by this library.
 * Every fallible call returns a dge_status; on failure a human-readable
 * message is available from dge_last_error() until the next call on the
 * same thread. Matrices are dense row-major doubles (one frame per row).
 */

#ifndef DGE_H
#define DGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DGE_API __declspec(dllexport)
#else
#define DGE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dge_status {
    DGE_OK = 0,
    DGE_ERROR_INVALID_ARGUMENT = 1,
    DGE_ERROR_IO = 2,
    DGE_ERROR_NUMERIC = 3,
    DGE_ERROR_INTERNAL = 4
} dge_status;

typedef struct dge_matrix dge_matrix;             /* dense row-major double matrix */
typedef struct dge_params dge_params;             /* hyperparameter record */
typedef struct dge_index_list dge_index_list;     /* boundaries or labels */
typedef struct dge_segmentation dge_segmentation; /* result of a segmentation run */

DGE_API const char* dge_version(void);

/* Message describing the last failure on the calling thread ("" if none). */
DGE_API const char* dge_last_error(void);

/* Worker threads used by row-parallel kernels; 0 means all cores. Results
 * do not depend on this setting. */
DGE_API void dge_set_thread_count(int threads);

/* ---- matrices ---------------------------------------------------------- */

/* data may be NULL to create a zero matrix. */
DGE_API dge_status dge_matrix_create(int64_t rows, int64_t cols, const double* data,
                                     dge_matrix** out);
/* Auto-detects the binary container by its magic, otherwise parses CSV. */
DGE_API dge_status dge_matrix_load(const char* path, dge_matrix** out);
DGE_API dge_status dge_matrix_save_csv(const dge_matrix* matrix, const char* path);
DGE_API dge_status dge_matrix_save_binary(const dge_matrix* matrix, const char* path);
DGE_API int64_t dge_matrix_rows(const dge_matrix* matrix);
DGE_API int64_t dge_matrix_cols(const dge_matrix* matrix);
/* Row-major storage owned by the handle; valid until the handle is freed. */
DGE_API const double* dge_matrix_data(const dge_matrix* matrix);
DGE_API void dge_matrix_free(dge_matrix* matrix);

/* ---- hyperparameters --------------------------------------------------- */

/* Created with the reference defaults. */
DGE_API dge_status dge_params_create(dge_params** out);
/* Names: M, L, h, lhat, ltilde, d, K, alpha, p, eta, mu, nc, gd_iters,
 * window, z, min_sep, seed. Integer fields round-trip through double. */
DGE_API dge_status dge_params_set(dge_params* params, const char* name, double value);
DGE_API dge_status dge_params_get(const dge_params* params, const char* name, double* out);
/* Checks every constraint against a sequence shape; the violated constraint
 * is named by dge_last_error(). */
DGE_API dge_status dge_params_validate(const dge_params* params, int64_t n_frames,
                                       int64_t n_features);
DGE_API void dge_params_free(dge_params* params);

/* ---- index lists (boundaries, labels) ---------------------------------- */

DGE_API dge_status dge_index_list_create(const int64_t* values, int64_t count,
                                         dge_index_list** out);
/* Boundary files are sorted and deduplicated on load; label files keep
 * their order. Both hold one integer per line. */
DGE_API dge_status dge_boundaries_load(const char* path, dge_index_list** out);
DGE_API dge_status dge_labels_load(const char* path, dge_index_list** out);
DGE_API dge_status dge_index_list_save(const dge_index_list* list, const char* path);
DGE_API int64_t dge_index_list_count(const dge_index_list* list);
DGE_API const int64_t* dge_index_list_data(const dge_index_list* list);
DGE_API void dge_index_list_free(dge_index_list* list);

/* ---- segmentation ------------------------------------------------------ */

/* Normalizes, denoises, learns the graph embedding and detects event
 * boundaries. Set skip_preprocess to feed features that are already clean
 * (the embedding then starts from the raw rows and requires d == n). */
DGE_API dge_status dge_segment(const dge_matrix* features, const dge_params* params,
                               int skip_preprocess, dge_segmentation** out);
DGE_API dge_status dge_segmentation_boundaries(const dge_segmentation* seg, dge_index_list** out);
DGE_API dge_status dge_segmentation_embedding(const dge_segmentation* seg, dge_matrix** out);
DGE_API dge_status dge_segmentation_graph(const dge_segmentation* seg, dge_matrix** out);
/* Community labels from the last core iteration (1-based, one per frame);
 * empty when the run had zero core iterations. */
DGE_API dge_status dge_segmentation_labels(const dge_segmentation* seg, dge_index_list** out);
/* JSON diagnostics; gt may be NULL. Timings are only written on request so
 * that files from seeded runs are byte identical. */
DGE_API dge_status dge_segmentation_write_diagnostics(const dge_segmentation* seg,
                                                      const char* path, const dge_index_list* gt,
                                                      int include_timings);
/* 8-bit PGM heatmap of the learnt graph. */
DGE_API dge_status dge_segmentation_write_heatmap(const dge_segmentation* seg, const char* path,
                                                  double threshold_fraction);
DGE_API void dge_segmentation_free(dge_segmentation* seg);

/* Heatmap of an arbitrary nonnegative matrix. */
DGE_API dge_status dge_matrix_write_heatmap(const dge_matrix* matrix, const char* path,
                                            double threshold_fraction);

/* ---- synthetic data ---------------------------------------------------- */

/* Markov-switching Gaussian sequence over the four reference states.
 * Outputs may be NULL when not needed; labels are 1-based states. */
DGE_API dge_status dge_synth(int64_t n_frames, double sigma, double hazard, uint64_t seed,
                             dge_matrix** out_features, dge_index_list** out_boundaries,
                             dge_index_list** out_labels);

/* ---- evaluation -------------------------------------------------------- */

/* Tolerance-matched precision/recall/F between two boundary lists. Output
 * pointers may be NULL. */
DGE_API dge_status dge_eval_prf(const dge_index_list* pred, const dge_index_list* gt,
                                int64_t tolerance, double* precision, double* recall,
                                double* f_score, int64_t* matched);
/* Clustering accuracy (optimal one-to-one assignment) and normalized mutual
 * information between two labelings of equal length. */
DGE_API dge_status dge_eval_clusters(const dge_index_list* pred, const dge_index_list* gt,
                                     double* acc, double* nmi);

#ifdef __cplusplus
}
#endif

#endif /* DGE_H */
