#pragma once

#include "dge/dge.hpp"
#include "dge/types.hpp"

#include <nlohmann/json.hpp>

#include <string>

// File formats and diagnostic artifacts. Feature matrices travel as
// headerless CSV (one frame per row) or as the binary "DGEF" container:
// magic "DGEF", u32 version (= 1), u64 frame count, u64 feature count, then
// frame-major IEEE-754 float32 values, all little-endian. Boundary and label
// files hold one integer per line; boundary indices are 0-based.

namespace dge {

enum class FeatureFormat { kAuto, kCsv, kBinary };

Matrix load_features(const std::string& path, FeatureFormat format = FeatureFormat::kAuto);
void save_features_csv(const Matrix& features, const std::string& path);
void save_features_binary(const Matrix& features, const std::string& path);

/// Reads a boundary file: sorted, deduplicated; warns when the input was
/// out of order or contained duplicates.
BoundaryList load_boundaries(const std::string& path);
void save_boundaries(const BoundaryList& boundaries, const std::string& path);

/// Reads a label file (one integer per line, arbitrary values, order kept).
std::vector<Index> load_labels(const std::string& path);
void save_labels(const std::vector<Index>& labels, const std::string& path);

/// Writes the graph as an 8-bit binary PGM. Entries below
/// threshold_fraction * max(off-diagonal) are blanked; the rest scale
/// linearly so the largest entry maps to 255.
void dump_graph_heatmap(const Matrix& graph, const std::string& path, double threshold_fraction);

nlohmann::json hyperparams_to_json(const Hyperparams& params);
Hyperparams hyperparams_from_json(const nlohmann::json& j);

/// Everything a run reports: the hyperparameters used, the loss trajectory
/// of every embedding update, detector output, per-iteration segmentation
/// metrics when ground truth is supplied, and per-stage wall-clock times.
struct RunDiagnostics {
    Hyperparams params;
    Index n_frames = 0;
    Index n_features = 0;
    struct Iteration {
        int iteration = 0;
        double objective_initial = 0.0;
        double objective_final = 0.0;
        int steps = 0;
        bool has_metrics = false;
        double f_score = 0.0;
        double precision = 0.0;
        double recall = 0.0;
    };
    std::vector<Iteration> iterations;
    BoundaryList boundaries;
    std::vector<std::pair<std::string, double>> stage_seconds;
};

/// Per-iteration metrics are computed against `gt` (when non-null) by
/// running the detector on each stored embedding, at tolerance 5.
RunDiagnostics make_diagnostics(const SegmentOutcome& outcome, const Hyperparams& params,
                                Index n_features, const BoundaryList* gt);

/// Timings are volatile between runs, so they are only serialized on
/// request; everything else is reproducible byte for byte under a fixed
/// seed.
nlohmann::json diagnostics_to_json(const RunDiagnostics& diagnostics, bool include_timings);
void write_diagnostics(const RunDiagnostics& diagnostics, const std::string& path,
                       bool include_timings = false);

}  // namespace dge
