#pragma once

#include "dge/types.hpp"

#include <utility>

// Contextual boundary detector: each frame is scored by the cosine distance
// between the mean of the preceding W frames and the mean of the following W
// frames; scores above a relative threshold that survive non-maximum
// suppression become event boundaries.

namespace dge {

/// Per-frame boundary prediction values in [0, 2]. Frames closer than
/// `window` to either end score 0 and are excluded from the threshold
/// statistics.
struct BoundaryScores {
    Vector values;
    int window = 0;
};

/// Mean of the `window` rows before frame k and mean of the `window` rows
/// after it. k must admit full windows on both sides.
std::pair<Vector, Vector> context_predict(const Matrix& embedding, Index frame, int window);

/// Cosine distance between the forward and backward context means for every
/// admissible frame. Requires N > 2 * window.
BoundaryScores boundary_scores(const Matrix& embedding, int window);

/// Frames whose score is a local maximum at least mean + z * std of the
/// admissible scores, thinned so surviving boundaries are at least min_sep
/// frames apart (higher score wins, earlier frame on ties). A zero score
/// spread yields no boundaries.
BoundaryList detect_boundaries(const BoundaryScores& scores, double z, int min_sep);

}  // namespace dge
