#pragma once

#include "dge/types.hpp"

#include <utility>

// Segmentation and clustering metrics: tolerance-matched precision, recall
// and F-score for boundary lists; accuracy under the optimal cluster-to-class
// assignment and normalized mutual information for labelings.

namespace dge {

/// Matched (pred, gt) index pairs under |pred - gt| <= tolerance, maximum
/// cardinality. Both lists must be sorted and strictly increasing.
std::vector<std::pair<Index, Index>> match_boundaries(const BoundaryList& pred,
                                                      const BoundaryList& gt, Index tolerance);

struct PrfReport {
    Index tolerance = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    Index matched = 0;
};

/// Precision = matched/|pred|, recall = matched/|gt|, F = 2PR/(P+R).
/// Two empty lists count as perfect; an empty list against a nonempty one
/// scores zero.
PrfReport prf_at_tolerance(const BoundaryList& pred, const BoundaryList& gt, Index tolerance);

/// Fraction of frames correctly labeled under the best one-to-one assignment
/// of predicted clusters to ground-truth classes.
double clustering_accuracy(const ClusterLabels& labels, const ClusterLabels& gt_labels);

/// Mutual information normalized by the geometric mean of the two label
/// entropies. Two single-cluster labelings score 1; exactly one scores 0.
double nmi(const ClusterLabels& labels, const ClusterLabels& gt_labels);

}  // namespace dge
