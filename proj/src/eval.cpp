#include "dge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace dge {

namespace {

void require_sorted(const BoundaryList& list, const char* name) {
    for (size_t i = 1; i < list.size(); ++i)
        if (list[i] <= list[i - 1])
            throw std::invalid_argument(std::string(name) + " boundaries must be strictly increasing");
}

// Compact labels to 0..m-1 in order of first appearance.
std::vector<int> compact(const ClusterLabels& labels, int& count) {
    std::map<int, int> ids;
    std::vector<int> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i)
        out[i] = ids.try_emplace(labels[i], static_cast<int>(ids.size())).first->second;
    count = static_cast<int>(ids.size());
    return out;
}

// Maximum-weight one-to-one assignment on a square cost matrix (Hungarian
// algorithm with potentials, O(m^3)). Returns the total assigned weight.
double max_assignment_weight(const Matrix& weight) {
    const Index m = weight.rows();
    const double scale = weight.maxCoeff();
    // Minimize cost = scale - weight.
    std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
    std::vector<Index> way(m + 1, 0), match(m + 1, 0);
    for (Index i = 1; i <= m; ++i) {
        match[0] = i;
        Index j0 = 0;
        std::vector<double> minv(m + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const Index i0 = match[j0];
            double delta = std::numeric_limits<double>::infinity();
            Index j1 = 0;
            for (Index j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = (scale - weight(i0 - 1, j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const Index j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (Index j = 1; j <= m; ++j)
        if (match[j] != 0) total += weight(match[j] - 1, j - 1);
    return total;
}

double entropy(const std::vector<Index>& counts, double n) {
    double h = 0.0;
    for (const Index c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

std::vector<std::pair<Index, Index>> match_boundaries(const BoundaryList& pred,
                                                      const BoundaryList& gt, Index tolerance) {
    if (tolerance < 0) throw std::invalid_argument("tolerance out of range");
    require_sorted(pred, "predicted");
    require_sorted(gt, "ground-truth");

    // Greedy in sorted order; optimal for interval constraints.
    std::vector<std::pair<Index, Index>> matches;
    size_t i = 0, j = 0;
    while (i < pred.size() && j < gt.size()) {
        const Index diff = pred[i] - gt[j];
        if (std::abs(diff) <= tolerance) {
            matches.emplace_back(pred[i], gt[j]);
            ++i;
            ++j;
        } else if (diff < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return matches;
}

PrfReport prf_at_tolerance(const BoundaryList& pred, const BoundaryList& gt, Index tolerance) {
    PrfReport report;
    report.tolerance = tolerance;
    report.matched = static_cast<Index>(match_boundaries(pred, gt, tolerance).size());

    if (pred.empty() && gt.empty()) {
        report.precision = report.recall = report.f_score = 1.0;
        return report;
    }
    report.precision =
        pred.empty() ? 0.0 : static_cast<double>(report.matched) / static_cast<double>(pred.size());
    report.recall =
        gt.empty() ? 0.0 : static_cast<double>(report.matched) / static_cast<double>(gt.size());
    const double pr = report.precision + report.recall;
    report.f_score = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
    return report;
}

double clustering_accuracy(const ClusterLabels& labels, const ClusterLabels& gt_labels) {
    if (labels.size() != gt_labels.size()) throw std::invalid_argument("label length mismatch");
    if (labels.empty()) throw std::invalid_argument("empty labelings");

    int n_pred = 0, n_gt = 0;
    const std::vector<int> a = compact(labels, n_pred);
    const std::vector<int> b = compact(gt_labels, n_gt);
    const int m = std::max(n_pred, n_gt);

    Matrix confusion = Matrix::Zero(m, m);
    for (size_t i = 0; i < a.size(); ++i) confusion(a[i], b[i]) += 1.0;
    return max_assignment_weight(confusion) / static_cast<double>(labels.size());
}

double nmi(const ClusterLabels& labels, const ClusterLabels& gt_labels) {
    if (labels.size() != gt_labels.size()) throw std::invalid_argument("label length mismatch");
    if (labels.empty()) throw std::invalid_argument("empty labelings");

    int n_pred = 0, n_gt = 0;
    const std::vector<int> a = compact(labels, n_pred);
    const std::vector<int> b = compact(gt_labels, n_gt);
    const double n = static_cast<double>(labels.size());

    std::vector<Index> count_a(static_cast<size_t>(n_pred), 0);
    std::vector<Index> count_b(static_cast<size_t>(n_gt), 0);
    std::map<std::pair<int, int>, Index> joint;
    for (size_t i = 0; i < a.size(); ++i) {
        ++count_a[static_cast<size_t>(a[i])];
        ++count_b[static_cast<size_t>(b[i])];
        ++joint[{a[i], b[i]}];
    }

    const double h_a = entropy(count_a, n);
    const double h_b = entropy(count_b, n);
    if (h_a == 0.0 && h_b == 0.0) return 1.0;
    if (h_a == 0.0 || h_b == 0.0) return 0.0;

    double mi = 0.0;
    for (const auto& [cell, count] : joint) {
        const double pij = static_cast<double>(count) / n;
        const double pi = static_cast<double>(count_a[static_cast<size_t>(cell.first)]) / n;
        const double pj = static_cast<double>(count_b[static_cast<size_t>(cell.second)]) / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    return std::clamp(mi / std::sqrt(h_a * h_b), 0.0, 1.0);
}

}  // namespace dge
