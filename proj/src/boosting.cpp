#include "lakeice/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lakeice {

namespace {

struct SplitScan {
    double gain = 0.0;
    double threshold = 0.0;
    bool found = false;
};

double leaf_score(double g, double h, double lambda) { return g * g / (h + lambda); }

// Best split of `idx` on one feature by second-order gain.
SplitScan scan_feature(const std::vector<std::vector<double>>& rows, std::size_t feature,
                       const std::vector<std::size_t>& idx, const std::vector<double>& grad,
                       const std::vector<double>& hess, double lambda) {
    std::vector<std::size_t> order = idx;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rows[a][feature] < rows[b][feature];
    });

    double g_total = 0.0, h_total = 0.0;
    for (std::size_t i : order) {
        g_total += grad[i];
        h_total += hess[i];
    }
    const double base = leaf_score(g_total, h_total, lambda);

    SplitScan best;
    double g_left = 0.0, h_left = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        g_left += grad[order[k]];
        h_left += hess[order[k]];
        const double v = rows[order[k]][feature];
        const double v_next = rows[order[k + 1]][feature];
        if (v == v_next) continue;
        const double gain = 0.5 * (leaf_score(g_left, h_left, lambda) +
                                   leaf_score(g_total - g_left, h_total - h_left, lambda) - base);
        if (!best.found || gain > best.gain) {
            best.found = true;
            best.gain = gain;
            best.threshold = 0.5 * (v + v_next);
        }
    }
    return best;
}

struct TreeNode {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    double value = 0.0;
    int left = -1, right = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(const std::vector<double>& row) const {
        int at = 0;
        while (!nodes[at].leaf) {
            at = row[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
        }
        return nodes[at].value;
    }
};

void grow(Tree& tree, int node, const std::vector<std::vector<double>>& rows,
          const std::vector<std::size_t>& idx, const std::vector<double>& grad,
          const std::vector<double>& hess, int depth_left, const BoostingOptions& opts,
          std::vector<std::size_t>& split_counts) {
    double g = 0.0, h = 0.0;
    for (std::size_t i : idx) {
        g += grad[i];
        h += hess[i];
    }

    SplitScan best;
    std::size_t best_feature = 0;
    if (depth_left > 0 && idx.size() >= 2) {
        for (std::size_t f = 0; f < rows.front().size(); ++f) {
            const SplitScan s = scan_feature(rows, f, idx, grad, hess, opts.lambda);
            if (s.found && (!best.found || s.gain > best.gain)) {
                best = s;
                best_feature = f;
            }
        }
    }
    if (!best.found || best.gain <= 0.0) {
        tree.nodes[node].leaf = true;
        tree.nodes[node].value = -opts.learning_rate * g / (h + opts.lambda);
        return;
    }

    ++split_counts[best_feature];
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
        (rows[i][best_feature] <= best.threshold ? left : right).push_back(i);
    }
    tree.nodes[node].leaf = false;
    tree.nodes[node].feature = best_feature;
    tree.nodes[node].threshold = best.threshold;
    tree.nodes[node].left = int(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[node].right = int(tree.nodes.size());
    tree.nodes.push_back({});
    grow(tree, tree.nodes[node].left, rows, left, grad, hess, depth_left - 1, opts, split_counts);
    grow(tree, tree.nodes[node].right, rows, right, grad, hess, depth_left - 1, opts, split_counts);
}

}  // namespace

double best_stump_gain(const std::vector<double>& feature, const std::vector<int>& labels01,
                       double lambda) {
    std::vector<std::vector<double>> rows(feature.size(), std::vector<double>(1));
    for (std::size_t i = 0; i < feature.size(); ++i) rows[i][0] = feature[i];
    std::vector<double> grad(feature.size()), hess(feature.size(), 0.25);
    for (std::size_t i = 0; i < feature.size(); ++i) grad[i] = 0.5 - double(labels01[i]);
    std::vector<std::size_t> idx(feature.size());
    std::iota(idx.begin(), idx.end(), 0);
    const SplitScan s = scan_feature(rows, 0, idx, grad, hess, lambda);
    return s.found ? s.gain : 0.0;
}

std::vector<BandImportance> band_importance(const std::vector<std::vector<double>>& rows,
                                            const std::vector<int>& labels01,
                                            const std::vector<std::string>& band_names,
                                            const BoostingOptions& opts) {
    if (rows.empty() || rows.size() != labels01.size())
        throw validation_error("band_importance: rows/labels mismatch or empty");
    if (band_names.size() < 2 || rows.front().size() != band_names.size())
        throw validation_error("band_importance: need >= 2 bands matching the row width");

    const std::size_t n = rows.size();
    std::vector<double> margin(n, 0.0);
    std::vector<double> grad(n), hess(n);
    std::vector<std::size_t> split_counts(band_names.size(), 0);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);

    for (std::size_t round = 0; round < opts.n_rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = 1.0 / (1.0 + std::exp(-margin[i]));
            grad[i] = p - double(labels01[i]);
            hess[i] = std::max(p * (1.0 - p), 1e-12);
        }
        Tree tree;
        tree.nodes.push_back({});
        grow(tree, 0, rows, all, grad, hess, opts.tree_depth, opts, split_counts);
        bool any_split = !tree.nodes.front().leaf;
        for (std::size_t i = 0; i < n; ++i) margin[i] += tree.predict(rows[i]);
        if (!any_split) break;  // converged, later rounds cannot split either
    }

    const std::size_t total =
        std::accumulate(split_counts.begin(), split_counts.end(), std::size_t(0));
    std::vector<BandImportance> result;
    for (std::size_t f = 0; f < band_names.size(); ++f) {
        result.push_back(BandImportance{band_names[f], split_counts[f],
                                        total ? double(split_counts[f]) / double(total) : 0.0});
    }
    std::stable_sort(result.begin(), result.end(),
                     [](const BandImportance& a, const BandImportance& b) {
                         return a.split_count > b.split_count;
                     });
    return result;
}

}  // namespace lakeice
