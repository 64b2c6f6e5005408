#pragma once

#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

struct BandImportance {
    std::string band;
    std::size_t split_count = 0;
    double f_score = 0.0;  // split count normalized over all splits
};

struct BoostingOptions {
    std::size_t n_rounds = 50;
    int tree_depth = 2;
    double learning_rate = 0.3;
    double lambda = 1.0;  // L2 on leaf weights
};

/// Gradient boosting of depth-limited trees on logistic loss; the F-score of
/// a band is the number of times it is chosen as a split, normalized. Bands
/// are returned ranked, constant columns last with importance 0. Exact greedy
/// splits with first-index tie-breaks keep the result deterministic.
std::vector<BandImportance> band_importance(const std::vector<std::vector<double>>& rows,
                                            const std::vector<int>& labels01,
                                            const std::vector<std::string>& band_names,
                                            const BoostingOptions& opts = {});

/// Gain of the single best stump split on one feature (second-order logistic
/// gain from a zero model). Exposed for the exhaustive-stump oracle in tests.
double best_stump_gain(const std::vector<double>& feature, const std::vector<int>& labels01,
                       double lambda = 1.0);

}  // namespace lakeice
