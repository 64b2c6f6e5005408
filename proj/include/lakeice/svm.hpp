#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

enum class SvmKernel { linear, rbf };

/// Per-feature standardization learned on the training rows.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::vector<double> apply(const std::vector<double>& row) const;
    static Standardizer fit(const std::vector<std::vector<double>>& rows);
};

/// Two-class sample labels: frozen maps to -1, non-frozen to +1 so that the
/// score scale runs 0 (frozen) to 100 (non-frozen).
enum class SvmLabel : std::int8_t { frozen = -1, non_frozen = +1 };

struct SvmTrainOptions {
    SvmKernel kernel = SvmKernel::rbf;
    double box_constraint = 1.0;    // C
    double kernel_scale = 1.0;      // rbf: exp(-|u-v|^2 / scale^2)
    double kkt_tolerance = 1e-3;
    std::size_t max_iterations = 0; // 0: 10000 * n
};

struct SvmModel {
    SvmKernel kernel = SvmKernel::rbf;
    double kernel_scale = 1.0;
    double box_constraint = 1.0;
    Standardizer standardizer;
    std::vector<std::vector<double>> support_vectors;  // standardized rows
    std::vector<double> dual_coeffs;                   // alpha_i * y_i
    double bias = 0.0;
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
    std::string training_note;  // lakes / date range, free-form

    /// Signed decision value on a raw (unstandardized) feature row.
    double decision_value(const std::vector<double>& raw_row) const;
    /// Dual objective value of the solved problem, for oracle comparison.
    double dual_objective = 0.0;

    std::string to_json() const;  // includes a content hash
    static SvmModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static SvmModel load(const std::string& path);
};

/// Soft-margin SVM trained with sequential minimal optimization using
/// maximal-violating-pair working set selection (first index wins ties), so
/// training is deterministic. Rows are standardized internally.
SvmModel train_svm(const std::vector<std::vector<double>>& rows,
                   const std::vector<SvmLabel>& labels, const SvmTrainOptions& opts = {});

/// Monotone map of the decision value to [0, 100] with 50 exactly at the
/// boundary: score = 100 * sigmoid(decision).
double decision_to_score(double decision_value);
std::vector<double> predict_scores(const SvmModel& model,
                                   const std::vector<std::vector<double>>& rows);

inline SvmLabel score_to_label(double score) {
    return score > 50.0 ? SvmLabel::non_frozen : SvmLabel::frozen;
}

}  // namespace lakeice
