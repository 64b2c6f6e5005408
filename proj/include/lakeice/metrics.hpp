#pragma once

#include <optional>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

/// Square confusion matrix: count(actual, predicted).
struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::size_t> counts;  // row = actual, column = predicted

    explicit ConfusionMatrix(std::size_t n = 2) : n_classes(n), counts(n * n, 0) {}
    std::size_t& at(std::size_t actual, std::size_t predicted) {
        return counts[actual * n_classes + predicted];
    }
    std::size_t at(std::size_t actual, std::size_t predicted) const {
        return counts[actual * n_classes + predicted];
    }
    std::size_t total() const;
};

struct ClassMetrics {
    std::optional<double> recall;     // TP / (TP + FN)
    std::optional<double> precision;  // TP / (TP + FP)
    std::optional<double> iou;        // TP / (TP + FP + FN)
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    double overall_accuracy = 0.0;        // sum of TP over all predictions
    std::optional<double> mean_iou;       // mean over classes with defined IoU
    bool has_undefined_classes = false;   // some IoU ratios had zero denominators
};

/// Undefined ratios (zero denominators) are reported missing and excluded
/// from the mean IoU with a flag.
MetricsReport evaluate_metrics(const ConfusionMatrix& confusion);

}  // namespace lakeice
