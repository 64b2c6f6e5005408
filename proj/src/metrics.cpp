#include "lakeice/metrics.hpp"

#include <numeric>

namespace lakeice {

std::size_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t(0));
}

MetricsReport evaluate_metrics(const ConfusionMatrix& confusion) {
    const std::size_t n = confusion.n_classes;
    if (confusion.total() == 0) throw validation_error("metrics: empty confusion matrix");

    MetricsReport report;
    std::size_t diag = 0;
    double iou_sum = 0.0;
    std::size_t iou_count = 0;
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t tp = confusion.at(c, c);
        diag += tp;
        std::size_t fn = 0, fp = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == c) continue;
            fn += confusion.at(c, k);
            fp += confusion.at(k, c);
        }
        ClassMetrics m;
        if (tp + fn > 0) m.recall = double(tp) / double(tp + fn);
        if (tp + fp > 0) m.precision = double(tp) / double(tp + fp);
        if (tp + fp + fn > 0) {
            m.iou = double(tp) / double(tp + fp + fn);
            iou_sum += *m.iou;
            ++iou_count;
        } else {
            report.has_undefined_classes = true;
        }
        if (!m.recall || !m.precision) report.has_undefined_classes = true;
        report.per_class.push_back(m);
    }
    report.overall_accuracy = double(diag) / double(confusion.total());
    if (iou_count > 0) report.mean_iou = iou_sum / double(iou_count);
    return report;
}

}  // namespace lakeice
