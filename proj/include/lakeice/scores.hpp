#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

/// Per-pixel per-day SVM scores for one lake; 0 = frozen, 100 = non-frozen,
/// NaN = missing. Row d holds day start + d, column p a clean pixel.
struct DailyScoreCube {
    Date start;
    std::size_t n_pixels = 0;
    std::vector<double> scores;  // day-major, size n_days * n_pixels

    std::size_t n_days() const { return n_pixels ? scores.size() / n_pixels : 0; }
    double at(std::size_t day, std::size_t pixel) const {
        return scores[day * n_pixels + pixel];
    }
    double& at(std::size_t day, std::size_t pixel) { return scores[day * n_pixels + pixel]; }
};

struct ScoredAcquisition {
    Date date;
    std::vector<double> pixel_scores;  // NaN for unscored pixels
};

/// Averages same-day acquisition scores per pixel into one value per pixel
/// per day; days without any acquisition stay missing.
DailyScoreCube daily_aggregate(const std::vector<ScoredAcquisition>& acquisitions);

/// A pixel is non-frozen when its (averaged, possibly smoothed) score is
/// greater than 50, frozen at 50 or below.
inline bool score_is_frozen(double score) { return score <= 50.0; }

enum class MtaScheme { mean, median, gaussian };

/// Centered moving statistic along the time axis over available days only.
/// Window must be odd; window 1 is the identity. Gaussian weights use
/// sigma = window/4, truncated at the window and renormalized.
DailyScoreCube mta_smooth(const DailyScoreCube& cube, MtaScheme scheme, int window_days);

/// Normalized Gaussian window weights (for the impulse-response check).
std::vector<double> gaussian_window_weights(int window_days);

/// %FP of one day slice: 100 * frozen / scored pixels; NaN when nothing was
/// scored that day.
double frozen_fraction(const DailyScoreCube& cube, std::size_t day);

enum class DayLabel : char { no = 'N', yes = 'Y', nd = 'n' };

/// Y when %FP >= threshold (default 90; 75 for lakes with very few clean
/// pixels), nd when the day has no data.
DayLabel label_day(double pct_fp, double threshold = 90.0);

struct DailyLabel {
    Date date;
    std::optional<double> pct_fp;
    DayLabel label = DayLabel::nd;
};

struct DailyLabelSeries {
    std::string lake;
    std::string method;
    std::vector<DailyLabel> days;  // time-sorted
};

DailyLabelSeries label_series(const DailyScoreCube& cube, double threshold = 90.0);

struct IceDates {
    std::optional<Date> ice_on;
    std::optional<Date> ice_off;
    int ice_on_uncertainty_days = 0;   // nd gap adjacent to the chosen date
    int ice_off_uncertainty_days = 0;
    std::string status = "ok";
};

/// Ice-on: first Y day whose next available (non-nd) day is also Y. Ice-off:
/// first N day after the frozen spell whose next available day is also N.
IceDates extract_ice_dates(const DailyLabelSeries& labels);

/// CSV `date,pct_fp,label` with empty pct_fp for nd days.
void write_label_series(const DailyLabelSeries& series, const std::string& path);
DailyLabelSeries read_label_series(const std::string& path, const std::string& lake = "",
                                   const std::string& method = "");

}  // namespace lakeice
