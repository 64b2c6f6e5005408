#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

/// A daily-indexed scalar series. values[i] belongs to start + i; NaN marks
/// missing days.
struct DailySeries {
    Date start;
    std::vector<double> values;

    Date date_at(std::size_t i) const { return start + int(i); }
    std::size_t size() const { return values.size(); }
};

/// Per-day lake aggregates with the pooled pixel samples the thresholds are
/// derived from.
struct DailyRecord {
    Date date;
    double mean_nir = missing_value();
    double mean_lswt = missing_value();
    std::size_t n_obs = 0;  // processable acquisitions that contributed
    std::vector<double> nir_samples;   // clear clean pixels, pooled over the day
    std::vector<double> lswt_samples;
};

struct DailyLakeSeries {
    std::vector<DailyRecord> days;  // consecutive dates

    DailySeries mean_nir_series() const;
    DailySeries mean_lswt_series() const;
};

/// Fraction of samples strictly above / below the threshold.
double frac_above(const std::vector<double>& samples, double threshold);
double frac_below(const std::vector<double>& samples, double threshold);

/// Clear clean pixel values of one processable acquisition.
struct AcquisitionSamples {
    Date date;
    std::vector<double> nir;
    std::vector<double> lswt;
};

/// Pools same-day acquisitions and fills the full date range with explicit
/// missing days. Pixel samples carrying NaN are dropped from the pools.
DailyLakeSeries aggregate_daily(const std::vector<AcquisitionSamples>& acquisitions);

/// Despiking: a Hampel gate (median +- k*MAD over a 5-available-sample
/// window) removes spikes, a running 3-day median smooths, and interior gaps
/// are filled by linear interpolation. Leading/trailing missing days remain
/// missing.
DailySeries despike(const DailySeries& series, double k = 3.0);

/// Lower/upper envelopes: the lower (upper) raw curve is the maximum of
/// 15-day window minima (minimum of window maxima); the smoothed curves apply
/// a 15-day (7-day) centered running mean, truncated at the series ends.
struct BoundCurves {
    DailySeries lower_raw;
    DailySeries upper_raw;
    DailySeries lower;  // 15-day running mean of lower_raw
    DailySeries upper;  // 7-day running mean of upper_raw
};
BoundCurves bound_curves(const DailySeries& despiked, int window_days = 15);

enum class NirState : std::uint8_t { missing = 0, undecided = 1, open = 2, frozen = 3 };

/// First step: frozen when >= 70% of pixels reflect above 0.40, open when
/// >= 70% reflect below 0.15.
NirState nir_state(double frac_nir_above_040, double frac_nir_below_015, double majority = 0.70);

/// Nearest-rank percentile: the ceil(p/100 * n)-th order statistic.
double nearest_rank_percentile(std::vector<double> samples, double percentile);

struct LswtThresholds {
    std::optional<double> frozen_k;  // 90th percentile of LSWT on NIR-frozen days
    std::optional<double> open_k;    // 10th percentile of LSWT on NIR-open days
    std::vector<std::string> warnings;
};

/// Second step: thresholds from the LSWT pixel pools partitioned by the NIR
/// state. Partitions under min_samples get a warning; empty partitions leave
/// the threshold missing (callers fall back to 273.15 K, flagged).
LswtThresholds lswt_thresholds(const std::vector<double>& frozen_partition,
                               const std::vector<double>& open_partition,
                               std::size_t min_samples = 10);

enum class DayQual : std::uint8_t { missing = 0, undecided = 1, open = 2, frozen = 3 };

struct PhenologyEvents {
    std::optional<Date> fus, fue, bus, bue;
    std::optional<Date> ice_on, ice_off;  // ice_on = FUE, ice_off = BUS
    int fue_uncertainty_days = 0;         // missing-day gap adjacent to the date
    int bus_uncertainty_days = 0;
    std::string status = "ok";
    std::vector<std::string> warnings;
};

/// Event extraction over the daily qualification series. Missing and
/// undecided days inside a qualified run inherit the run state; runs shorter
/// than the suppression window are deleted. FUE is the first observed day of
/// the surviving frozen run, BUS the first open-qualified day after it, FUS
/// the last open day before FUE, BUE the first day of the surviving open run
/// after BUS.
PhenologyEvents extract_phenology(Date start, const std::vector<DayQual>& day_quals,
                                  int suppression_window_days = 15);

struct PhenologyParams {
    double nir_frozen_refl = 0.40;
    double nir_open_refl = 0.15;
    double majority = 0.70;
    int bound_window_days = 15;
    int suppression_window_days = 15;
    double despike_k = 3.0;
    double fallback_threshold_k = 273.15;
    std::size_t min_partition_samples = 10;
};

struct TwoStepResult {
    DailySeries nir_despiked;
    BoundCurves nir_bounds;
    std::vector<NirState> nir_states;
    LswtThresholds thresholds;
    std::vector<DayQual> day_quals;
    PhenologyEvents events;
};

/// The full two-step chain over a daily lake series.
TwoStepResult two_step_phenology(const DailyLakeSeries& series, const PhenologyParams& params = {});

}  // namespace lakeice
