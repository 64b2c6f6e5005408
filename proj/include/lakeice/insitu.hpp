#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

enum class LoggerKind { temperature, pressure };

/// Mooring time series at roughly 10-minute cadence.
struct LoggerSeries {
    std::string sensor_id;
    double depth_m = 0.0;
    LoggerKind kind = LoggerKind::temperature;
    std::vector<std::pair<DateTime, double>> samples;  // strictly increasing timestamps

    void validate() const;
    /// Cadence gaps larger than the given factor of the median step.
    std::size_t count_gaps(double factor = 3.0) const;
};

struct IceInterval {
    std::optional<Date> freeze_up;
    std::optional<Date> break_up;
    std::string method;
    std::string status = "ok";  // "no signal", "no band energy", ...
};

/// Per-day diagnostic values a detector produced (correlation, band energy,
/// or rolling standard deviation), for the diagnostics CSV.
struct DailyDiagnostics {
    Date start;
    std::string quantity;
    std::vector<double> values;  // NaN = not computable that day
};

struct DetectorResult {
    IceInterval interval;
    DailyDiagnostics diagnostics;
};

struct CorrelationParams {
    int window_days = 3;             // rolling correlation window
    double freeze_corr = 0.5;        // below: decoupled
    int freeze_persist_days = 2;
    double breakup_corr = 0.9;       // above, plus temperature identity
    double identical_temp_c = 0.05;
    int breakup_persist_days = 1;
    int decision_hour = 13;          // daily decision at the 1 pm sample
};

/// Two-sensor method: series are detrended by a 24 h running mean; freeze-up
/// is the first day the rolling correlation stays below 0.5 for two days,
/// break-up the first later day with correlation above 0.9 and near-identical
/// raw temperatures sustained for a day.
DetectorResult detect_by_correlation(const LoggerSeries& shallow, const LoggerSeries& deeper,
                                     const CorrelationParams& params = {});

struct SpectralParams {
    int window_days = 7;             // sliding periodogram window
    double band_period_low_h = 20.0; // seiche band
    double band_period_high_h = 40.0;
    double drop_decades = 2.0;       // sustained energy drop marking freeze-up
    int persist_days = 2;
    int background_days = 21;        // median window for background levels
    double drop_start_fraction = 0.5;  // walk back to the beginning of the drop
};

/// Single-sensor method: Hann-tapered windowed periodogram, band energy
/// integrated over 20-40 h periods. Freeze-up is the beginning of the first
/// sustained two-decade drop below the ice-free background; break-up the
/// first upward crossing of the mean of the ice-free and ice-covered
/// background levels.
DetectorResult detect_by_spectral_energy(const LoggerSeries& series,
                                         const SpectralParams& params = {});

struct PressureParams {
    int highpass_hours = 24;      // running-mean high-pass
    int std_window_days = 3;      // rolling standard deviation
    int background_days = 14;
    double drop_factor = 5.0;     // std below background/5 marks freeze-up
    int persist_days = 2;
};

/// Pressure method: high-passed series, rolling 3-day standard deviation;
/// freeze-up when the std drops below a fifth of the preceding background and
/// stays there, break-up on the symmetric factor-five recovery. A series with
/// no qualifying change reports status "no signal" rather than an error.
DetectorResult detect_by_pressure(const LoggerSeries& series, const PressureParams& params = {});

/// Logger CSV `timestamp_iso8601,depth_m,value` with a header row.
LoggerSeries read_logger_csv(const std::string& path, LoggerKind kind,
                             const std::string& sensor_id = "");

void write_diagnostics_csv(const DailyDiagnostics& diag, const std::string& path);

}  // namespace lakeice
