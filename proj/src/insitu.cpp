#include "lakeice/insitu.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <sstream>

namespace lakeice {

void LoggerSeries::validate() const {
    if (samples.empty()) throw validation_error("logger series '" + sensor_id + "' is empty");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i - 1].first < samples[i].first))
            throw validation_error("logger series '" + sensor_id +
                                   "': timestamps not strictly increasing");
    }
}

std::size_t LoggerSeries::count_gaps(double factor) const {
    if (samples.size() < 3) return 0;
    std::vector<std::int64_t> steps;
    for (std::size_t i = 1; i < samples.size(); ++i)
        steps.push_back(samples[i].first.epoch_seconds() - samples[i - 1].first.epoch_seconds());
    std::vector<std::int64_t> sorted = steps;
    std::sort(sorted.begin(), sorted.end());
    const double median = double(sorted[sorted.size() / 2]);
    std::size_t gaps = 0;
    for (std::int64_t s : steps) gaps += double(s) > factor * median ? 1 : 0;
    return gaps;
}

namespace {

constexpr double kMaxInterpGapHours = 6.0;

/// Uniform hourly grid across the series span; gaps longer than 6 h stay NaN.
struct HourlyGrid {
    std::int64_t t0 = 0;  // epoch seconds of sample 0
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    long index_of(std::int64_t epoch_seconds) const {
        const std::int64_t rel = epoch_seconds - t0;
        if (rel < 0 || rel % 3600 != 0) return -1;
        const std::int64_t i = rel / 3600;
        return i < std::int64_t(values.size()) ? long(i) : -1;
    }
};

HourlyGrid hourly_resample(const LoggerSeries& series) {
    series.validate();
    HourlyGrid grid;
    const std::int64_t first = series.samples.front().first.epoch_seconds();
    const std::int64_t last = series.samples.back().first.epoch_seconds();
    grid.t0 = (first + 3599) / 3600 * 3600;
    const std::int64_t t_end = last / 3600 * 3600;
    if (t_end < grid.t0) throw insufficient_data_error("logger series spans less than an hour");

    const std::size_t n = std::size_t((t_end - grid.t0) / 3600) + 1;
    grid.values.assign(n, missing_value());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t t = grid.t0 + std::int64_t(i) * 3600;
        while (j + 1 < series.samples.size() && series.samples[j + 1].first.epoch_seconds() <= t)
            ++j;
        const auto& a = series.samples[j];
        if (a.first.epoch_seconds() == t) {
            grid.values[i] = a.second;
            continue;
        }
        if (j + 1 >= series.samples.size()) break;
        const auto& b = series.samples[j + 1];
        const double span = double(b.first.epoch_seconds() - a.first.epoch_seconds());
        if (span > kMaxInterpGapHours * 3600.0) continue;
        const double u = double(t - a.first.epoch_seconds()) / span;
        grid.values[i] = a.second + u * (b.second - a.second);
    }
    return grid;
}

std::vector<double> running_mean_hours(const std::vector<double>& v, int window_hours) {
    const long half = window_hours / 2;
    const long n = long(v.size());
    std::vector<double> out(v.size(), missing_value());
    for (long i = 0; i < n; ++i) {
        if (is_missing(v[i])) continue;
        double sum = 0.0;
        std::size_t cnt = 0;
        for (long j = std::max(0l, i - half); j <= std::min(n - 1, i + half); ++j) {
            if (is_missing(v[j])) continue;
            sum += v[j];
            ++cnt;
        }
        out[i] = sum / double(cnt);
    }
    return out;
}

std::vector<double> subtract(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size(), missing_value());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!is_missing(a[i]) && !is_missing(b[i])) out[i] = a[i] - b[i];
    }
    return out;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.empty() ? missing_value()
                     : (v.size() % 2 ? v[v.size() / 2]
                                     : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]));
}

/// Per-day value picked at the decision hour of the hourly grid.
struct DailySampler {
    Date first_day;
    std::size_t n_days = 0;
    std::vector<long> hour_index;  // -1 when the decision hour is off-grid

    DailySampler(const HourlyGrid& grid, int decision_hour) {
        const Date d0 = DateTime(grid.t0).date();
        const Date d1 = DateTime(grid.t0 + std::int64_t(grid.size() - 1) * 3600).date();
        first_day = d0;
        n_days = std::size_t(d1 - d0) + 1;
        for (std::size_t d = 0; d < n_days; ++d) {
            const std::int64_t t =
                std::int64_t((first_day + int(d)).serial()) * 86400 + decision_hour * 3600;
            hour_index.push_back(const_cast<const HourlyGrid&>(grid).index_of(t));
        }
    }

    double sample(const std::vector<double>& hourly, std::size_t day) const {
        const long i = hour_index[day];
        return i < 0 ? missing_value() : hourly[std::size_t(i)];
    }
};

/// First index where pred holds for `persist` consecutive available days.
long first_sustained(const std::vector<double>& daily, long from, int persist, auto pred) {
    const long n = long(daily.size());
    for (long d = from; d < n; ++d) {
        bool ok = true;
        long seen = 0;
        for (long j = d; j < n && seen < persist; ++j) {
            if (is_missing(daily[j])) continue;
            if (!pred(daily[j])) {
                ok = false;
                break;
            }
            ++seen;
        }
        if (ok && seen == persist && !is_missing(daily[d]) && pred(daily[d])) return d;
    }
    return -1;
}

}  // namespace

DetectorResult detect_by_correlation(const LoggerSeries& shallow, const LoggerSeries& deeper,
                                     const CorrelationParams& params) {
    shallow.validate();
    deeper.validate();
    if (shallow.kind != LoggerKind::temperature || deeper.kind != LoggerKind::temperature)
        throw validation_error("correlation detector needs temperature series");
    // The coupling signal lives in the top meter or so; deep sensors stay
    // decoupled from the surface year-round.
    if (shallow.depth_m > 2.0 || deeper.depth_m > 2.0)
        throw validation_error("correlation detector needs near-surface sensors (got " +
                               std::to_string(shallow.depth_m) + " m and " +
                               std::to_string(deeper.depth_m) + " m)");

    const HourlyGrid ga = hourly_resample(shallow);
    const HourlyGrid gb = hourly_resample(deeper);
    const std::int64_t t0 = std::max(ga.t0, gb.t0);
    const std::int64_t t1 = std::min(ga.t0 + std::int64_t(ga.size() - 1) * 3600,
                                     gb.t0 + std::int64_t(gb.size() - 1) * 3600);
    if (t1 - t0 < std::int64_t(30) * 86400)
        throw insufficient_data_error("correlation detector: overlap shorter than 30 days");

    const std::size_t n = std::size_t((t1 - t0) / 3600) + 1;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = ga.values[std::size_t((t0 - ga.t0) / 3600) + i];
        b[i] = gb.values[std::size_t((t0 - gb.t0) / 3600) + i];
    }
    HourlyGrid common{t0, {}};

    // Detrend with a 24 h running mean before correlating.
    const std::vector<double> da = subtract(a, running_mean_hours(a, 24));
    const std::vector<double> db = subtract(b, running_mean_hours(b, 24));

    // Rolling Pearson correlation.
    const long half = params.window_days * 24 / 2;
    std::vector<double> corr(n, missing_value());
    for (long i = 0; i < long(n); ++i) {
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        std::size_t cnt = 0;
        for (long j = std::max(0l, i - half); j <= std::min(long(n) - 1, i + half); ++j) {
            if (is_missing(da[j]) || is_missing(db[j])) continue;
            sa += da[j];
            sb += db[j];
            saa += da[j] * da[j];
            sbb += db[j] * db[j];
            sab += da[j] * db[j];
            ++cnt;
        }
        if (cnt < 8) continue;
        const double va = saa - sa * sa / double(cnt);
        const double vb = sbb - sb * sb / double(cnt);
        const double cov = sab - sa * sb / double(cnt);
        corr[i] = (va > 0.0 && vb > 0.0) ? cov / std::sqrt(va * vb) : 0.0;
    }

    common.values = corr;
    const DailySampler sampler(common, params.decision_hour);
    std::vector<double> daily_corr(sampler.n_days, missing_value());
    std::vector<double> daily_absdiff(sampler.n_days, missing_value());
    for (std::size_t d = 0; d < sampler.n_days; ++d) {
        daily_corr[d] = sampler.sample(corr, d);
        // Mean absolute raw temperature difference over the day.
        double sum = 0.0;
        std::size_t cnt = 0;
        const std::int64_t day_start = std::int64_t((sampler.first_day + int(d)).serial()) * 86400;
        for (int h = 0; h < 24; ++h) {
            const long i = common.index_of(day_start + h * 3600);
            if (i < 0 || is_missing(a[std::size_t(i)]) || is_missing(b[std::size_t(i)])) continue;
            sum += std::abs(a[std::size_t(i)] - b[std::size_t(i)]);
            ++cnt;
        }
        if (cnt) daily_absdiff[d] = sum / double(cnt);
    }

    DetectorResult res;
    res.interval.method = "correlation";
    res.diagnostics = DailyDiagnostics{sampler.first_day, "correlation", daily_corr};

    const long freeze = first_sustained(daily_corr, 0, params.freeze_persist_days,
                                        [&](double c) { return c < params.freeze_corr; });
    if (freeze < 0) {
        res.interval.status = "no freeze detected";
        return res;
    }
    res.interval.freeze_up = sampler.first_day + int(freeze);

    std::vector<double> joint(daily_corr.size(), missing_value());
    for (std::size_t d = std::size_t(freeze); d < joint.size(); ++d) {
        if (is_missing(daily_corr[d]) || is_missing(daily_absdiff[d])) continue;
        const bool recoupled = daily_corr[d] > params.breakup_corr &&
                               daily_absdiff[d] < params.identical_temp_c;
        joint[d] = recoupled ? 1.0 : 0.0;
    }
    const long brk = first_sustained(joint, freeze + 1, params.breakup_persist_days,
                                     [](double v) { return v > 0.5; });
    if (brk >= 0) {
        res.interval.break_up = sampler.first_day + int(brk);
    } else {
        res.interval.status = "freeze-up only; no break-up signal";
    }
    return res;
}

namespace {

/// Hann-tapered periodogram energies of a window (mean removed):
/// band = sum of |X_k|^2 over bins with period in [low, high] hours,
/// total = sum over all non-DC bins up to Nyquist.
struct BandEnergy {
    double band = 0.0;
    double total = 0.0;
    std::size_t band_bins = 0;
    std::size_t total_bins = 0;
};

BandEnergy window_band_energy(const std::vector<double>& w, double period_low_h,
                              double period_high_h) {
    const std::size_t n = w.size();
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= double(n);

    std::vector<double> tapered(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * M_PI * double(i) / double(n - 1));
        tapered[i] = (w[i] - mean) * hann;
    }

    BandEnergy e;
    const std::size_t k_lo = std::size_t(std::ceil(double(n) / period_high_h));
    const std::size_t k_hi = std::size_t(std::floor(double(n) / period_low_h));
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> x(0.0, 0.0);
        const double base = -2.0 * M_PI * double(k) / double(n);
        for (std::size_t i = 0; i < n; ++i) {
            x += tapered[i] * std::polar(1.0, base * double(i));
        }
        const double p = std::norm(x);
        e.total += p;
        ++e.total_bins;
        if (k >= k_lo && k <= k_hi) {
            e.band += p;
            ++e.band_bins;
        }
    }
    return e;
}

}  // namespace

DetectorResult detect_by_spectral_energy(const LoggerSeries& series, const SpectralParams& params) {
    series.validate();
    const std::int64_t span =
        series.samples.back().first.epoch_seconds() - series.samples.front().first.epoch_seconds();
    if (span < std::int64_t(60) * 86400)
        throw insufficient_data_error("spectral detector: need at least 60 days of data");
    {
        std::vector<std::int64_t> steps;
        for (std::size_t i = 1; i < series.samples.size(); ++i)
            steps.push_back(series.samples[i].first.epoch_seconds() -
                            series.samples[i - 1].first.epoch_seconds());
        std::sort(steps.begin(), steps.end());
        if (double(steps[steps.size() / 2]) > 3600.0)
            throw validation_error("spectral detector: effective cadence coarser than 1 h");
    }
    if (double(params.window_days) * 24.0 < 3.0 * params.band_period_high_h * 0.75)
        throw validation_error("spectral detector: window shorter than 3x the band period");

    const HourlyGrid grid = hourly_resample(series);
    const DailySampler sampler(grid, 13);
    const long win = params.window_days * 24;
    const long half = win / 2;

    std::vector<double> energy(sampler.n_days, missing_value());
    std::vector<double> band_ratio;
    for (std::size_t d = 0; d < sampler.n_days; ++d) {
        const std::int64_t center =
            std::int64_t((sampler.first_day + int(d)).serial()) * 86400 + 12 * 3600;
        const long ci = grid.index_of(center / 3600 * 3600);
        if (ci < 0 || ci - half < 0 || ci + half >= long(grid.size())) continue;
        std::vector<double> w(grid.values.begin() + (ci - half), grid.values.begin() + (ci + half));
        // Gaps longer than the interpolation limit split windows: skip the day.
        if (std::any_of(w.begin(), w.end(), [](double v) { return is_missing(v); })) continue;
        const BandEnergy e =
            window_band_energy(w, params.band_period_low_h, params.band_period_high_h);
        energy[d] = e.band;
        if (e.total > 0.0) band_ratio.push_back(e.band / e.total);
    }

    DetectorResult res;
    res.interval.method = "spectral";
    res.diagnostics = DailyDiagnostics{sampler.first_day, "band_energy", energy};

    if (band_ratio.empty()) {
        res.interval.status = "no band energy";
        return res;
    }
    // A real seiche band carries well above its uniform share of the spectrum.
    {
        std::vector<double> w0;
        for (std::size_t d = 0; d < sampler.n_days && w0.size() < 21; ++d) {
            if (!is_missing(energy[d])) w0.push_back(energy[d]);
        }
        const BandEnergy probe = window_band_energy(
            std::vector<double>(std::size_t(win), 0.0), params.band_period_low_h,
            params.band_period_high_h);
        const double uniform_share = double(probe.band_bins) / double(probe.total_bins);
        if (median_of(band_ratio) < 3.0 * uniform_share) {
            res.interval.status = "no band energy";
            return res;
        }
    }

    // Freeze-up: sustained drop by drop_decades below the prior background,
    // then walk back to the beginning of the drop.
    const double drop_factor = std::pow(10.0, -params.drop_decades);
    long crossing = -1;
    double bg_free = missing_value();
    for (long d = 0; d < long(sampler.n_days); ++d) {
        if (is_missing(energy[d])) continue;
        std::vector<double> prior;
        for (long j = std::max(0l, d - params.background_days); j < d; ++j) {
            if (!is_missing(energy[j])) prior.push_back(energy[j]);
        }
        if (prior.size() < 5) continue;
        const double bg = median_of(prior);
        const long hit = first_sustained(energy, d, params.persist_days,
                                         [&](double e) { return e < bg * drop_factor; });
        if (hit == d) {
            crossing = d;
            bg_free = bg;
            break;
        }
    }
    if (crossing < 0) {
        res.interval.status = "no sustained energy drop";
        return res;
    }
    long freeze = crossing;
    for (long d = crossing; d >= 0; --d) {
        if (is_missing(energy[d])) continue;
        if (energy[d] >= bg_free * params.drop_start_fraction) {
            freeze = d;
            break;
        }
    }
    res.interval.freeze_up = sampler.first_day + int(freeze);

    // Ice-covered background, then break-up at the first upward crossing of
    // the mean of the two background levels.
    std::vector<double> ice_window;
    for (long d = crossing; d < std::min(long(sampler.n_days), crossing + params.background_days);
         ++d) {
        if (!is_missing(energy[d])) ice_window.push_back(energy[d]);
    }
    const double bg_ice = ice_window.empty() ? bg_free * drop_factor : median_of(ice_window);
    const double break_level = 0.5 * (bg_free + bg_ice);
    const long brk = first_sustained(energy, crossing + 1, 1,
                                     [&](double e) { return e >= break_level; });
    if (brk >= 0) {
        res.interval.break_up = sampler.first_day + int(brk);
    } else {
        res.interval.status = "freeze-up only; no recovery crossing";
    }
    return res;
}

DetectorResult detect_by_pressure(const LoggerSeries& series, const PressureParams& params) {
    series.validate();
    const std::int64_t span =
        series.samples.back().first.epoch_seconds() - series.samples.front().first.epoch_seconds();
    if (span < std::int64_t(30) * 86400)
        throw insufficient_data_error("pressure detector: need at least 30 days of data");

    const HourlyGrid grid = hourly_resample(series);
    const std::vector<double> hp =
        subtract(grid.values, running_mean_hours(grid.values, params.highpass_hours));

    // Fluctuation levels at the rounding scale of the raw readings are
    // quantization noise, not a signal. The floor scales with the data
    // magnitude, keeping the detector offset- and scale-invariant.
    double max_abs = 0.0;
    for (double v : grid.values) {
        if (!is_missing(v)) max_abs = std::max(max_abs, std::abs(v));
    }
    const double noise_floor = 1e3 * max_abs * std::numeric_limits<double>::epsilon();

    // Rolling standard deviation of the high-passed signal.
    const long half = params.std_window_days * 24 / 2;
    const long n = long(hp.size());
    std::vector<double> rolling_std(hp.size(), missing_value());
    for (long i = 0; i < n; ++i) {
        double s = 0.0, ss = 0.0;
        std::size_t cnt = 0;
        for (long j = std::max(0l, i - half); j <= std::min(n - 1, i + half); ++j) {
            if (is_missing(hp[j])) continue;
            s += hp[j];
            ss += hp[j] * hp[j];
            ++cnt;
        }
        if (cnt < 8) continue;
        const double var = std::max(ss / double(cnt) - (s / double(cnt)) * (s / double(cnt)), 0.0);
        rolling_std[i] = std::sqrt(var);
    }

    const DailySampler sampler(grid, 13);
    std::vector<double> daily_std(sampler.n_days, missing_value());
    for (std::size_t d = 0; d < sampler.n_days; ++d) daily_std[d] = sampler.sample(rolling_std, d);

    DetectorResult res;
    res.interval.method = "pressure";
    res.diagnostics = DailyDiagnostics{sampler.first_day, "rolling_std", daily_std};

    long freeze = -1;
    double bg = missing_value();
    for (long d = 0; d < long(sampler.n_days); ++d) {
        if (is_missing(daily_std[d])) continue;
        std::vector<double> prior;
        for (long j = std::max(0l, d - params.background_days); j < d; ++j) {
            if (!is_missing(daily_std[j])) prior.push_back(daily_std[j]);
        }
        if (prior.size() < 5) continue;
        const double level = median_of(prior);
        if (level <= noise_floor) continue;
        const long hit = first_sustained(daily_std, d, params.persist_days,
                                         [&](double s) { return s < level / params.drop_factor; });
        if (hit == d) {
            freeze = d;
            bg = level;
            break;
        }
    }
    if (freeze < 0) {
        res.interval.status = "no signal";
        return res;
    }
    res.interval.freeze_up = sampler.first_day + int(freeze);

    std::vector<double> ice_window;
    for (long d = freeze; d < std::min(long(sampler.n_days), freeze + params.background_days);
         ++d) {
        if (!is_missing(daily_std[d])) ice_window.push_back(daily_std[d]);
    }
    const double bg_ice = ice_window.empty() ? bg / params.drop_factor : median_of(ice_window);
    const long brk =
        first_sustained(daily_std, freeze + 1, params.persist_days,
                        [&](double s) { return s > bg_ice * params.drop_factor; });
    if (brk >= 0) {
        res.interval.break_up = sampler.first_day + int(brk);
    } else {
        res.interval.status = "freeze-up only; no recovery signal";
    }
    return res;
}

LoggerSeries read_logger_csv(const std::string& path, LoggerKind kind,
                             const std::string& sensor_id) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open logger file: " + path);
    LoggerSeries series;
    series.kind = kind;
    series.sensor_id = sensor_id.empty() ? path : sensor_id;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!seen_data && line.rfind("timestamp", 0) == 0) continue;
        seen_data = true;
        std::stringstream ss(line);
        std::string ts, depth, value;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, depth, ',') ||
            !std::getline(ss, value))
            throw validation_error(path + ":" + std::to_string(line_no) + ": malformed logger row");
        series.depth_m = std::stod(depth);
        series.samples.emplace_back(DateTime::parse(ts), std::stod(value));
    }
    series.validate();
    return series;
}

void write_diagnostics_csv(const DailyDiagnostics& diag, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write diagnostics: " + path);
    out << "date," << diag.quantity << "\n";
    char buf[32];
    for (std::size_t d = 0; d < diag.values.size(); ++d) {
        out << (diag.start + int(d)).to_iso() << ',';
        if (!is_missing(diag.values[d])) {
            std::snprintf(buf, sizeof buf, "%.10g", diag.values[d]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace lakeice
