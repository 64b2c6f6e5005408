#include "lakeice/phenology.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lakeice {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

DailySeries DailyLakeSeries::mean_nir_series() const {
    DailySeries s{days.empty() ? Date() : days.front().date, {}};
    for (const DailyRecord& d : days) s.values.push_back(d.mean_nir);
    return s;
}

DailySeries DailyLakeSeries::mean_lswt_series() const {
    DailySeries s{days.empty() ? Date() : days.front().date, {}};
    for (const DailyRecord& d : days) s.values.push_back(d.mean_lswt);
    return s;
}

double frac_above(const std::vector<double>& samples, double threshold) {
    if (samples.empty()) return missing_value();
    std::size_t n = 0;
    for (double v : samples) n += v > threshold ? 1 : 0;
    return double(n) / double(samples.size());
}

double frac_below(const std::vector<double>& samples, double threshold) {
    if (samples.empty()) return missing_value();
    std::size_t n = 0;
    for (double v : samples) n += v < threshold ? 1 : 0;
    return double(n) / double(samples.size());
}

DailyLakeSeries aggregate_daily(const std::vector<AcquisitionSamples>& acquisitions) {
    DailyLakeSeries out;
    if (acquisitions.empty()) return out;

    std::map<Date, DailyRecord> by_date;
    for (const AcquisitionSamples& acq : acquisitions) {
        DailyRecord& rec = by_date[acq.date];
        rec.date = acq.date;
        ++rec.n_obs;
        for (double v : acq.nir) {
            if (!is_missing(v)) rec.nir_samples.push_back(v);
        }
        for (double v : acq.lswt) {
            if (!is_missing(v)) rec.lswt_samples.push_back(v);
        }
    }

    const Date first = by_date.begin()->first;
    const Date last = by_date.rbegin()->first;
    for (Date d = first; d <= last; ++d) {
        auto it = by_date.find(d);
        if (it == by_date.end()) {
            out.days.push_back(DailyRecord{d});
            continue;
        }
        DailyRecord rec = std::move(it->second);
        if (!rec.nir_samples.empty()) {
            double sum = 0.0;
            for (double v : rec.nir_samples) sum += v;
            rec.mean_nir = sum / double(rec.nir_samples.size());
        }
        if (!rec.lswt_samples.empty()) {
            double sum = 0.0;
            for (double v : rec.lswt_samples) sum += v;
            rec.mean_lswt = sum / double(rec.lswt_samples.size());
        }
        out.days.push_back(std::move(rec));
    }
    return out;
}

DailySeries despike(const DailySeries& series, double k) {
    std::vector<std::size_t> avail;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (!is_missing(series.values[i])) avail.push_back(i);
    }
    if (avail.empty()) throw insufficient_data_error("despike: series is all missing");

    // Hampel gate over a window of +-2 available samples.
    std::vector<double> kept = series.values;
    for (std::size_t a = 0; a < avail.size(); ++a) {
        const std::size_t lo = a >= 2 ? a - 2 : 0;
        const std::size_t hi = std::min(a + 2, avail.size() - 1);
        if (hi - lo + 1 < 3) continue;
        std::vector<double> window;
        for (std::size_t j = lo; j <= hi; ++j) window.push_back(series.values[avail[j]]);
        const double med = median_of(window);
        std::vector<double> dev;
        for (double v : window) dev.push_back(std::abs(v - med));
        const double mad = median_of(dev);
        if (std::abs(series.values[avail[a]] - med) > k * mad) {
            kept[avail[a]] = missing_value();
        }
    }

    // Running 3-day median over available values (date-based window). Points
    // without a full 3-value window keep their value; a 2-sample median would
    // average and drift the series ends on every pass.
    std::vector<double> smoothed = kept;
    const long n = long(kept.size());
    for (long i = 0; i < n; ++i) {
        if (is_missing(kept[i])) continue;
        std::vector<double> window;
        for (long j = std::max(0l, i - 1); j <= std::min(n - 1, i + 1); ++j) {
            if (!is_missing(kept[j])) window.push_back(kept[j]);
        }
        if (window.size() >= 3) smoothed[i] = median_of(window);
    }

    // Linear interpolation across interior gaps.
    long prev = -1;
    for (long i = 0; i < n; ++i) {
        if (is_missing(smoothed[i])) continue;
        if (prev >= 0 && i > prev + 1) {
            for (long j = prev + 1; j < i; ++j) {
                const double t = double(j - prev) / double(i - prev);
                smoothed[j] = smoothed[prev] + t * (smoothed[i] - smoothed[prev]);
            }
        }
        prev = i;
    }
    return DailySeries{series.start, std::move(smoothed)};
}

namespace {

// Running mean over a centered date window, truncated at the ends; missing
// values are skipped.
DailySeries running_mean(const DailySeries& s, int window) {
    const long half = window / 2;
    const long n = long(s.values.size());
    DailySeries out{s.start, std::vector<double>(s.values.size(), missing_value())};
    for (long i = 0; i < n; ++i) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (long j = std::max(0l, i - half); j <= std::min(n - 1, i + half); ++j) {
            if (is_missing(s.values[j])) continue;
            sum += s.values[j];
            ++cnt;
        }
        if (cnt) out.values[i] = sum / double(cnt);
    }
    return out;
}

}  // namespace

BoundCurves bound_curves(const DailySeries& despiked, int window_days) {
    const long n = long(despiked.values.size());
    const long w = window_days;
    if (n < w) throw insufficient_data_error("bound_curves: series shorter than the window");

    // Window extrema over every full window [t, t+w-1].
    const long n_windows = n - w + 1;
    std::vector<double> win_min(n_windows), win_max(n_windows);
    for (long t = 0; t < n_windows; ++t) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (long j = t; j < t + w; ++j) {
            if (is_missing(despiked.values[j])) continue;
            lo = std::min(lo, despiked.values[j]);
            hi = std::max(hi, despiked.values[j]);
            any = true;
        }
        win_min[t] = any ? lo : missing_value();
        win_max[t] = any ? hi : missing_value();
    }

    BoundCurves curves;
    curves.lower_raw = DailySeries{despiked.start, std::vector<double>(std::size_t(n), missing_value())};
    curves.upper_raw = curves.lower_raw;
    for (long i = 0; i < n; ++i) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        bool any = false;
        for (long t = std::max(0l, i - w + 1); t <= std::min(n_windows - 1, i); ++t) {
            if (is_missing(win_min[t])) continue;
            lo = std::max(lo, win_min[t]);
            hi = std::min(hi, win_max[t]);
            any = true;
        }
        if (any) {
            curves.lower_raw.values[i] = lo;
            curves.upper_raw.values[i] = hi;
        }
    }
    curves.lower = running_mean(curves.lower_raw, 15);
    curves.upper = running_mean(curves.upper_raw, 7);
    return curves;
}

NirState nir_state(double frac_nir_above_040, double frac_nir_below_015, double majority) {
    if (is_missing(frac_nir_above_040) || is_missing(frac_nir_below_015)) return NirState::missing;
    if (frac_nir_above_040 >= majority) return NirState::frozen;
    if (frac_nir_below_015 >= majority) return NirState::open;
    return NirState::undecided;
}

double nearest_rank_percentile(std::vector<double> samples, double percentile) {
    if (samples.empty()) throw validation_error("percentile of empty sample");
    std::sort(samples.begin(), samples.end());
    const double p = std::clamp(percentile, 0.0, 100.0);
    std::size_t rank = std::size_t(std::ceil(p / 100.0 * double(samples.size())));
    if (rank == 0) rank = 1;
    return samples[rank - 1];
}

LswtThresholds lswt_thresholds(const std::vector<double>& frozen_partition,
                               const std::vector<double>& open_partition,
                               std::size_t min_samples) {
    LswtThresholds thr;
    if (!frozen_partition.empty()) {
        thr.frozen_k = nearest_rank_percentile(frozen_partition, 90.0);
        if (frozen_partition.size() < min_samples)
            thr.warnings.push_back("frozen partition has fewer than " +
                                   std::to_string(min_samples) + " samples");
    } else {
        thr.warnings.push_back("frozen partition empty, threshold missing");
    }
    if (!open_partition.empty()) {
        thr.open_k = nearest_rank_percentile(open_partition, 10.0);
        if (open_partition.size() < min_samples)
            thr.warnings.push_back("open partition has fewer than " + std::to_string(min_samples) +
                                   " samples");
    } else {
        thr.warnings.push_back("open partition empty, threshold missing");
    }
    if (thr.frozen_k && thr.open_k && *thr.open_k < *thr.frozen_k)
        thr.warnings.push_back("open-water threshold below frozen threshold; time series likely "
                               "too short");
    return thr;
}

namespace {

struct Run {
    DayQual state;
    long first, last;  // inclusive indices
    long length() const { return last - first + 1; }
};

// Maximal runs of a qualified state, bridging missing/undecided days that are
// flanked by that state on both sides.
std::vector<Run> qualified_runs(const std::vector<DayQual>& days) {
    std::vector<Run> runs;
    const long n = long(days.size());
    long i = 0;
    while (i < n) {
        if (days[i] != DayQual::frozen && days[i] != DayQual::open) {
            ++i;
            continue;
        }
        const DayQual state = days[i];
        long last = i;
        long j = i + 1;
        while (j < n) {
            if (days[j] == state) {
                last = j;
                ++j;
            } else if (days[j] == DayQual::missing || days[j] == DayQual::undecided) {
                ++j;  // bridge only if the same state resumes
            } else {
                break;
            }
        }
        runs.push_back(Run{state, i, last});
        i = last + 1;
    }
    return runs;
}

}  // namespace

PhenologyEvents extract_phenology(Date start, const std::vector<DayQual>& day_quals,
                                  int suppression_window_days) {
    PhenologyEvents ev;
    std::vector<DayQual> days = day_quals;

    // Suppress qualified runs shorter than the window.
    for (const Run& run : qualified_runs(days)) {
        if (run.length() < suppression_window_days) {
            for (long i = run.first; i <= run.last; ++i) {
                if (days[i] == run.state) days[i] = DayQual::undecided;
            }
        }
    }

    const std::vector<Run> runs = qualified_runs(days);
    const Run* frozen = nullptr;
    for (const Run& r : runs) {
        if (r.state == DayQual::frozen) {
            frozen = &r;
            break;
        }
    }
    if (!frozen) {
        ev.status = "no freeze detected";
        return ev;
    }

    const long n = long(days.size());
    auto date_of = [&](long i) { return start + int(i); };

    // FUE: first observed frozen day of the surviving run.
    ev.fue = date_of(frozen->first);
    ev.ice_on = ev.fue;
    // Uncertainty: observation gap immediately before FUE.
    long gap = 0;
    for (long i = frozen->first - 1; i >= 0 && day_quals[i] == DayQual::missing; --i) ++gap;
    ev.fue_uncertainty_days = int(gap);

    // FUS: last open-qualified observation before FUE.
    for (long i = frozen->first - 1; i >= 0; --i) {
        if (days[i] == DayQual::open) {
            ev.fus = date_of(i);
            break;
        }
    }

    // BUS: first open-qualified observation after the frozen run.
    long bus_idx = -1;
    for (long i = frozen->last + 1; i < n; ++i) {
        if (day_quals[i] == DayQual::open) {
            bus_idx = i;
            break;
        }
    }
    if (bus_idx >= 0) {
        ev.bus = date_of(bus_idx);
        ev.ice_off = ev.bus;
        gap = 0;
        for (long i = bus_idx - 1; i > frozen->last && day_quals[i] == DayQual::missing; --i) ++gap;
        ev.bus_uncertainty_days = int(gap);

        // BUE: first day of the surviving open run at or after BUS. When BUS
        // already falls inside a surviving run the two coincide (sharp melt).
        for (const Run& r : runs) {
            if (r.state == DayQual::open && r.last >= bus_idx) {
                ev.bue = r.first >= bus_idx ? date_of(r.first) : ev.bus;
                break;
            }
        }
        if (!ev.bue) ev.warnings.push_back("no stable open period after break-up start");
    } else {
        ev.warnings.push_back("no open observation after the frozen period");
    }
    return ev;
}

TwoStepResult two_step_phenology(const DailyLakeSeries& series, const PhenologyParams& params) {
    if (series.days.empty()) throw insufficient_data_error("phenology: empty daily series");
    TwoStepResult res;

    res.nir_despiked = despike(series.mean_nir_series(), params.despike_k);
    res.nir_bounds = bound_curves(res.nir_despiked, params.bound_window_days);

    // Step one: NIR state per day, and the LSWT partitions it induces.
    std::vector<double> frozen_pool, open_pool;
    res.nir_states.reserve(series.days.size());
    for (const DailyRecord& day : series.days) {
        const NirState st = nir_state(frac_above(day.nir_samples, params.nir_frozen_refl),
                                      frac_below(day.nir_samples, params.nir_open_refl),
                                      params.majority);
        res.nir_states.push_back(st);
        if (st == NirState::frozen)
            frozen_pool.insert(frozen_pool.end(), day.lswt_samples.begin(),
                               day.lswt_samples.end());
        else if (st == NirState::open)
            open_pool.insert(open_pool.end(), day.lswt_samples.begin(), day.lswt_samples.end());
    }

    // Step two: self-derived LSWT thresholds, falling back to freezing point.
    res.thresholds = lswt_thresholds(frozen_pool, open_pool, params.min_partition_samples);
    double thr_frozen, thr_open;
    if (res.thresholds.frozen_k) {
        thr_frozen = *res.thresholds.frozen_k;
    } else {
        thr_frozen = params.fallback_threshold_k;
        res.thresholds.warnings.push_back("frozen threshold fell back to fixed 273.15 K");
    }
    if (res.thresholds.open_k) {
        thr_open = *res.thresholds.open_k;
    } else {
        thr_open = params.fallback_threshold_k;
        res.thresholds.warnings.push_back("open threshold fell back to fixed 273.15 K");
    }

    res.day_quals.reserve(series.days.size());
    for (const DailyRecord& day : series.days) {
        if (day.lswt_samples.empty()) {
            res.day_quals.push_back(DayQual::missing);
            continue;
        }
        const bool frozen_q = frac_below(day.lswt_samples, thr_frozen) >= params.majority;
        const bool open_q = frac_above(day.lswt_samples, thr_open) >= params.majority;
        if (frozen_q == open_q) {
            res.day_quals.push_back(DayQual::undecided);
        } else {
            res.day_quals.push_back(frozen_q ? DayQual::frozen : DayQual::open);
        }
    }

    res.events = extract_phenology(series.days.front().date, res.day_quals,
                                   params.suppression_window_days);
    for (const std::string& w : res.thresholds.warnings) res.events.warnings.push_back(w);
    return res;
}

}  // namespace lakeice
