#include "lakeice/scores.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lakeice {

DailyScoreCube daily_aggregate(const std::vector<ScoredAcquisition>& acquisitions) {
    DailyScoreCube cube;
    if (acquisitions.empty()) return cube;

    cube.n_pixels = acquisitions.front().pixel_scores.size();
    Date first = acquisitions.front().date, last = acquisitions.front().date;
    for (const ScoredAcquisition& a : acquisitions) {
        if (a.pixel_scores.size() != cube.n_pixels)
            throw validation_error("daily_aggregate: pixel count differs between acquisitions");
        first = std::min(first, a.date);
        last = std::max(last, a.date);
    }
    cube.start = first;
    const std::size_t n_days = std::size_t(last - first) + 1;
    cube.scores.assign(n_days * cube.n_pixels, missing_value());

    std::vector<double> sums(n_days * cube.n_pixels, 0.0);
    std::vector<std::size_t> counts(n_days * cube.n_pixels, 0);
    for (const ScoredAcquisition& a : acquisitions) {
        const std::size_t d = std::size_t(a.date - first);
        for (std::size_t p = 0; p < cube.n_pixels; ++p) {
            const double s = a.pixel_scores[p];
            if (is_missing(s)) continue;
            sums[d * cube.n_pixels + p] += s;
            counts[d * cube.n_pixels + p]++;
        }
    }
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (counts[i]) cube.scores[i] = sums[i] / double(counts[i]);
    }
    return cube;
}

std::vector<double> gaussian_window_weights(int window_days) {
    const int half = (window_days - 1) / 2;
    const double sigma = double(window_days) / 4.0;
    std::vector<double> w(std::size_t(window_days), 0.0);
    double total = 0.0;
    for (int k = -half; k <= half; ++k) {
        w[std::size_t(k + half)] = std::exp(-double(k) * double(k) / (2.0 * sigma * sigma));
        total += w[std::size_t(k + half)];
    }
    for (double& v : w) v /= total;
    return w;
}

DailyScoreCube mta_smooth(const DailyScoreCube& cube, MtaScheme scheme, int window_days) {
    if (window_days < 1 || window_days % 2 == 0)
        throw validation_error("mta_smooth: window must be odd and >= 1");
    if (window_days == 1) return cube;

    const int half = (window_days - 1) / 2;
    const long n_days = long(cube.n_days());
    const std::vector<double> gauss =
        scheme == MtaScheme::gaussian ? gaussian_window_weights(window_days) : std::vector<double>();

    DailyScoreCube out = cube;
    for (std::size_t p = 0; p < cube.n_pixels; ++p) {
        for (long d = 0; d < n_days; ++d) {
            if (is_missing(cube.at(std::size_t(d), p))) continue;

            std::vector<double> window;
            double wsum = 0.0, vsum = 0.0;
            for (long j = std::max(0l, d - half); j <= std::min(n_days - 1, d + half); ++j) {
                const double v = cube.at(std::size_t(j), p);
                if (is_missing(v)) continue;
                if (scheme == MtaScheme::gaussian) {
                    const double w = gauss[std::size_t(j - d + half)];
                    wsum += w;
                    vsum += w * v;
                } else {
                    window.push_back(v);
                }
            }
            double& target = out.at(std::size_t(d), p);
            switch (scheme) {
                case MtaScheme::mean: {
                    double s = 0.0;
                    for (double v : window) s += v;
                    target = s / double(window.size());
                    break;
                }
                case MtaScheme::median: {
                    // Fewer than 3 available values would make the median an
                    // average and drift the series ends on repeated passes.
                    if (window.size() < 3) break;
                    std::sort(window.begin(), window.end());
                    const std::size_t n = window.size();
                    target = n % 2 ? window[n / 2] : 0.5 * (window[n / 2 - 1] + window[n / 2]);
                    break;
                }
                case MtaScheme::gaussian:
                    target = vsum / wsum;  // renormalized over available days
                    break;
            }
        }
    }
    return out;
}

double frozen_fraction(const DailyScoreCube& cube, std::size_t day) {
    std::size_t frozen = 0, scored = 0;
    for (std::size_t p = 0; p < cube.n_pixels; ++p) {
        const double s = cube.at(day, p);
        if (is_missing(s)) continue;
        ++scored;
        if (score_is_frozen(s)) ++frozen;
    }
    if (scored == 0) return missing_value();
    return 100.0 * double(frozen) / double(scored);
}

DayLabel label_day(double pct_fp, double threshold) {
    if (is_missing(pct_fp)) return DayLabel::nd;
    return pct_fp >= threshold ? DayLabel::yes : DayLabel::no;
}

DailyLabelSeries label_series(const DailyScoreCube& cube, double threshold) {
    DailyLabelSeries series;
    for (std::size_t d = 0; d < cube.n_days(); ++d) {
        const double fp = frozen_fraction(cube, d);
        DailyLabel day{cube.start + int(d), std::nullopt, label_day(fp, threshold)};
        if (!is_missing(fp)) day.pct_fp = fp;
        series.days.push_back(day);
    }
    return series;
}

IceDates extract_ice_dates(const DailyLabelSeries& labels) {
    for (std::size_t i = 1; i < labels.days.size(); ++i) {
        if (labels.days[i].date < labels.days[i - 1].date)
            throw validation_error("extract_ice_dates: labels not time-sorted");
    }
    std::vector<const DailyLabel*> avail;
    for (const DailyLabel& d : labels.days) {
        if (d.label != DayLabel::nd) avail.push_back(&d);
    }

    IceDates out;
    auto nd_gap_before = [&](Date date) {
        int gap = 0;
        for (auto it = labels.days.rbegin(); it != labels.days.rend(); ++it) {
            if (it->date >= date) continue;
            if (it->label != DayLabel::nd) break;
            ++gap;
        }
        return gap;
    };

    // Ice-on: first frozen day confirmed by the next available observation.
    std::size_t on_idx = avail.size();
    for (std::size_t i = 0; i + 1 < avail.size(); ++i) {
        if (avail[i]->label == DayLabel::yes && avail[i + 1]->label == DayLabel::yes) {
            on_idx = i;
            break;
        }
    }
    if (on_idx == avail.size()) {
        out.status = "no confirmed frozen day pair";
        return out;
    }
    out.ice_on = avail[on_idx]->date;
    out.ice_on_uncertainty_days = nd_gap_before(avail[on_idx]->date);

    // Ice-off: after the frozen spell, the first non-frozen day confirmed by
    // the next available observation.
    bool seen_frozen = false;
    for (std::size_t i = on_idx; i + 1 < avail.size(); ++i) {
        if (avail[i]->label == DayLabel::yes) {
            seen_frozen = true;
            continue;
        }
        if (seen_frozen && avail[i]->label == DayLabel::no &&
            avail[i + 1]->label == DayLabel::no) {
            out.ice_off = avail[i]->date;
            out.ice_off_uncertainty_days = nd_gap_before(avail[i]->date);
            break;
        }
    }
    if (!out.ice_off) out.status = "no confirmed break-up pair after freeze";
    return out;
}

void write_label_series(const DailyLabelSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write label series: " + path);
    out << "date,pct_fp,label\n";
    char buf[32];
    for (const DailyLabel& d : series.days) {
        out << d.date.to_iso() << ',';
        if (d.pct_fp) {
            std::snprintf(buf, sizeof buf, "%.10g", *d.pct_fp);
            out << buf;
        }
        out << ',';
        switch (d.label) {
            case DayLabel::yes: out << 'Y'; break;
            case DayLabel::no: out << 'N'; break;
            case DayLabel::nd: out << "nd"; break;
        }
        out << '\n';
    }
}

DailyLabelSeries read_label_series(const std::string& path, const std::string& lake,
                                   const std::string& method) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open label series: " + path);
    DailyLabelSeries series;
    series.lake = lake;
    series.method = method;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!seen_data && line.rfind("date,", 0) == 0) continue;
        seen_data = true;
        std::stringstream ss(line);
        std::string date_s, pct_s, label_s;
        if (!std::getline(ss, date_s, ',') || !std::getline(ss, pct_s, ',') ||
            !std::getline(ss, label_s))
            throw validation_error(path + ":" + std::to_string(line_no) + ": malformed label row");
        DailyLabel d;
        d.date = Date::parse(date_s);
        if (!pct_s.empty()) d.pct_fp = std::stod(pct_s);
        if (label_s == "Y") {
            d.label = DayLabel::yes;
        } else if (label_s == "N") {
            d.label = DayLabel::no;
        } else if (label_s == "nd") {
            d.label = DayLabel::nd;
        } else {
            throw validation_error(path + ":" + std::to_string(line_no) + ": unknown label '" +
                                   label_s + "'");
        }
        series.days.push_back(d);
    }
    return series;
}

}  // namespace lakeice
