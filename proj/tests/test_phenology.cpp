#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lakeice/phenology.hpp"

using namespace lakeice;

TEST_SUITE_BEGIN("phenology");

namespace {

const Date kStart(2016, 10, 1);

DailySeries series_of(std::vector<double> values) { return DailySeries{kStart, std::move(values)}; }

}  // namespace

TEST_CASE("aggregate_daily pools same-day acquisitions") {
    std::vector<AcquisitionSamples> acqs;
    acqs.push_back({kStart, {0.5, 0.5}, {270.0, 270.0}});
    acqs.push_back({kStart, {0.5, 0.5}, {272.0, 272.0}});
    acqs.push_back({kStart + 2, {0.1}, {280.0}});
    const DailyLakeSeries daily = aggregate_daily(acqs);

    REQUIRE(daily.days.size() == 3);  // missing day is explicit
    CHECK(daily.days[0].n_obs == 2);
    CHECK(daily.days[0].mean_lswt == doctest::Approx(271.0));  // equal clear counts
    CHECK(daily.days[1].n_obs == 0);
    CHECK(is_missing(daily.days[1].mean_lswt));
    CHECK(daily.days[2].mean_lswt == doctest::Approx(280.0));
}

TEST_CASE("fractions against thresholds") {
    // 10 pixels, 7 above 0.4.
    std::vector<double> nir{0.5, 0.6, 0.7, 0.45, 0.41, 0.8, 0.55, 0.1, 0.2, 0.3};
    CHECK(frac_above(nir, 0.4) == doctest::Approx(0.7));
    CHECK(frac_below(nir, 0.15) == doctest::Approx(0.1));
}

TEST_CASE("despike fixtures") {
    SUBCASE("constant series unchanged") {
        const DailySeries out = despike(series_of(std::vector<double>(20, 5.0)));
        for (double v : out.values) CHECK(v == doctest::Approx(5.0));
    }
    SUBCASE("single spike absorbed") {
        std::vector<double> v(15, 5.0);
        v[7] = 50.0;
        const DailySeries out = despike(series_of(v));
        for (double x : out.values) CHECK(x == doctest::Approx(5.0));
    }
    SUBCASE("two consecutive outliers on a ramp are removed and re-filled") {
        // 10-point ramp 1..10 with days 4 and 5 replaced by spikes.
        std::vector<double> v{1, 2, 3, 4, 50, 60, 7, 8, 9, 10};
        const DailySeries out = despike(series_of(v));
        // The gate removes both, interpolation bridges 4 -> 7.
        CHECK(out.values[4] == doctest::Approx(5.0).epsilon(0.1));
        CHECK(out.values[5] == doctest::Approx(6.0).epsilon(0.1));
        for (std::size_t i = 0; i < out.values.size(); ++i) CHECK_FALSE(is_missing(out.values[i]));
    }
    SUBCASE("interior gaps are interpolated, edges stay missing") {
        std::vector<double> v(10, missing_value());
        v[2] = 2.0;
        v[6] = 10.0;
        const DailySeries out = despike(series_of(v));
        CHECK(is_missing(out.values[0]));
        CHECK(is_missing(out.values[1]));
        CHECK(out.values[4] == doctest::Approx(6.0));
        CHECK(is_missing(out.values[9]));
    }
    SUBCASE("all-missing series is an error") {
        CHECK_THROWS_AS(despike(series_of(std::vector<double>(5, missing_value()))), Error);
    }
    SUBCASE("idempotent on its own output") {
        std::vector<double> v{1, 2, 3, 4, 50, 60, 7, 8, 9, 10, 10, 9, 8, 8, 8};
        const DailySeries once = despike(series_of(v));
        const DailySeries twice = despike(once);
        for (std::size_t i = 0; i < once.values.size(); ++i)
            CHECK(twice.values[i] == doctest::Approx(once.values[i]));
    }
}

namespace {

// Brute-force oracle for the raw bound curves.
double oracle_lower(const std::vector<double>& v, long i, long w) {
    double best = -std::numeric_limits<double>::infinity();
    for (long t = std::max(0l, i - w + 1); t <= std::min(long(v.size()) - w, i); ++t) {
        double lo = std::numeric_limits<double>::infinity();
        for (long j = t; j < t + w; ++j) lo = std::min(lo, v[j]);
        best = std::max(best, lo);
    }
    return best;
}

double oracle_upper(const std::vector<double>& v, long i, long w) {
    double best = std::numeric_limits<double>::infinity();
    for (long t = std::max(0l, i - w + 1); t <= std::min(long(v.size()) - w, i); ++t) {
        double hi = -std::numeric_limits<double>::infinity();
        for (long j = t; j < t + w; ++j) hi = std::max(hi, v[j]);
        best = std::min(best, hi);
    }
    return best;
}

}  // namespace

TEST_CASE("bound_curves") {
    SUBCASE("constant series collapses both bounds") {
        const BoundCurves bc = bound_curves(series_of(std::vector<double>(40, 0.3)));
        for (double v : bc.lower.values) CHECK(v == doctest::Approx(0.3));
        for (double v : bc.upper.values) CHECK(v == doctest::Approx(0.3));
    }
    SUBCASE("square wave: bounds track the plateaus on plateau interiors") {
        std::vector<double> v;
        for (int rep = 0; rep < 3; ++rep) {
            v.insert(v.end(), 20, 0.1);
            v.insert(v.end(), 20, 0.6);
        }
        const BoundCurves bc = bound_curves(series_of(v));
        // Deep interior of a low plateau: lower == 0.1; of a high: upper == 0.6.
        CHECK(bc.lower.values[50] == doctest::Approx(0.1));
        CHECK(bc.upper.values[70] == doctest::Approx(0.6));
        // Raw-curve brute force oracle across the whole series.
        for (long i = 0; i < long(v.size()); ++i) {
            CHECK(bc.lower_raw.values[i] == doctest::Approx(oracle_lower(v, i, 15)));
            CHECK(bc.upper_raw.values[i] == doctest::Approx(oracle_upper(v, i, 15)));
        }
    }
    SUBCASE("monotone ramp: raw envelope brackets the series") {
        std::vector<double> v;
        for (int k = 0; k < 45; ++k) v.push_back(0.01 * k);
        const BoundCurves bc = bound_curves(series_of(v));
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(bc.lower_raw.values[i] <= v[i] + 1e-12);
            CHECK(bc.upper_raw.values[i] >= v[i] - 1e-12);
        }
    }
    SUBCASE("series shorter than the window is an error") {
        CHECK_THROWS_AS(bound_curves(series_of(std::vector<double>(10, 1.0))), Error);
    }
}

TEST_CASE("nir_state rules") {
    CHECK(nir_state(0.9, 0.0) == NirState::frozen);
    CHECK(nir_state(0.0, 0.8) == NirState::open);
    CHECK(nir_state(0.5, 0.5) == NirState::undecided);
    CHECK(nir_state(0.70, 0.1) == NirState::frozen);  // inclusive majority
    CHECK(nir_state(missing_value(), missing_value()) == NirState::missing);
}

TEST_CASE("nearest-rank percentiles") {
    // Uniform {269, 269.25, ..., 271}: nine samples, rank ceil(0.9*9)=9.
    std::vector<double> frozen;
    for (int k = 0; k < 9; ++k) frozen.push_back(269.0 + 0.25 * k);
    CHECK(nearest_rank_percentile(frozen, 90.0) == doctest::Approx(271.0));
    // Ten samples: rank ceil(0.9*10)=9 -> the 9th smallest.
    frozen.push_back(271.25);
    CHECK(nearest_rank_percentile(frozen, 90.0) == doctest::Approx(271.0));
    CHECK(nearest_rank_percentile({278.0, 278.0, 278.0}, 10.0) == doctest::Approx(278.0));

    SUBCASE("stable under duplicating an existing value at the same rank") {
        std::vector<double> base{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        const double p90 = nearest_rank_percentile(base, 90.0);
        std::vector<double> dup = base;
        dup.push_back(p90);  // 11 samples, rank ceil(9.9)=10 -> still 9
        CHECK(nearest_rank_percentile(dup, 90.0) == doctest::Approx(p90));
    }
}

TEST_CASE("lswt_thresholds warnings") {
    std::vector<double> frozen(12, 270.0), open(12, 278.0);
    const LswtThresholds ok = lswt_thresholds(frozen, open);
    CHECK(*ok.frozen_k == doctest::Approx(270.0));
    CHECK(*ok.open_k == doctest::Approx(278.0));
    CHECK(ok.warnings.empty());

    const LswtThresholds sparse = lswt_thresholds({270.0, 271.0}, open);
    CHECK(sparse.warnings.size() == 1);

    const LswtThresholds empty = lswt_thresholds({}, open);
    CHECK_FALSE(empty.frozen_k.has_value());
    CHECK_FALSE(empty.warnings.empty());

    // Inverted thresholds on short series warn (open below frozen).
    const LswtThresholds inverted = lswt_thresholds(std::vector<double>(12, 272.0),
                                                    std::vector<double>(12, 268.0));
    bool flagged = false;
    for (const std::string& w : inverted.warnings) flagged |= w.find("below") != std::string::npos;
    CHECK(flagged);
}

namespace {

std::vector<DayQual> season(int open1, int frozen, int open2) {
    std::vector<DayQual> days;
    days.insert(days.end(), open1, DayQual::open);
    days.insert(days.end(), frozen, DayQual::frozen);
    days.insert(days.end(), open2, DayQual::open);
    return days;
}

}  // namespace

TEST_CASE("extract_phenology on a clean season") {
    const auto days = season(60, 80, 60);
    const PhenologyEvents ev = extract_phenology(kStart, days);
    REQUIRE(ev.fus);
    REQUIRE(ev.fue);
    REQUIRE(ev.bus);
    REQUIRE(ev.bue);
    CHECK(*ev.fus == kStart + 59);   // last open day
    CHECK(*ev.fue == kStart + 60);   // first frozen day
    CHECK(*ev.bus == kStart + 140);  // first open day after
    CHECK(*ev.bue == *ev.bus);       // sharp melt
    CHECK(*ev.ice_on == *ev.fue);
    CHECK(*ev.ice_off == *ev.bus);
    CHECK(ev.status == "ok");

    SUBCASE("ordering invariant") {
        CHECK(*ev.fus <= *ev.fue);
        CHECK(*ev.fue <= *ev.bus);
        CHECK(*ev.bus <= *ev.bue);
    }
}

TEST_CASE("extract_phenology suppresses a 3-day autumn blip") {
    auto days = season(60, 80, 60);
    for (int k = 20; k < 23; ++k) days[k] = DayQual::frozen;
    const PhenologyEvents ev = extract_phenology(kStart, days);
    REQUIRE(ev.fue);
    CHECK(*ev.fue == kStart + 60);  // the blip did not become FUE
    CHECK(*ev.bus == kStart + 140);

    SUBCASE("a shorter suppression window keeps the events alive") {
        // Window 7 also suppresses the 3-day blip; events survive either way.
        const PhenologyEvents ev7 = extract_phenology(kStart, days, 7);
        CHECK(ev7.fue.has_value());
        CHECK(ev7.bus.has_value());
    }
}

TEST_CASE("extract_phenology with missing days straddling FUE") {
    auto days = season(60, 80, 60);
    days[59] = DayQual::missing;
    days[60] = DayQual::missing;
    const PhenologyEvents ev = extract_phenology(kStart, days);
    REQUIRE(ev.fue);
    CHECK(*ev.fue == kStart + 61);  // first observed frozen day
    CHECK(ev.fue_uncertainty_days == 2);
}

TEST_CASE("extract_phenology: no freeze detected") {
    const PhenologyEvents ev = extract_phenology(kStart, std::vector<DayQual>(100, DayQual::open));
    CHECK(ev.status == "no freeze detected");
    CHECK_FALSE(ev.fue.has_value());
    CHECK_FALSE(ev.ice_on.has_value());
}

TEST_CASE("extract_phenology: open blip inside the frozen run does not end it") {
    auto days = season(60, 80, 60);
    days[100] = DayQual::open;  // single-day melt artifact
    const PhenologyEvents ev = extract_phenology(kStart, days);
    CHECK(*ev.fue == kStart + 60);
    CHECK(*ev.bus == kStart + 140);
}

TEST_CASE("two_step_phenology end to end on a built season") {
    // 200-day season: open(60) / frozen(80) / open(60); 20 pixels per day.
    std::vector<AcquisitionSamples> acqs;
    for (int d = 0; d < 200; ++d) {
        const bool frozen = d >= 60 && d < 140;
        AcquisitionSamples acq{kStart + d, {}, {}};
        for (int p = 0; p < 20; ++p) {
            acq.nir.push_back(frozen ? 0.55 + 0.001 * p : 0.05 + 0.001 * p);
            acq.lswt.push_back(frozen ? 266.0 + 0.05 * p : 277.0 + 0.05 * p);
        }
        acqs.push_back(std::move(acq));
    }
    const TwoStepResult res = two_step_phenology(aggregate_daily(acqs));

    REQUIRE(res.thresholds.frozen_k);
    REQUIRE(res.thresholds.open_k);
    CHECK(res.nir_states[30] == NirState::open);
    CHECK(res.nir_states[100] == NirState::frozen);
    REQUIRE(res.events.fue);
    CHECK(*res.events.fue == kStart + 60);
    REQUIRE(res.events.bus);
    CHECK(*res.events.bus == kStart + 140);
}

TEST_SUITE_END();
