#include "lakeice/lswt.hpp"

#include <algorithm>
#include <cmath>

namespace lakeice {

namespace {

constexpr double kLswtSaneMin = 200.0;
constexpr double kLswtSaneMax = 330.0;

// Effective wavelength of the band in micrometers.
double band_um(const BandSpec& band) { return 1e4 / band.wavenumber(); }

}  // namespace

void AtmParams::validate() const {
    if (!(tau > 0.0 && tau <= 1.0)) throw validation_error("atm: tau must be in (0, 1]");
    if (l_up < 0.0 || l_down < 0.0) throw validation_error("atm: path radiances must be >= 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw validation_error("atm: emissivity must be in (0, 1]");
}

double planck_radiance(double temperature_k, const BandSpec& band) {
    if (temperature_k <= 0.0) throw validation_error("planck_radiance: T must be > 0");
    const double lam = band_um(band);
    const double lam5 = lam * lam * lam * lam * lam;
    return kPlanckC1 / lam5 / std::expm1(kPlanckC2 / (lam * temperature_k));
}

double inverse_planck(double radiance, const BandSpec& band) {
    if (radiance <= 0.0) throw validation_error("inverse_planck: radiance must be > 0");
    const double lam = band_um(band);
    const double lam5 = lam * lam * lam * lam * lam;
    return kPlanckC2 / lam / std::log1p(kPlanckC1 / lam5 / radiance);
}

double simulate_toa_radiance(double surface_temp_k, const AtmParams& atm, const BandSpec& band) {
    atm.validate();
    return atm.tau * (atm.epsilon * planck_radiance(surface_temp_k, band) +
                      (1.0 - atm.epsilon) * atm.l_down) +
           atm.l_up;
}

LswtResult invert_pmw(double measured_radiance, const AtmParams& atm, const BandSpec& band) {
    atm.validate();
    const double tau_eps = atm.tau * atm.epsilon;
    if (tau_eps < 1e-6) throw numeric_error("invert_pmw: tau*epsilon below 1e-6, atmosphere singular");
    const double ground =
        (measured_radiance - atm.l_up - atm.tau * (1.0 - atm.epsilon) * atm.l_down) / tau_eps;
    if (ground <= 0.0) return LswtResult{0.0, LswtQuality::out_of_range};
    const double tb = inverse_planck(ground, band);
    const double lswt = (tb - band.beta) / band.alpha;
    if (lswt < kLswtSaneMin || lswt > kLswtSaneMax)
        return LswtResult{lswt, LswtQuality::out_of_range};
    return LswtResult{lswt, LswtQuality::ok};
}

LinearFit fit_lswt_regression(const std::vector<std::pair<double, double>>& t_bt_pairs) {
    if (t_bt_pairs.size() < 2) throw validation_error("regression: need at least 2 samples");
    double sx = 0.0, sy = 0.0;
    for (const auto& [t, bt] : t_bt_pairs) {
        sx += bt;
        sy += t;
    }
    const double n = double(t_bt_pairs.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [t, bt] : t_bt_pairs) {
        sxx += (bt - mx) * (bt - mx);
        sxy += (bt - mx) * (t - my);
    }
    if (sxx == 0.0) throw numeric_error("regression: all brightness temperatures equal");
    const double slope = sxy / sxx;
    return LinearFit{slope, my - slope * mx};
}

std::vector<std::pair<double, double>> simulate_regression_samples(double t_skin_k,
                                                                   const AtmParams& atm,
                                                                   const BandSpec& band) {
    std::vector<std::pair<double, double>> samples;
    samples.reserve(21);
    for (int k = -5; k <= 15; ++k) {
        const double t = t_skin_k + double(k);
        const double toa = simulate_toa_radiance(t, atm, band);
        samples.emplace_back(t, inverse_planck(toa, band));
    }
    return samples;
}

RasterGrid retrieve_lswt_grid(const RasterGrid& measured_radiance, const AtmGrids& atm,
                              const BandSpec& band) {
    measured_radiance.validate();
    const GridGeometry& g = measured_radiance.geom;
    if (!atm.tau || !atm.l_up || !atm.l_down)
        throw validation_error("retrieve_lswt_grid: tau, l_up, l_down grids required");
    for (const RasterGrid* grid : {atm.tau, atm.l_up, atm.l_down, atm.epsilon}) {
        if (grid && !grid->geom.same_placement(g))
            throw validation_error("retrieve_lswt_grid: atmosphere grid not co-registered");
    }

    RasterGrid out(g, measured_radiance.nodata, measured_radiance.nodata);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double l = measured_radiance.values[i];
        if (l == measured_radiance.nodata) continue;
        if (atm.tau->values[i] == atm.tau->nodata || atm.l_up->values[i] == atm.l_up->nodata ||
            atm.l_down->values[i] == atm.l_down->nodata)
            continue;
        AtmParams params{atm.tau->values[i], atm.l_up->values[i], atm.l_down->values[i], 0.0,
                         atm.epsilon ? atm.epsilon->values[i] : atm.epsilon_constant};
        const LswtResult res = invert_pmw(l, params, band);
        if (res.quality == LswtQuality::ok) out.values[i] = res.lswt_k;
    }
    return out;
}

ValidationStats validation_stats(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw validation_error("validation_stats: need paired series of equal length >= 2");
    const double n = double(a.size());
    double bias = 0.0, mse = 0.0, ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        bias += d;
        mse += d * d;
        ma += a[i];
        mb += b[i];
    }
    bias /= n;
    mse /= n;
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    ValidationStats stats{bias, std::sqrt(mse), std::nullopt};
    if (saa > 0.0 && sbb > 0.0) stats.r2 = (sab * sab) / (saa * sbb);
    return stats;
}

MatchReport match_observations(const std::vector<SatWindow>& sat,
                               const std::vector<std::pair<DateTime, double>>& insitu,
                               int max_dt_minutes) {
    for (std::size_t i = 1; i < sat.size(); ++i) {
        if (sat[i].time < sat[i - 1].time)
            throw validation_error("match_observations: satellite series not time-sorted");
    }
    for (std::size_t i = 1; i < insitu.size(); ++i) {
        if (insitu[i].first < insitu[i - 1].first)
            throw validation_error("match_observations: in-situ series not time-sorted");
    }

    MatchReport report;
    const std::int64_t max_dt = std::int64_t(max_dt_minutes) * 60;
    for (const SatWindow& w : sat) {
        // Closest in-situ sample by time.
        std::int64_t best_dt = max_dt + 1;
        const std::pair<DateTime, double>* best = nullptr;
        for (const auto& s : insitu) {
            const std::int64_t dt =
                std::abs(s.first.epoch_seconds() - w.time.epoch_seconds());
            if (dt < best_dt) {
                best_dt = dt;
                best = &s;
            }
        }
        if (!best) {
            ++report.unmatched_sat;
            continue;
        }

        std::size_t n_cloudy = 0;
        double sum = 0.0;
        std::size_t n_clear = 0;
        for (std::size_t i = 0; i < w.values.size(); ++i) {
            if (i < w.cloudy.size() && w.cloudy[i]) {
                ++n_cloudy;
            } else {
                sum += w.values[i];
                ++n_clear;
            }
        }
        if (n_clear == 0) {
            ++report.unmatched_sat;
            continue;
        }
        report.pairs.push_back(MatchedPair{w.time, best->first, sum / double(n_clear),
                                           best->second, n_cloudy > 2});
    }
    return report;
}

}  // namespace lakeice
