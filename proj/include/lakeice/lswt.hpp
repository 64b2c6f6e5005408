#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lakeice/core.hpp"
#include "lakeice/raster.hpp"

namespace lakeice {

/// Radiation constants of the Planck function for spectral radiance in
/// W m^-2 sr^-1 um^-1 with wavelength in micrometers.
inline constexpr double kPlanckC1 = 1.191042e8;   // W um^4 m^-2 sr^-1
inline constexpr double kPlanckC2 = 1.4387752e4;  // um K

/// Thermal band description. nu_c defaults to 1e4/center_wavelength_um
/// (wavenumber in cm^-1); alpha/beta default to the monochromatic
/// approximation and may be supplied per band from configuration.
struct BandSpec {
    std::string name = "I5";
    double center_um = 11.45;
    double nu_c = 0.0;     // cm^-1; 0 means derive from center_um
    double alpha = 1.0;
    double beta = 0.0;     // K

    double wavenumber() const { return nu_c > 0.0 ? nu_c : 1e4 / center_um; }
};

struct AtmParams {
    double tau = 1.0;       // transmittance, (0, 1]
    double l_up = 0.0;      // upwelling path radiance
    double l_down = 0.0;    // downwelling path radiance
    double theta_deg = 0.0; // view zenith angle
    double epsilon = 1.0;   // surface emissivity, (0, 1]

    void validate() const;
};

enum class LswtQuality { ok, cloud, out_of_range };

struct LswtResult {
    double lswt_k = 0.0;
    LswtQuality quality = LswtQuality::ok;
};

/// Planck spectral radiance at the band's effective wavelength 1e4/nu_c um,
/// in W m^-2 sr^-1 um^-1. All radiances (measured, path, simulated) share
/// this convention. Strictly increasing in T.
double planck_radiance(double temperature_k, const BandSpec& band);
double inverse_planck(double radiance, const BandSpec& band);

/// Top-of-atmosphere radiance: L = tau (eps B(Ts) + (1 - eps) Ldown) + Lup.
double simulate_toa_radiance(double surface_temp_k, const AtmParams& atm, const BandSpec& band);

/// Direct inversion: extract the ground radiance, invert Planck to the
/// brightness temperature, then apply the band correction (Tb - beta)/alpha.
/// Results outside [200, 330] K and non-physical ground radiances are flagged
/// out_of_range rather than clamped.
LswtResult invert_pmw(double measured_radiance, const AtmParams& atm, const BandSpec& band);

struct LinearFit {
    double slope = 1.0;
    double intercept = 0.0;
    double evaluate(double x) const { return slope * x + intercept; }
};

/// Ordinary least squares of surface temperature on simulated brightness
/// temperature; retrieval is then a*BT + b.
LinearFit fit_lswt_regression(const std::vector<std::pair<double, double>>& t_bt_pairs);

/// The 21-point sampling grid T_skin - 5 .. T_skin + 15 K in 1 K steps,
/// pushed through the forward model and inverse Planck.
std::vector<std::pair<double, double>> simulate_regression_samples(double t_skin_k,
                                                                   const AtmParams& atm,
                                                                   const BandSpec& band);

/// Per-pixel atmospheric parameter grids, the raster-borne alternative to a
/// scene-constant CSV row. Epsilon may stay scene-constant (leave it null).
struct AtmGrids {
    const RasterGrid* tau = nullptr;
    const RasterGrid* l_up = nullptr;
    const RasterGrid* l_down = nullptr;
    const RasterGrid* epsilon = nullptr;  // optional
    double epsilon_constant = 0.99;
};

/// Per-pixel PMW retrieval: inverts each measured-radiance pixel with the
/// atmospheric parameters of that pixel. Nodata and flagged pixels come out
/// as nodata.
RasterGrid retrieve_lswt_grid(const RasterGrid& measured_radiance, const AtmGrids& atm,
                              const BandSpec& band);

struct ValidationStats {
    double bias = 0.0;   // mean(a - b)
    double rmse = 0.0;
    std::optional<double> r2;  // squared Pearson correlation; missing on zero variance
};

ValidationStats validation_stats(const std::vector<double>& a, const std::vector<double>& b);

/// One satellite observation: a pixel window (typically 3x3) with per-pixel
/// cloud flags, timestamped at granule start.
struct SatWindow {
    DateTime time;
    std::vector<double> values;
    std::vector<bool> cloudy;
};

struct MatchedPair {
    DateTime sat_time;
    DateTime insitu_time;
    double sat_mean = 0.0;      // mean over cloud-clear window pixels
    double insitu_value = 0.0;
    bool cloud_flagged = false; // more than 2 window pixels obscured
};

struct MatchReport {
    std::vector<MatchedPair> pairs;
    std::size_t unmatched_sat = 0;
};

/// Pairs each satellite window with the closest in-situ sample within max_dt.
MatchReport match_observations(const std::vector<SatWindow>& sat,
                               const std::vector<std::pair<DateTime, double>>& insitu,
                               int max_dt_minutes = 30);

}  // namespace lakeice
