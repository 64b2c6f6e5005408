#pragma once

#include <memory>
#include <vector>

#include "lakeice/mask.hpp"

namespace lakeice {

/// Estimated absolute geolocation error, in pixels.
struct GeoShift {
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n_lakes_used = 0;
    std::size_t n_dates_used = 0;
};

enum class ShiftRounding { none, nearest };

struct ShiftEstimationParams {
    double search_px = 3.0;              // half-width of the shift search window
    double fine_step_px = 0.05;
    double min_cloudfree_fraction = 0.40;
    std::size_t min_clean_pixels = 500;  // lakes below this are skipped
    bool require_corner_coverage = true; // usable lakes in >= 3 of 4 image quadrants
};

struct ShiftAcquisition {
    const RasterGrid* reference_band = nullptr;
    const CloudMask* clouds = nullptr;  // binary
};

/// Per date: Otsu-threshold the reference band into a water mask around each
/// usable lake, maximize Dice overlap between the mask and the coverage
/// fraction of the shifted outline over a +-search_px window (coarse-to-fine
/// with parabolic subpixel refinement), then average the per-lake shifts
/// weighted by cloud-free pixel count. Date means are averaged unweighted.
GeoShift estimate_geolocation_shift(const std::vector<ShiftAcquisition>& acquisitions,
                                    const std::vector<LakeOutline>& outlines,
                                    const ShiftEstimationParams& params = {});

/// Prepared water mask and patch for scoring one lake on one acquisition.
/// Building it runs the Otsu thresholding once; scores at many candidate
/// shifts can then be evaluated cheaply (exhaustive-search oracle in tests).
class ShiftScoreContext {
public:
    ShiftScoreContext(const RasterGrid& reference_band, const CloudMask& clouds,
                      const LakeOutline& outline, double margin_px = 4.0);
    ~ShiftScoreContext();
    ShiftScoreContext(ShiftScoreContext&&) noexcept;
    ShiftScoreContext& operator=(ShiftScoreContext&&) noexcept;

    double score(double sx_px, double sy_px) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-off convenience wrapper around ShiftScoreContext.
double shift_overlap_score(const RasterGrid& reference_band, const CloudMask& clouds,
                           const LakeOutline& outline, double sx_px, double sy_px);

/// Translates outline vertices by (-sx*dx, -sy*dy) so that re-rasterization
/// aligns with the imagery. Rounding nearest rounds the pixel shift first.
LakeOutline apply_shift(const LakeOutline& outline, const GeoShift& shift, double dx_m, double dy_m,
                        ShiftRounding rounding);

}  // namespace lakeice
