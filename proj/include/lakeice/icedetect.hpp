#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lakeice/mask.hpp"
#include "lakeice/raster.hpp"

namespace lakeice {

/// Ice test thresholds. The defaults are the published triple; all strict
/// inequalities (NDSI > ndsi_min, I2 > i2_refl_min, LSWT < lswt_max).
struct IceThresholds {
    double ndsi_min = 0.45;
    double i2_refl_min = 0.08;
    double lswt_max_k = 275.0;
    bool strict = true;  // false switches to >= / <= for sensitivity studies

    void validate() const;
};

enum class IceState : std::uint8_t { open_water = 0, ice = 1, cloud = 2, outside = 255 };

struct IceMap {
    GridGeometry geom;
    std::vector<IceState> states;

    IceState at(std::size_t row, std::size_t col) const { return states[row * geom.ncols + col]; }
};

struct IceSummary {
    std::size_t n_ice = 0;
    std::size_t n_water = 0;
    std::size_t n_cloud = 0;
};

/// (r1 - r2) / (r1 + r2). NaN when both reflectances are zero.
double ndsi(double r1, double r2);

IceState classify_pixel(double ndsi_value, double i2_refl, double lswt_k, const IceThresholds& thr,
                        bool cloudy);

/// Per clean pixel of the (possibly buffered) lake mask: NDSI from I2 and I3,
/// the temperature veto from the LSWT grid, cloud and invalid pixels flagged.
/// Grids must share the lake mask geometry.
struct IceMapResult {
    IceMap map;
    IceSummary summary;
};
IceMapResult ice_map(const RasterGrid& i2_refl, const RasterGrid& i3_refl,
                     const RasterGrid& lswt_k, const CloudMask& clouds, const LakeMask& lake,
                     const IceThresholds& thr = {});

/// ESRI ASCII export with codes 0=open_water, 1=ice, 2=cloud, 255=outside,
/// plus a JSON summary sidecar `<path>.summary.json`.
void write_ice_map(const IceMapResult& result, const std::string& path);

}  // namespace lakeice
