#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lakeice/geometry.hpp"
#include "lakeice/raster.hpp"

namespace lakeice {

enum class PixelClass : std::uint8_t { outside = 0, mixed = 1, clean = 2 };

/// Per-pixel lake membership on a grid. Clean pixels are those whose
/// footprint lies entirely within the outline, tested at the four corners
/// plus the center; a pixel only marginally on land is not clean.
struct LakeMask {
    GridGeometry geom;
    std::vector<PixelClass> classes;

    PixelClass at(std::size_t row, std::size_t col) const {
        return classes[row * geom.ncols + col];
    }
    std::size_t count(PixelClass c) const;
};

LakeMask rasterize_outline(const LakeOutline& outline, const GridGeometry& geom);

/// Demotes clean pixels whose center lies within buffer_m of the outline
/// polyline to mixed. buffer 0 is the identity.
LakeMask buffered_lake_mask(const LakeMask& mask, const LakeOutline& outline, double buffer_m);

enum class CloudCode : std::uint8_t {
    confident_clear = 0,
    probably_clear = 1,
    uncertain_clear = 2,
    cloudy = 3
};

struct CloudMask {
    GridGeometry geom;
    bool binary = false;  // binary masks hold only confident_clear / cloudy
    std::vector<CloudCode> codes;

    CloudCode at(std::size_t row, std::size_t col) const { return codes[row * geom.ncols + col]; }
    bool is_cloudy(std::size_t row, std::size_t col) const;
};

/// Conservative grouping: {cloudy, uncertain_clear} -> cloudy,
/// {probably_clear, confident_clear} -> clear. Idempotent on binary input.
CloudMask binarize_cloud_mask(const CloudMask& mask);

/// Reads a four-level cloud mask from an ESRI ASCII grid with integer codes
/// 0..3. Unknown codes are a parse error.
CloudMask read_cloud_mask(const std::string& path);

struct CloudFractionOptions {
    bool fall_back_to_mixed = false;  // use mixed pixels when a lake has no clean ones
};

/// Fraction of cloudy pixels among the lake's clean pixels.
double cloud_fraction(const CloudMask& clouds, const LakeMask& lake,
                      const CloudFractionOptions& opt = {});

/// An acquisition is processed only when at least 30% of the lake pixels are
/// cloud-free; exactly 70% cloudy is still processable.
bool is_processable(double cloudy_fraction, double max_cloudy = 0.70);

/// IceMap export codes (see icedetect.hpp for the map itself).
void write_class_grid(const GridGeometry& geom, const std::vector<std::uint8_t>& codes,
                      const std::string& path, double nodata = 255);

}  // namespace lakeice
