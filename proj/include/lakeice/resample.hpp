#pragma once

#include "lakeice/raster.hpp"

namespace lakeice {

/// Bilinear interpolation between the four cell centers surrounding (x, y),
/// clamped to the border cells outside the center lattice. If any of the four
/// neighbours is nodata the nearest valid neighbour wins; all nodata -> nodata.
double bilinear_sample(const RasterGrid& grid, double x, double y);

double nearest_sample(const RasterGrid& grid, double x, double y);

/// Resamples to a finer target geometry by sampling at target cell centers.
/// The target extent must match the source extent (the finer cell size must
/// divide it).
RasterGrid upsample_bilinear(const RasterGrid& grid, const GridGeometry& target);
RasterGrid upsample_nearest(const RasterGrid& grid, const GridGeometry& target);

}  // namespace lakeice
