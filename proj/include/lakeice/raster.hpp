#pragma once

#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

/// Grid placement without values. x0,y0 is the upper-left corner in projected
/// meters; dx,dy are the cell sizes (both positive, rows run south).
struct GridGeometry {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 1.0;
    double dy = 1.0;

    std::size_t size() const { return ncols * nrows; }
    double cell_center_x(std::size_t col) const { return x0 + (double(col) + 0.5) * dx; }
    double cell_center_y(std::size_t row) const { return y0 - (double(row) + 0.5) * dy; }
    double xmin() const { return x0; }
    double xmax() const { return x0 + double(ncols) * dx; }
    double ymax() const { return y0; }
    double ymin() const { return y0 - double(nrows) * dy; }

    bool same_placement(const GridGeometry& o, double eps = 1e-6) const;
};

/// One band's values on a grid, row-major from the north-west corner.
struct RasterGrid {
    GridGeometry geom;
    double nodata = -9999.0;
    std::vector<double> values;

    RasterGrid() = default;
    RasterGrid(GridGeometry g, double fill, double nodata_value = -9999.0)
        : geom(g), nodata(nodata_value), values(g.size(), fill) {}

    double& at(std::size_t row, std::size_t col) { return values[row * geom.ncols + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * geom.ncols + col]; }
    bool is_nodata(std::size_t row, std::size_t col) const { return at(row, col) == nodata; }

    void validate() const;
};

/// ESRI ASCII Grid reader. Header keys NCOLS, NROWS, XLLCORNER, YLLCORNER,
/// CELLSIZE, NODATA_VALUE (case-insensitive, NODATA_VALUE optional). Square
/// cells only; a JSON sidecar `<path>.json` with {"dx":..,"dy":..} overrides
/// the cell size for rectangular grids.
RasterGrid read_esri_ascii(const std::string& path);
void write_esri_ascii(const RasterGrid& grid, const std::string& path, int value_precision = 6);

}  // namespace lakeice
