#include "lakeice/resample.hpp"

#include <algorithm>
#include <cmath>

namespace lakeice {

namespace {

std::size_t clamp_index(long i, std::size_t n) {
    return std::size_t(std::clamp(i, 0l, long(n) - 1));
}

void check_target(const RasterGrid& grid, const GridGeometry& target) {
    grid.validate();
    if (target.ncols < 1 || target.nrows < 1 || target.dx <= 0.0 || target.dy <= 0.0)
        throw validation_error("upsample: invalid target geometry");
    const double eps = 1e-6;
    if (std::abs(target.xmin() - grid.geom.xmin()) > eps ||
        std::abs(target.ymax() - grid.geom.ymax()) > eps ||
        std::abs(target.xmax() - grid.geom.xmax()) > eps ||
        std::abs(target.ymin() - grid.geom.ymin()) > eps)
        throw validation_error("upsample: target extent does not match source extent");
}

}  // namespace

double nearest_sample(const RasterGrid& grid, double x, double y) {
    const long c = long(std::floor((x - grid.geom.x0) / grid.geom.dx));
    const long r = long(std::floor((grid.geom.y0 - y) / grid.geom.dy));
    return grid.at(clamp_index(r, grid.geom.nrows), clamp_index(c, grid.geom.ncols));
}

double bilinear_sample(const RasterGrid& grid, double x, double y) {
    // Fractional position on the cell-center lattice.
    const double u = (x - grid.geom.x0) / grid.geom.dx - 0.5;
    const double v = (grid.geom.y0 - y) / grid.geom.dy - 0.5;
    const long c0 = long(std::floor(u));
    const long r0 = long(std::floor(v));
    const double fu = u - double(c0);
    const double fv = v - double(r0);

    const std::size_t cl = clamp_index(c0, grid.geom.ncols);
    const std::size_t cr = clamp_index(c0 + 1, grid.geom.ncols);
    const std::size_t rt = clamp_index(r0, grid.geom.nrows);
    const std::size_t rb = clamp_index(r0 + 1, grid.geom.nrows);

    const double q[4] = {grid.at(rt, cl), grid.at(rt, cr), grid.at(rb, cl), grid.at(rb, cr)};
    const double w[4] = {(1 - fu) * (1 - fv), fu * (1 - fv), (1 - fu) * fv, fu * fv};

    bool any_nodata = false;
    for (double val : q) any_nodata = any_nodata || val == grid.nodata;
    if (!any_nodata) return q[0] * w[0] + q[1] * w[1] + q[2] * w[2] + q[3] * w[3];

    // Nearest valid neighbour fallback; all nodata -> nodata.
    int best = -1;
    for (int i = 0; i < 4; ++i) {
        if (q[i] == grid.nodata) continue;
        if (best < 0 || w[i] > w[best]) best = i;
    }
    return best < 0 ? grid.nodata : q[best];
}

namespace {

template <typename SampleFn>
RasterGrid resample_with(const RasterGrid& grid, const GridGeometry& target, SampleFn sample) {
    check_target(grid, target);
    RasterGrid out(target, 0.0, grid.nodata);
    for (std::size_t r = 0; r < target.nrows; ++r) {
        const double y = target.cell_center_y(r);
        for (std::size_t c = 0; c < target.ncols; ++c) {
            out.at(r, c) = sample(grid, target.cell_center_x(c), y);
        }
    }
    return out;
}

}  // namespace

RasterGrid upsample_bilinear(const RasterGrid& grid, const GridGeometry& target) {
    return resample_with(grid, target, bilinear_sample);
}

RasterGrid upsample_nearest(const RasterGrid& grid, const GridGeometry& target) {
    return resample_with(grid, target, nearest_sample);
}

}  // namespace lakeice
