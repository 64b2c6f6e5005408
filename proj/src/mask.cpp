#include "lakeice/mask.hpp"

#include <algorithm>
#include <cmath>

namespace lakeice {

std::size_t LakeMask::count(PixelClass c) const {
    return std::size_t(std::count(classes.begin(), classes.end(), c));
}

LakeMask rasterize_outline(const LakeOutline& outline, const GridGeometry& geom) {
    LakeOutline ring = make_outline(outline.lake_id, outline.vertices);
    LakeMask mask{geom, std::vector<PixelClass>(geom.size(), PixelClass::outside)};
    const Bounds b = ring_bounds(ring);

    for (std::size_t r = 0; r < geom.nrows; ++r) {
        const double ytop = geom.y0 - double(r) * geom.dy;
        const double ybot = ytop - geom.dy;
        if (ybot > b.ymax || ytop < b.ymin) continue;
        for (std::size_t c = 0; c < geom.ncols; ++c) {
            const double xleft = geom.x0 + double(c) * geom.dx;
            const double xright = xleft + geom.dx;
            if (xleft > b.xmax || xright < b.xmin) continue;

            const Point samples[5] = {{xleft, ybot},
                                      {xright, ybot},
                                      {xleft, ytop},
                                      {xright, ytop},
                                      {(xleft + xright) * 0.5, (ybot + ytop) * 0.5}};
            int inside = 0;
            for (const Point& p : samples) inside += point_in_ring(p, ring) ? 1 : 0;

            if (inside == 5) {
                mask.classes[r * geom.ncols + c] = PixelClass::clean;
                continue;
            }
            bool touches = inside > 0;
            if (!touches) {
                const auto& v = ring.vertices;
                for (std::size_t i = 0; i < v.size() && !touches; ++i) {
                    touches = segment_intersects_rect(v[i], v[(i + 1) % v.size()], xleft, ybot,
                                                      xright, ytop);
                }
            }
            if (touches) mask.classes[r * geom.ncols + c] = PixelClass::mixed;
        }
    }
    return mask;
}

LakeMask buffered_lake_mask(const LakeMask& mask, const LakeOutline& outline, double buffer_m) {
    if (buffer_m < 0.0) throw validation_error("buffered_lake_mask: negative buffer");
    if (buffer_m == 0.0) return mask;
    LakeMask out = mask;
    for (std::size_t r = 0; r < mask.geom.nrows; ++r) {
        for (std::size_t c = 0; c < mask.geom.ncols; ++c) {
            if (mask.at(r, c) != PixelClass::clean) continue;
            const Point center{mask.geom.cell_center_x(c), mask.geom.cell_center_y(r)};
            if (point_ring_distance(center, outline) < buffer_m)
                out.classes[r * mask.geom.ncols + c] = PixelClass::mixed;
        }
    }
    return out;
}

bool CloudMask::is_cloudy(std::size_t row, std::size_t col) const {
    const CloudCode c = at(row, col);
    return c == CloudCode::cloudy || c == CloudCode::uncertain_clear;
}

CloudMask binarize_cloud_mask(const CloudMask& mask) {
    CloudMask out{mask.geom, true, {}};
    out.codes.reserve(mask.codes.size());
    for (CloudCode c : mask.codes) {
        switch (c) {
            case CloudCode::cloudy:
            case CloudCode::uncertain_clear:
                out.codes.push_back(CloudCode::cloudy);
                break;
            case CloudCode::probably_clear:
            case CloudCode::confident_clear:
                out.codes.push_back(CloudCode::confident_clear);
                break;
            default:
                throw validation_error("binarize_cloud_mask: unknown cloud code " +
                                       std::to_string(int(c)));
        }
    }
    return out;
}

CloudMask read_cloud_mask(const std::string& path) {
    const RasterGrid grid = read_esri_ascii(path);
    CloudMask mask{grid.geom, false, {}};
    mask.codes.reserve(grid.values.size());
    for (double v : grid.values) {
        if (v != 0.0 && v != 1.0 && v != 2.0 && v != 3.0)
            throw validation_error(path + ": cloud mask code must be 0..3, got " +
                                   std::to_string(v));
        mask.codes.push_back(CloudCode(int(v)));
    }
    return mask;
}

double cloud_fraction(const CloudMask& clouds, const LakeMask& lake,
                      const CloudFractionOptions& opt) {
    if (!clouds.geom.same_placement(lake.geom))
        throw validation_error("cloud_fraction: cloud mask and lake mask geometry differ");
    auto fraction_over = [&](PixelClass wanted) -> std::pair<std::size_t, std::size_t> {
        std::size_t total = 0, cloudy = 0;
        for (std::size_t r = 0; r < lake.geom.nrows; ++r) {
            for (std::size_t c = 0; c < lake.geom.ncols; ++c) {
                if (lake.at(r, c) != wanted) continue;
                ++total;
                if (clouds.is_cloudy(r, c)) ++cloudy;
            }
        }
        return {cloudy, total};
    };
    auto [cloudy, total] = fraction_over(PixelClass::clean);
    if (total == 0) {
        if (!opt.fall_back_to_mixed)
            throw insufficient_data_error("cloud_fraction: lake has no clean pixels");
        std::tie(cloudy, total) = fraction_over(PixelClass::mixed);
        if (total == 0)
            throw insufficient_data_error("cloud_fraction: lake has no clean or mixed pixels");
    }
    return double(cloudy) / double(total);
}

bool is_processable(double cloudy_fraction, double max_cloudy) {
    return cloudy_fraction <= max_cloudy;
}

void write_class_grid(const GridGeometry& geom, const std::vector<std::uint8_t>& codes,
                      const std::string& path, double nodata) {
    RasterGrid grid(geom, 0.0, nodata);
    for (std::size_t i = 0; i < codes.size(); ++i) grid.values[i] = double(codes[i]);
    write_esri_ascii(grid, path, 0);
}

}  // namespace lakeice
