#include "lakeice/shift.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace lakeice {

LakeOutline apply_shift(const LakeOutline& outline, const GeoShift& shift, double dx_m, double dy_m,
                        ShiftRounding rounding) {
    if (!std::isfinite(shift.sx) || !std::isfinite(shift.sy))
        throw validation_error("apply_shift: non-finite shift");
    double sx = shift.sx, sy = shift.sy;
    if (rounding == ShiftRounding::nearest) {
        sx = std::round(sx);
        sy = std::round(sy);
    }
    return translate(outline, -sx * dx_m, -sy * dy_m);
}

namespace {

// Otsu threshold over the given sample values (256 bins).
double otsu_threshold(const std::vector<double>& samples) {
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) return lo;
    constexpr int kBins = 256;
    std::array<std::size_t, kBins> hist{};
    for (double v : samples) {
        int b = int((v - lo) / (hi - lo) * kBins);
        hist[std::clamp(b, 0, kBins - 1)]++;
    }
    const double total = double(samples.size());
    double sum_all = 0.0;
    for (int b = 0; b < kBins; ++b) sum_all += double(b) * double(hist[b]);
    double w0 = 0.0, sum0 = 0.0, best_var = -1.0;
    int best_b = 0;
    for (int b = 0; b + 1 < kBins; ++b) {
        w0 += double(hist[b]);
        if (w0 == 0.0) continue;
        const double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += double(b) * double(hist[b]);
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_b = b;
        }
    }
    return lo + (double(best_b) + 1.0) * (hi - lo) / kBins;
}

/// Scoring state for one lake on one acquisition. The Otsu water mask is
/// computed once; pixels provably unaffected by any candidate shift
/// contribute precomputed constants, so per-shift work touches only a band
/// around the outline.
struct ScoreCore {
    GridGeometry geom;
    LakeOutline outline;
    double max_shift_px = 3.0;

    double sum_water = 0.0;  // cloud-free water pixels in the analysis patch
    double inter_far = 0.0;  // water-and-covered among shift-invariant pixels
    double cov_far = 0.0;

    struct BandPixel {
        double xl, yb, xr, yt;
        bool water;
        std::vector<std::uint16_t> segments;  // ring segments within reach
    };
    std::vector<BandPixel> band;
};

ScoreCore build_core(const RasterGrid& band_grid, const CloudMask& clouds, const LakeMask& lake,
                     const LakeOutline& outline, double max_shift_px) {
    const GridGeometry& g = band_grid.geom;
    if (!clouds.geom.same_placement(g))
        throw validation_error("shift: cloud mask geometry differs from reference band");

    ScoreCore core;
    core.geom = g;
    core.outline = outline;
    core.max_shift_px = max_shift_px;

    const Bounds b = ring_bounds(outline);
    const long margin = long(std::ceil(max_shift_px * M_SQRT2)) + 2;
    const long c0 = std::max(0l, long(std::floor((b.xmin - g.x0) / g.dx)) - margin);
    const long c1 = std::min(long(g.ncols) - 1, long(std::floor((b.xmax - g.x0) / g.dx)) + margin);
    const long r0 = std::max(0l, long(std::floor((g.y0 - b.ymax) / g.dy)) - margin);
    const long r1 = std::min(long(g.nrows) - 1, long(std::floor((g.y0 - b.ymin) / g.dy)) + margin);
    if (c1 < c0 || r1 < r0) throw insufficient_data_error("shift: lake outside grid extent");

    // Otsu water mask over the cloud-free patch pixels; polarity from the
    // class holding the majority of the unshifted clean pixels.
    std::vector<double> samples;
    for (long r = r0; r <= r1; ++r) {
        for (long c = c0; c <= c1; ++c) {
            if (clouds.is_cloudy(std::size_t(r), std::size_t(c))) continue;
            if (band_grid.is_nodata(std::size_t(r), std::size_t(c))) continue;
            samples.push_back(band_grid.at(std::size_t(r), std::size_t(c)));
        }
    }
    if (samples.size() < 2) throw insufficient_data_error("shift: no cloud-free pixels near lake");
    const double thr = otsu_threshold(samples);

    std::size_t below = 0, above = 0;
    for (std::size_t r = 0; r < g.nrows; ++r) {
        for (std::size_t c = 0; c < g.ncols; ++c) {
            if (lake.at(r, c) != PixelClass::clean || clouds.is_cloudy(r, c)) continue;
            if (band_grid.is_nodata(r, c)) continue;
            (band_grid.at(r, c) <= thr ? below : above)++;
        }
    }
    const bool water_below = below >= above;

    const double cell = std::max(g.dx, g.dy);
    const double reach = max_shift_px * M_SQRT2 * cell + 0.5 * std::hypot(g.dx, g.dy) + 1e-9;
    const auto& verts = outline.vertices;

    for (long r = r0; r <= r1; ++r) {
        const double yt = g.y0 - double(r) * g.dy;
        const double yb = yt - g.dy;
        for (long c = c0; c <= c1; ++c) {
            if (clouds.is_cloudy(std::size_t(r), std::size_t(c)) ||
                band_grid.is_nodata(std::size_t(r), std::size_t(c)))
                continue;
            const double xl = g.x0 + double(c) * g.dx;
            const double xr = xl + g.dx;
            const Point center{(xl + xr) * 0.5, (yb + yt) * 0.5};
            const bool water = water_below
                                   ? band_grid.at(std::size_t(r), std::size_t(c)) <= thr
                                   : band_grid.at(std::size_t(r), std::size_t(c)) > thr;
            core.sum_water += water ? 1.0 : 0.0;

            if (point_ring_distance(center, outline) > reach) {
                const double cov = point_in_ring(center, outline) ? 1.0 : 0.0;
                core.cov_far += cov;
                if (water) core.inter_far += cov;
                continue;
            }
            ScoreCore::BandPixel px{xl, yb, xr, yt, water, {}};
            const double slack = max_shift_px * M_SQRT2 * cell + 1e-9;
            for (std::size_t s = 0; s < verts.size(); ++s) {
                const Point& a = verts[s];
                const Point& bb = verts[(s + 1) % verts.size()];
                const double sxmin = std::min(a.x, bb.x) - slack;
                const double sxmax = std::max(a.x, bb.x) + slack;
                const double symin = std::min(a.y, bb.y) - slack;
                const double symax = std::max(a.y, bb.y) + slack;
                if (sxmax < xl || sxmin > xr || symax < yb || symin > yt) continue;
                px.segments.push_back(std::uint16_t(s));
            }
            core.band.push_back(std::move(px));
        }
    }
    return core;
}

double core_score(const ScoreCore& core, double sx, double sy) {
    const double tx = -sx * core.geom.dx;
    const double ty = -sy * core.geom.dy;
    const auto& verts = core.outline.vertices;
    LakeOutline shifted = core.outline;
    for (Point& p : shifted.vertices) {
        p.x += tx;
        p.y += ty;
    }

    double inter = core.inter_far;
    double cov_total = core.cov_far;
    for (const ScoreCore::BandPixel& px : core.band) {
        bool boundary = false;
        for (std::uint16_t s : px.segments) {
            const Point a{verts[s].x + tx, verts[s].y + ty};
            const Point b{verts[(s + 1) % verts.size()].x + tx,
                          verts[(s + 1) % verts.size()].y + ty};
            if (segment_intersects_rect(a, b, px.xl, px.yb, px.xr, px.yt)) {
                boundary = true;
                break;
            }
        }
        double cov;
        if (boundary) {
            cov = ring_rect_intersection_area(shifted, px.xl, px.yb, px.xr, px.yt) /
                  (core.geom.dx * core.geom.dy);
        } else {
            cov = point_in_ring({(px.xl + px.xr) * 0.5, (px.yb + px.yt) * 0.5}, shifted) ? 1.0
                                                                                          : 0.0;
        }
        cov_total += cov;
        if (px.water) inter += cov;
    }
    const double denom = core.sum_water + cov_total;
    return denom > 0.0 ? 2.0 * inter / denom : 0.0;
}

// Vertex of the parabola through (-h, ym), (0, y0), (+h, yp); clamped to +-h.
double parabolic_vertex(double ym, double y0, double yp, double h) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return 0.0;  // not a peak
    return std::clamp(0.5 * h * (ym - yp) / denom, -h, h);
}

// Coarse-to-fine grid search over the +-search window, then parabolic
// refinement of the score surface around the best fine-grid node.
void search_best_shift(const ScoreCore& core, const ShiftEstimationParams& params, double& out_sx,
                       double& out_sy) {
    double best_sx = 0.0, best_sy = 0.0;
    double best = -1.0;
    auto scan = [&](double cx, double cy, double half, double step) {
        for (double sy = cy - half; sy <= cy + half + 1e-12; sy += step) {
            for (double sx = cx - half; sx <= cx + half + 1e-12; sx += step) {
                const double s = core_score(core, std::clamp(sx, -params.search_px,
                                                             params.search_px),
                                            std::clamp(sy, -params.search_px, params.search_px));
                if (s > best) {
                    best = s;
                    best_sx = sx;
                    best_sy = sy;
                }
            }
        }
    };
    scan(0.0, 0.0, params.search_px, 1.0);
    scan(best_sx, best_sy, 0.75, 0.25);
    scan(best_sx, best_sy, 0.25, params.fine_step_px);

    const double h = params.fine_step_px;
    const double fx_m = core_score(core, best_sx - h, best_sy);
    const double fx_p = core_score(core, best_sx + h, best_sy);
    const double fy_m = core_score(core, best_sx, best_sy - h);
    const double fy_p = core_score(core, best_sx, best_sy + h);
    out_sx = best_sx + parabolic_vertex(fx_m, best, fx_p, h);
    out_sy = best_sy + parabolic_vertex(fy_m, best, fy_p, h);
}

}  // namespace

struct ShiftScoreContext::Impl {
    ScoreCore core;
};

ShiftScoreContext::ShiftScoreContext(const RasterGrid& reference_band, const CloudMask& clouds,
                                     const LakeOutline& outline, double margin_px)
    : impl_(std::make_unique<Impl>()) {
    const LakeMask lake = rasterize_outline(outline, reference_band.geom);
    impl_->core = build_core(reference_band, clouds, lake, outline, margin_px);
}

ShiftScoreContext::~ShiftScoreContext() = default;
ShiftScoreContext::ShiftScoreContext(ShiftScoreContext&&) noexcept = default;
ShiftScoreContext& ShiftScoreContext::operator=(ShiftScoreContext&&) noexcept = default;

double ShiftScoreContext::score(double sx_px, double sy_px) const {
    return core_score(impl_->core, sx_px, sy_px);
}

double shift_overlap_score(const RasterGrid& reference_band, const CloudMask& clouds,
                           const LakeOutline& outline, double sx_px, double sy_px) {
    const double margin = std::max(3.0, std::max(std::abs(sx_px), std::abs(sy_px)));
    return ShiftScoreContext(reference_band, clouds, outline, margin).score(sx_px, sy_px);
}

GeoShift estimate_geolocation_shift(const std::vector<ShiftAcquisition>& acquisitions,
                                    const std::vector<LakeOutline>& outlines,
                                    const ShiftEstimationParams& params) {
    if (acquisitions.empty() || outlines.empty())
        throw insufficient_data_error("shift: no acquisitions or outlines");

    double sum_sx = 0.0, sum_sy = 0.0;
    std::size_t dates_used = 0;
    std::set<std::string> lakes_used;

    for (const ShiftAcquisition& acq : acquisitions) {
        const RasterGrid& band = *acq.reference_band;
        const CloudMask& clouds = *acq.clouds;
        if (!clouds.geom.same_placement(band.geom))
            throw validation_error("shift: cloud mask geometry differs from reference band");

        struct Usable {
            const LakeOutline* outline;
            LakeMask mask;
            double weight;  // cloud-free clean pixels
            int quadrant;
        };
        std::vector<Usable> usable;
        for (const LakeOutline& outline : outlines) {
            LakeMask mask = rasterize_outline(outline, band.geom);
            const std::size_t clean = mask.count(PixelClass::clean);
            if (clean < params.min_clean_pixels) continue;
            std::size_t clear = 0;
            for (std::size_t r = 0; r < band.geom.nrows; ++r) {
                for (std::size_t c = 0; c < band.geom.ncols; ++c) {
                    if (mask.at(r, c) == PixelClass::clean && !clouds.is_cloudy(r, c)) ++clear;
                }
            }
            if (double(clear) < params.min_cloudfree_fraction * double(clean)) continue;
            const Bounds b = ring_bounds(outline);
            const double cx = (b.xmin + b.xmax) * 0.5;
            const double cy = (b.ymin + b.ymax) * 0.5;
            const int quad = (cx > (band.geom.xmin() + band.geom.xmax()) * 0.5 ? 1 : 0) +
                             (cy > (band.geom.ymin() + band.geom.ymax()) * 0.5 ? 2 : 0);
            usable.push_back(Usable{&outline, std::move(mask), double(clear), quad});
        }
        if (usable.empty()) continue;
        if (params.require_corner_coverage) {
            std::set<int> quads;
            for (const Usable& u : usable) quads.insert(u.quadrant);
            if (quads.size() < 3) continue;
        }

        double date_sx = 0.0, date_sy = 0.0, date_w = 0.0;
        for (const Usable& u : usable) {
            const ScoreCore core =
                build_core(band, clouds, u.mask, *u.outline, params.search_px);
            double sx = 0.0, sy = 0.0;
            search_best_shift(core, params, sx, sy);
            date_sx += u.weight * sx;
            date_sy += u.weight * sy;
            date_w += u.weight;
            lakes_used.insert(u.outline->lake_id);
        }
        sum_sx += date_sx / date_w;
        sum_sy += date_sy / date_w;
        ++dates_used;
    }

    if (dates_used == 0)
        throw insufficient_data_error("shift: no acquisition passed the gating rules");
    return GeoShift{sum_sx / double(dates_used), sum_sy / double(dates_used), lakes_used.size(),
                    dates_used};
}

}  // namespace lakeice
