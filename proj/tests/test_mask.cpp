#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lakeice/mask.hpp"

using namespace lakeice;

TEST_SUITE_BEGIN("mask");

namespace {

// Oversampling oracle: pixel class from a dense sample grid. A pixel is clean
// when every probe is inside, mixed when some probe is inside or the boundary
// crosses it, outside otherwise.
PixelClass oracle_class(const LakeOutline& ring, const GridGeometry& g, std::size_t r,
                        std::size_t c, int oversample = 10) {
    const double xl = g.x0 + double(c) * g.dx;
    const double yt = g.y0 - double(r) * g.dy;
    int inside = 0, total = 0;
    for (int i = 0; i <= oversample; ++i) {
        for (int j = 0; j <= oversample; ++j) {
            const Point p{xl + g.dx * double(i) / oversample,
                          yt - g.dy * double(j) / oversample};
            inside += point_in_ring(p, ring) ? 1 : 0;
            ++total;
        }
    }
    if (inside == total) return PixelClass::clean;
    if (inside > 0) return PixelClass::mixed;
    // No probe inside: the ring may still clip a corner without catching a
    // probe, treat any edge crossing as mixed.
    const auto& v = ring.vertices;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (segment_intersects_rect(v[k], v[(k + 1) % v.size()], xl, yt - g.dy, xl + g.dx, yt))
            return PixelClass::mixed;
    }
    return PixelClass::outside;
}

CloudMask constant_clouds(const GridGeometry& g, CloudCode code, bool binary = true) {
    return CloudMask{g, binary, std::vector<CloudCode>(g.size(), code)};
}

}  // namespace

TEST_CASE("rasterize: rectangle covering a 4x4 block plus half-pixel margin") {
    // Pixels are 10 m; the ring spans [5,55]x[5,55] so pixels 1..4 in both
    // axes lie fully inside.
    const GridGeometry g{6, 6, 0.0, 60.0, 10.0, 10.0};
    const LakeOutline ring = make_outline("rect", {{5, 5}, {55, 5}, {55, 55}, {5, 55}});
    const LakeMask mask = rasterize_outline(ring, g);

    CHECK(mask.count(PixelClass::clean) == 16);
    for (std::size_t r = 1; r <= 4; ++r) {
        for (std::size_t c = 1; c <= 4; ++c) CHECK(mask.at(r, c) == PixelClass::clean);
    }
    // Ring of mixed pixels around the clean block.
    CHECK(mask.count(PixelClass::mixed) == 20);
    CHECK(mask.count(PixelClass::clean) + mask.count(PixelClass::mixed) +
              mask.count(PixelClass::outside) ==
          g.size());

    // Full oversampling oracle agreement.
    for (std::size_t r = 0; r < g.nrows; ++r) {
        for (std::size_t c = 0; c < g.ncols; ++c) {
            CHECK(mask.at(r, c) == oracle_class(ring, g, r, c));
        }
    }
}

TEST_CASE("rasterize: sliver thinner than a pixel has no clean pixel") {
    const GridGeometry g{4, 4, 0.0, 40.0, 10.0, 10.0};
    const LakeOutline sliver = make_outline("sliver", {{2, 2}, {38, 4}, {38, 6}, {2, 5}});
    const LakeMask mask = rasterize_outline(sliver, g);
    CHECK(mask.count(PixelClass::clean) == 0);
    CHECK(mask.count(PixelClass::mixed) >= 1);
}

TEST_CASE("rasterize: outline outside the grid gives all-outside, not an error") {
    const GridGeometry g{4, 4, 0.0, 40.0, 10.0, 10.0};
    const LakeOutline far = make_outline("far", {{100, 100}, {120, 100}, {120, 120}, {100, 120}});
    const LakeMask mask = rasterize_outline(far, g);
    CHECK(mask.count(PixelClass::outside) == g.size());
}

TEST_CASE("rasterize: clean count non-increasing when pixels coarsen") {
    // Irregular hexagon-ish lake over a 100 m scene.
    const LakeOutline lake = make_outline(
        "lake", {{12, 15}, {80, 8}, {95, 40}, {85, 88}, {30, 92}, {5, 50}});
    std::size_t prev = std::size_t(-1);
    for (double cell : {2.5, 5.0, 10.0, 20.0}) {
        const GridGeometry g{std::size_t(100.0 / cell), std::size_t(100.0 / cell), 0.0, 100.0,
                             cell, cell};
        const std::size_t clean = rasterize_outline(lake, g).count(PixelClass::clean);
        CHECK(clean <= prev);
        prev = clean;
    }
}

TEST_CASE("rasterize: clean count non-increasing under inward erosion") {
    auto scaled = [](double shrink) {
        // Square centered at (50,50), half-size 40*shrink.
        const double h = 40.0 * shrink;
        return make_outline("sq", {{50 - h, 50 - h}, {50 + h, 50 - h}, {50 + h, 50 + h},
                                   {50 - h, 50 + h}});
    };
    const GridGeometry g{20, 20, 0.0, 100.0, 5.0, 5.0};
    std::size_t prev = std::size_t(-1);
    for (double shrink : {1.0, 0.9, 0.75, 0.5, 0.25}) {
        const std::size_t clean = rasterize_outline(scaled(shrink), g).count(PixelClass::clean);
        CHECK(clean <= prev);
        prev = clean;
    }
}

TEST_CASE("binarize_cloud_mask: conservative grouping") {
    const GridGeometry g{2, 2, 0, 2, 1, 1};
    CloudMask four{g, false,
                   {CloudCode::cloudy, CloudCode::uncertain_clear, CloudCode::probably_clear,
                    CloudCode::confident_clear}};
    const CloudMask bin = binarize_cloud_mask(four);
    CHECK(bin.binary);
    CHECK(bin.codes[0] == CloudCode::cloudy);
    CHECK(bin.codes[1] == CloudCode::cloudy);
    CHECK(bin.codes[2] == CloudCode::confident_clear);
    CHECK(bin.codes[3] == CloudCode::confident_clear);

    // Idempotent.
    const CloudMask again = binarize_cloud_mask(bin);
    CHECK(again.codes == bin.codes);

    CloudMask all_uncertain{g, false, std::vector<CloudCode>(4, CloudCode::uncertain_clear)};
    for (CloudCode c : binarize_cloud_mask(all_uncertain).codes) CHECK(c == CloudCode::cloudy);
    CloudMask all_confident{g, false, std::vector<CloudCode>(4, CloudCode::confident_clear)};
    for (CloudCode c : binarize_cloud_mask(all_confident).codes)
        CHECK(c == CloudCode::confident_clear);
}

TEST_CASE("cloud_fraction and the 30% rule") {
    const GridGeometry g{10, 10, 0.0, 100.0, 10.0, 10.0};
    const LakeOutline lake = make_outline("lake", {{5, 5}, {95, 5}, {95, 95}, {5, 95}});
    const LakeMask mask = rasterize_outline(lake, g);
    const std::size_t clean = mask.count(PixelClass::clean);
    REQUIRE(clean == 64);

    CloudMask clouds = constant_clouds(g, CloudCode::confident_clear);
    CHECK(cloud_fraction(clouds, mask) == doctest::Approx(0.0));
    CHECK(is_processable(0.0));

    // 32 cloudy of 45 clean -> 0.711, not processable. Build exactly 45 clean
    // by using a lake mask fixture: mark pixels cloudy one by one instead.
    std::size_t made_cloudy = 0;
    for (std::size_t i = 0; i < mask.classes.size() && made_cloudy < 32; ++i) {
        if (mask.classes[i] == PixelClass::clean) {
            clouds.codes[i] = CloudCode::cloudy;
            ++made_cloudy;
        }
    }
    const double frac = cloud_fraction(clouds, mask);
    CHECK(frac == doctest::Approx(32.0 / 64.0));
    CHECK(is_processable(frac));

    // Boundary: exactly 70% cloudy stays processable ("more than 70%").
    CHECK(is_processable(0.70));
    CHECK_FALSE(is_processable(0.700001));
    CHECK_FALSE(is_processable(32.0 / 45.0));
}

TEST_CASE("cloud_fraction with no clean pixels: error by default, mixed fallback on request") {
    const GridGeometry g{4, 4, 0.0, 40.0, 10.0, 10.0};
    const LakeOutline tiny = make_outline("tiny", {{12, 12}, {28, 14}, {26, 26}, {14, 24}});
    const LakeMask mask = rasterize_outline(tiny, g);
    REQUIRE(mask.count(PixelClass::clean) == 0);
    REQUIRE(mask.count(PixelClass::mixed) > 0);

    const CloudMask clouds = constant_clouds(g, CloudCode::confident_clear);
    CHECK_THROWS_AS(cloud_fraction(clouds, mask), Error);
    CloudFractionOptions opts;
    opts.fall_back_to_mixed = true;
    CHECK(cloud_fraction(clouds, mask, opts) == doctest::Approx(0.0));
}

TEST_CASE("buffered_lake_mask demotes near-shore pixels") {
    const GridGeometry g{20, 20, 0.0, 2000.0, 100.0, 100.0};
    // Circular lake, radius 1000 m at (1000, 1000).
    std::vector<Point> circle;
    for (int k = 0; k < 72; ++k) {
        const double a = 2.0 * M_PI * k / 72.0;
        circle.push_back({1000.0 + 1000.0 * std::cos(a), 1000.0 + 1000.0 * std::sin(a)});
    }
    const LakeOutline lake = make_outline("circle", circle);
    const LakeMask mask = rasterize_outline(lake, g);

    SUBCASE("buffer 0 is the identity") {
        const LakeMask same = buffered_lake_mask(mask, lake, 0.0);
        CHECK(same.classes == mask.classes);
    }

    SUBCASE("600 m buffer: retained clean pixels all within 400 m of center") {
        const LakeMask buffered = buffered_lake_mask(mask, lake, 600.0);
        CHECK(buffered.count(PixelClass::clean) < mask.count(PixelClass::clean));
        for (std::size_t r = 0; r < g.nrows; ++r) {
            for (std::size_t c = 0; c < g.ncols; ++c) {
                if (buffered.at(r, c) != PixelClass::clean) continue;
                const double d = std::hypot(g.cell_center_x(c) - 1000.0,
                                            g.cell_center_y(r) - 1000.0);
                // Distance-field oracle (tolerance: the 72-gon is slightly
                // inside the true circle).
                CHECK(d <= 400.0 + 2.0);
            }
        }
    }

    SUBCASE("buffer monotonicity") {
        std::size_t prev = std::size_t(-1);
        for (double buffer : {0.0, 100.0, 300.0, 600.0, 2000.0}) {
            const std::size_t clean =
                buffered_lake_mask(mask, lake, buffer).count(PixelClass::clean);
            CHECK(clean <= prev);
            prev = clean;
        }
        // Buffer larger than the lake demotes everything.
        CHECK(buffered_lake_mask(mask, lake, 2000.0).count(PixelClass::clean) == 0);
    }
}

TEST_CASE("read_cloud_mask rejects unknown codes") {
    const GridGeometry g{2, 1, 0, 1, 1, 1};
    RasterGrid grid(g, 0.0);
    grid.values = {0, 7};
    const std::string path =
        (std::filesystem::temp_directory_path() / "lakeice_cloud.asc").string();
    write_esri_ascii(grid, path);
    CHECK_THROWS_WITH_AS(read_cloud_mask(path), doctest::Contains("0..3"), Error);
    std::filesystem::remove(path);
}

TEST_SUITE_END();
