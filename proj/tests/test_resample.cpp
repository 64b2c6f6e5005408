#include <doctest.h>

#include <algorithm>

#include "lakeice/resample.hpp"

using namespace lakeice;

TEST_SUITE_BEGIN("resample");

TEST_CASE("bilinear_sample: 1D ramp 0..4 at quarter steps") {
    // Two cells of size 1: centers at x = 0.5 and 1.5, values 0 and 4.
    RasterGrid g(GridGeometry{2, 1, 0.0, 1.0, 1.0, 1.0}, 0.0);
    g.values = {0.0, 4.0};
    const double y = 0.5;
    for (int k = 0; k <= 4; ++k) {
        const double x = 0.5 + 0.25 * k;
        CHECK(bilinear_sample(g, x, y) == doctest::Approx(double(k)));
    }
}

TEST_CASE("bilinear_sample: 2x2 grid sampled at its center is the mean") {
    RasterGrid g(GridGeometry{2, 2, 0.0, 2.0, 1.0, 1.0}, 0.0);
    g.values = {0.0, 10.0, 20.0, 30.0};
    CHECK(bilinear_sample(g, 1.0, 1.0) == doctest::Approx(15.0));
}

TEST_CASE("upsample_bilinear: constant stays constant") {
    RasterGrid g(GridGeometry{3, 3, 0.0, 30.0, 10.0, 10.0}, 7.5);
    const GridGeometry target{12, 12, 0.0, 30.0, 2.5, 2.5};
    const RasterGrid up = upsample_bilinear(g, target);
    for (double v : up.values) CHECK(v == doctest::Approx(7.5));
}

TEST_CASE("upsample_bilinear preserves the value range") {
    RasterGrid g(GridGeometry{4, 3, 0.0, 30.0, 10.0, 10.0}, 0.0);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = double((i * 37) % 11);
    const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
    const GridGeometry target{16, 12, 0.0, 30.0, 2.5, 2.5};
    const RasterGrid up = upsample_bilinear(g, target);
    for (double v : up.values) {
        CHECK(v >= *lo - 1e-12);
        CHECK(v <= *hi + 1e-12);
    }
}

TEST_CASE("nodata: nearest valid neighbour fallback, all-nodata stays nodata") {
    RasterGrid g(GridGeometry{2, 2, 0.0, 2.0, 1.0, 1.0}, 0.0, -9999.0);
    g.values = {-9999.0, 10.0, 20.0, 30.0};
    // Close to the nodata corner: nearest valid of the 4 neighbours wins.
    const double v = bilinear_sample(g, 0.6, 1.4);
    CHECK((v == 10.0 || v == 20.0));
    // Centered: top-left is nodata, so the highest-weight valid one is picked.
    CHECK(bilinear_sample(g, 1.0, 1.0) != -9999.0);

    RasterGrid all(GridGeometry{2, 2, 0.0, 2.0, 1.0, 1.0}, -9999.0, -9999.0);
    CHECK(bilinear_sample(all, 1.0, 1.0) == -9999.0);
}

TEST_CASE("upsample_nearest replicates blocks") {
    RasterGrid g(GridGeometry{2, 2, 0.0, 2.0, 1.0, 1.0}, 0.0);
    g.values = {1, 2, 3, 4};
    const GridGeometry target{4, 4, 0.0, 2.0, 0.5, 0.5};
    const RasterGrid up = upsample_nearest(g, target);
    CHECK(up.at(0, 0) == 1);
    CHECK(up.at(0, 1) == 1);
    CHECK(up.at(0, 2) == 2);
    CHECK(up.at(3, 3) == 4);
}

TEST_CASE("upsample errors") {
    RasterGrid empty;
    const GridGeometry target{2, 2, 0.0, 2.0, 0.5, 0.5};
    CHECK_THROWS_AS(upsample_bilinear(empty, target), Error);

    RasterGrid g(GridGeometry{2, 2, 0.0, 2.0, 1.0, 1.0}, 0.0);
    const GridGeometry wrong_extent{4, 4, 0.0, 3.0, 0.5, 0.5};
    CHECK_THROWS_AS(upsample_bilinear(g, wrong_extent), Error);
}

TEST_SUITE_END();
