#include "lakeice/icedetect.hpp"

#include <cmath>
#include <fstream>

namespace lakeice {

void IceThresholds::validate() const {
    if (!(ndsi_min > -1.0 && ndsi_min < 1.0))
        throw validation_error("ice thresholds: ndsi_min must be in (-1, 1)");
    if (!(i2_refl_min > 0.0 && i2_refl_min < 1.0))
        throw validation_error("ice thresholds: i2_refl_min must be in (0, 1)");
    if (!(lswt_max_k > 0.0)) throw validation_error("ice thresholds: lswt_max must be > 0");
}

double ndsi(double r1, double r2) {
    if (r1 < 0.0 || r2 < 0.0) throw validation_error("ndsi: reflectances must be >= 0");
    const double denom = r1 + r2;
    if (denom == 0.0) return missing_value();
    return (r1 - r2) / denom;
}

IceState classify_pixel(double ndsi_value, double i2_refl, double lswt_k, const IceThresholds& thr,
                        bool cloudy) {
    if (cloudy) return IceState::cloud;
    if (is_missing(ndsi_value) || is_missing(i2_refl) || is_missing(lswt_k)) return IceState::cloud;
    bool is_ice;
    if (thr.strict) {
        is_ice = ndsi_value > thr.ndsi_min && i2_refl > thr.i2_refl_min && lswt_k < thr.lswt_max_k;
    } else {
        is_ice = ndsi_value >= thr.ndsi_min && i2_refl >= thr.i2_refl_min &&
                 lswt_k <= thr.lswt_max_k;
    }
    return is_ice ? IceState::ice : IceState::open_water;
}

IceMapResult ice_map(const RasterGrid& i2_refl, const RasterGrid& i3_refl,
                     const RasterGrid& lswt_k, const CloudMask& clouds, const LakeMask& lake,
                     const IceThresholds& thr) {
    thr.validate();
    const GridGeometry& g = lake.geom;
    if (!i2_refl.geom.same_placement(g) || !i3_refl.geom.same_placement(g) ||
        !lswt_k.geom.same_placement(g) || !clouds.geom.same_placement(g))
        throw validation_error("ice_map: input grids are not co-registered");

    IceMapResult result{IceMap{g, std::vector<IceState>(g.size(), IceState::outside)}, {}};
    for (std::size_t r = 0; r < g.nrows; ++r) {
        for (std::size_t c = 0; c < g.ncols; ++c) {
            if (lake.at(r, c) != PixelClass::clean) continue;
            IceState state;
            if (clouds.is_cloudy(r, c)) {
                state = IceState::cloud;
            } else {
                const double i2 = i2_refl.is_nodata(r, c) ? missing_value() : i2_refl.at(r, c);
                const double i3 = i3_refl.is_nodata(r, c) ? missing_value() : i3_refl.at(r, c);
                const double t = lswt_k.is_nodata(r, c) ? missing_value() : lswt_k.at(r, c);
                const double index =
                    (is_missing(i2) || is_missing(i3)) ? missing_value() : ndsi(i2, i3);
                state = classify_pixel(index, i2, t, thr, false);
            }
            result.map.states[r * g.ncols + c] = state;
            switch (state) {
                case IceState::ice: ++result.summary.n_ice; break;
                case IceState::open_water: ++result.summary.n_water; break;
                case IceState::cloud: ++result.summary.n_cloud; break;
                default: break;
            }
        }
    }
    return result;
}

void write_ice_map(const IceMapResult& result, const std::string& path) {
    std::vector<std::uint8_t> codes;
    codes.reserve(result.map.states.size());
    for (IceState s : result.map.states) codes.push_back(std::uint8_t(s));
    write_class_grid(result.map.geom, codes, path);

    std::ofstream out(path + ".summary.json");
    out << "{\"n_ice\": " << result.summary.n_ice << ", \"n_water\": " << result.summary.n_water
        << ", \"n_cloud\": " << result.summary.n_cloud << "}\n";
}

}  // namespace lakeice
