#include "lakeice/features.hpp"

namespace lakeice {

FeatureMatrix assemble_features(const std::vector<FeatureAcquisition>& acquisitions,
                                const LakeMask& lake_mask,
                                const std::vector<std::string>& band_names,
                                double max_cloudy_fraction) {
    FeatureMatrix fm;
    fm.band_names = band_names;
    const GridGeometry& g = lake_mask.geom;

    for (const FeatureAcquisition& acq : acquisitions) {
        if (acq.bands.size() != band_names.size())
            throw validation_error("assemble_features: band count mismatch for lake " + acq.lake);
        if (!acq.clouds->geom.same_placement(g))
            throw validation_error("assemble_features: cloud mask not co-registered");
        for (const RasterGrid* band : acq.bands) {
            if (!band->geom.same_placement(g))
                throw validation_error("assemble_features: band grid not co-registered");
        }
        if (!is_processable(cloud_fraction(*acq.clouds, lake_mask), max_cloudy_fraction)) continue;

        for (std::size_t r = 0; r < g.nrows; ++r) {
            for (std::size_t c = 0; c < g.ncols; ++c) {
                if (lake_mask.at(r, c) != PixelClass::clean) continue;
                if (acq.clouds->is_cloudy(r, c)) continue;
                std::vector<double> row;
                row.reserve(band_names.size());
                bool valid = true;
                for (const RasterGrid* band : acq.bands) {
                    if (band->is_nodata(r, c)) {
                        valid = false;
                        break;
                    }
                    row.push_back(band->at(r, c));
                }
                if (!valid) continue;
                fm.rows.push_back(std::move(row));
                fm.meta.push_back(SampleMeta{acq.lake, acq.date, r * g.ncols + c});
            }
        }
    }
    if (fm.rows.empty()) throw insufficient_data_error("assemble_features: no usable pixels");
    return fm;
}

}  // namespace lakeice
