#pragma once

#include <string>
#include <vector>

#include "lakeice/core.hpp"
#include "lakeice/mask.hpp"
#include "lakeice/raster.hpp"

namespace lakeice {

struct SampleMeta {
    std::string lake;
    Date date;
    std::size_t pixel_index = 0;  // row * ncols + col on the lake grid
};

/// Rows are (pixel, acquisition) samples over the selected bands. Cloudy and
/// nodata pixels never enter; acquisitions failing the 30% cloud rule
/// contribute no rows.
struct FeatureMatrix {
    std::vector<std::string> band_names;
    std::vector<std::vector<double>> rows;
    std::vector<SampleMeta> meta;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_bands() const { return band_names.size(); }
};

/// One acquisition's co-registered band grids (already upsampled to the lake
/// grid resolution) plus its binary cloud mask.
struct FeatureAcquisition {
    std::string lake;
    Date date;
    std::vector<const RasterGrid*> bands;  // parallel to band_names
    const CloudMask* clouds = nullptr;
};

FeatureMatrix assemble_features(const std::vector<FeatureAcquisition>& acquisitions,
                                const LakeMask& lake_mask,
                                const std::vector<std::string>& band_names,
                                double max_cloudy_fraction = 0.70);

}  // namespace lakeice
