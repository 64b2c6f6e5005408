#pragma once

#include <map>
#include <string>
#include <vector>

#include "lakeice/mask.hpp"
#include "lakeice/raster.hpp"

namespace lakeice {

/// All grids of one timestamp, co-registered: bands coarser than the finest
/// one are bilinearly upsampled, the cloud mask with nearest neighbour.
struct Acquisition {
    DateTime timestamp;
    std::string sensor;
    std::map<std::string, RasterGrid> bands;
    CloudMask clouds;  // binary

    const RasterGrid& band(const std::string& name) const;
    GridGeometry geometry() const;
};

struct IngestResult {
    std::vector<Acquisition> acquisitions;  // time-sorted
    std::vector<std::string> warnings;
};

/// Manifest CSV `timestamp,sensor,band,path,cloudmask_path`. Out-of-order
/// rows are accepted, sorted, and reported as a warning. Geometry mismatches
/// that upsampling cannot reconcile are errors naming the offending file.
IngestResult ingest(const std::string& manifest_path);

}  // namespace lakeice
