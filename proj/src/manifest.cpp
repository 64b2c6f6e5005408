#include "lakeice/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lakeice/resample.hpp"

namespace lakeice {

const RasterGrid& Acquisition::band(const std::string& name) const {
    auto it = bands.find(name);
    if (it == bands.end())
        throw validation_error("acquisition " + timestamp.to_iso() + ": band '" + name +
                               "' not present");
    return it->second;
}

GridGeometry Acquisition::geometry() const {
    if (bands.empty()) throw validation_error("acquisition has no bands");
    return bands.begin()->second.geom;
}

namespace {

struct ManifestRow {
    DateTime timestamp;
    std::string sensor, band, path, cloudmask_path;
};

}  // namespace

IngestResult ingest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw validation_error("cannot open manifest: " + manifest_path);

    std::vector<ManifestRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header && line.rfind("timestamp", 0) == 0) {
            if (line != "timestamp,sensor,band,path,cloudmask_path")
                throw validation_error(manifest_path + ":" + std::to_string(line_no) +
                                       ": malformed header '" + line + "'");
            saw_header = true;
            continue;
        }
        std::stringstream ss(line);
        ManifestRow row;
        std::string ts;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, row.sensor, ',') ||
            !std::getline(ss, row.band, ',') || !std::getline(ss, row.path, ',') ||
            !std::getline(ss, row.cloudmask_path))
            throw validation_error(manifest_path + ":" + std::to_string(line_no) +
                                   ": expected 5 comma-separated fields");
        row.timestamp = DateTime::parse(ts);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw validation_error(manifest_path + ": no acquisitions listed");

    IngestResult result;
    bool sorted = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].timestamp < rows[i - 1].timestamp) sorted = false;
    }
    if (!sorted) {
        result.warnings.push_back("manifest timestamps were out of order; rows sorted");
        std::stable_sort(rows.begin(), rows.end(), [](const ManifestRow& a, const ManifestRow& b) {
            return a.timestamp < b.timestamp;
        });
    }

    // Group rows by timestamp.
    for (std::size_t i = 0; i < rows.size();) {
        std::size_t j = i;
        while (j < rows.size() && rows[j].timestamp == rows[i].timestamp) ++j;

        Acquisition acq;
        acq.timestamp = rows[i].timestamp;
        acq.sensor = rows[i].sensor;

        std::string finest_band;
        double finest_dx = std::numeric_limits<double>::infinity();
        for (std::size_t k = i; k < j; ++k) {
            if (acq.bands.count(rows[k].band))
                throw validation_error(manifest_path + ": duplicate band '" + rows[k].band +
                                       "' at " + acq.timestamp.to_iso());
            RasterGrid grid = read_esri_ascii(rows[k].path);
            if (grid.geom.dx < finest_dx) {
                finest_dx = grid.geom.dx;
                finest_band = rows[k].band;
            }
            acq.bands.emplace(rows[k].band, std::move(grid));
        }
        const GridGeometry target = acq.bands.at(finest_band).geom;

        for (std::size_t k = i; k < j; ++k) {
            RasterGrid& grid = acq.bands.at(rows[k].band);
            if (grid.geom.same_placement(target)) continue;
            try {
                grid = upsample_bilinear(grid, target);
            } catch (const Error& e) {
                throw validation_error(std::string(rows[k].path) +
                                       ": geometry inconsistent with the acquisition (" +
                                       e.what() + ")");
            }
        }

        const std::string cloud_path = rows[i].cloudmask_path;
        for (std::size_t k = i; k < j; ++k) {
            if (rows[k].cloudmask_path != cloud_path)
                throw validation_error(manifest_path + ": acquisition " + acq.timestamp.to_iso() +
                                       " lists different cloud masks");
        }
        CloudMask four_level = read_cloud_mask(cloud_path);
        if (!four_level.geom.same_placement(target)) {
            RasterGrid as_grid(four_level.geom, 0.0);
            for (std::size_t p = 0; p < four_level.codes.size(); ++p)
                as_grid.values[p] = double(four_level.codes[p]);
            RasterGrid up;
            try {
                up = upsample_nearest(as_grid, target);
            } catch (const Error& e) {
                throw validation_error(cloud_path + ": geometry inconsistent with the acquisition (" +
                                       std::string(e.what()) + ")");
            }
            four_level.geom = target;
            four_level.codes.assign(up.values.size(), CloudCode::confident_clear);
            for (std::size_t p = 0; p < up.values.size(); ++p)
                four_level.codes[p] = CloudCode(int(up.values[p]));
        }
        acq.clouds = binarize_cloud_mask(four_level);

        result.acquisitions.push_back(std::move(acq));
        i = j;
    }
    return result;
}

}  // namespace lakeice
