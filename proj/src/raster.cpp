#include "lakeice/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lakeice {

bool GridGeometry::same_placement(const GridGeometry& o, double eps) const {
    return ncols == o.ncols && nrows == o.nrows && std::abs(x0 - o.x0) <= eps &&
           std::abs(y0 - o.y0) <= eps && std::abs(dx - o.dx) <= eps && std::abs(dy - o.dy) <= eps;
}

void RasterGrid::validate() const {
    if (geom.ncols < 1 || geom.nrows < 1) throw validation_error("raster: empty grid");
    if (geom.dx <= 0.0 || geom.dy <= 0.0) throw validation_error("raster: non-positive cell size");
    if (values.size() != geom.size())
        throw validation_error("raster: value count does not match ncols*nrows");
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

RasterGrid read_esri_ascii(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open raster file: " + path);

    RasterGrid grid;
    double xll = 0.0, yll = 0.0, cellsize = 1.0;
    bool saw_ncols = false, saw_nrows = false, saw_xll = false, saw_yll = false, saw_cell = false;

    // Header: key/value lines until the first purely numeric token.
    std::string key;
    while (in >> key) {
        const std::string k = lower(key);
        if (k == "ncols") {
            if (!(in >> grid.geom.ncols)) throw validation_error(path + ": bad NCOLS");
            saw_ncols = true;
        } else if (k == "nrows") {
            if (!(in >> grid.geom.nrows)) throw validation_error(path + ": bad NROWS");
            saw_nrows = true;
        } else if (k == "xllcorner") {
            in >> xll;
            saw_xll = true;
        } else if (k == "yllcorner") {
            in >> yll;
            saw_yll = true;
        } else if (k == "cellsize") {
            in >> cellsize;
            saw_cell = true;
        } else if (k == "nodata_value") {
            in >> grid.nodata;
        } else {
            // First value token: put it back by parsing it as a number below.
            break;
        }
        key.clear();
    }
    if (!saw_ncols || !saw_nrows || !saw_xll || !saw_yll || !saw_cell)
        throw validation_error(path + ": incomplete ESRI ASCII header");
    if (grid.geom.ncols < 1 || grid.geom.nrows < 1)
        throw validation_error(path + ": NCOLS/NROWS must be >= 1");
    if (cellsize <= 0.0) throw validation_error(path + ": CELLSIZE must be > 0");

    grid.geom.dx = cellsize;
    grid.geom.dy = cellsize;

    grid.values.reserve(grid.geom.size());
    if (!key.empty()) {
        try {
            grid.values.push_back(std::stod(key));
        } catch (const std::exception&) {
            throw validation_error(path + ": unknown header key '" + key + "'");
        }
    }
    double v;
    while (grid.values.size() < grid.geom.size() && in >> v) grid.values.push_back(v);
    if (grid.values.size() != grid.geom.size())
        throw validation_error(path + ": expected " + std::to_string(grid.geom.size()) +
                               " values, got " + std::to_string(grid.values.size()));

    // Sidecar for rectangular cells.
    const std::string sidecar = path + ".json";
    if (std::filesystem::exists(sidecar)) {
        std::ifstream sc(sidecar);
        nlohmann::json j;
        sc >> j;
        if (j.contains("dx")) grid.geom.dx = j["dx"].get<double>();
        if (j.contains("dy")) grid.geom.dy = j["dy"].get<double>();
        if (grid.geom.dx <= 0.0 || grid.geom.dy <= 0.0)
            throw validation_error(sidecar + ": dx,dy must be > 0");
    }

    grid.geom.x0 = xll;
    grid.geom.y0 = yll + double(grid.geom.nrows) * grid.geom.dy;
    grid.validate();
    return grid;
}

void write_esri_ascii(const RasterGrid& grid, const std::string& path, int value_precision) {
    grid.validate();
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write raster file: " + path);

    char buf[64];
    auto fmt = [&](double v) {
        if (v == std::floor(v) && std::abs(v) < 1e15) {
            std::snprintf(buf, sizeof buf, "%.0f", v);
        } else {
            std::snprintf(buf, sizeof buf, "%.*g", value_precision, v);
        }
        return std::string(buf);
    };

    const bool square = grid.geom.dx == grid.geom.dy;
    const double cellsize = grid.geom.dx;
    out << "NCOLS " << grid.geom.ncols << "\n";
    out << "NROWS " << grid.geom.nrows << "\n";
    out << "XLLCORNER " << fmt(grid.geom.xmin()) << "\n";
    out << "YLLCORNER " << fmt(grid.geom.ymin()) << "\n";
    out << "CELLSIZE " << fmt(cellsize) << "\n";
    out << "NODATA_VALUE " << fmt(grid.nodata) << "\n";
    for (std::size_t r = 0; r < grid.geom.nrows; ++r) {
        for (std::size_t c = 0; c < grid.geom.ncols; ++c) {
            if (c) out << ' ';
            out << fmt(grid.at(r, c));
        }
        out << '\n';
    }
    if (!square) {
        std::ofstream sc(path + ".json");
        sc << "{\"dx\": " << fmt(grid.geom.dx) << ", \"dy\": " << fmt(grid.geom.dy) << "}\n";
    }
}

}  // namespace lakeice
