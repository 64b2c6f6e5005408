#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lakeice/icedetect.hpp"
#include "lakeice/insitu.hpp"
#include "lakeice/labels.hpp"
#include "lakeice/lswt.hpp"
#include "lakeice/phenology.hpp"
#include "lakeice/scores.hpp"
#include "lakeice/shift.hpp"
#include "lakeice/svm.hpp"

namespace lakeice {

struct LakeConfig {
    std::string id;
    std::string outline_path;
    double frozen_threshold = 90.0;        // %FP needed for label Y
    std::optional<GeoShift> shift;         // absent: estimate from the imagery
    bool estimate_shift = false;
    double buffer_m = 0.0;
};

struct LoggerConfig {
    std::string path;
    LoggerKind kind = LoggerKind::temperature;
    std::string sensor_id;
};

struct MtaConfig {
    MtaScheme scheme = MtaScheme::mean;
    int window_days = 3;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::vector<LakeConfig> lakes;
    std::vector<std::string> feature_bands;
    std::string nir_band = "I2";
    std::string swir_band = "I3";
    std::string thermal_band_name = "I5";
    BandSpec thermal_band;
    IceThresholds ice_thresholds;
    PhenologyParams phenology;
    MtaConfig mta;
    SvmKernel svm_kernel = SvmKernel::rbf;
    std::string svm_preset = "single";  // or "interleaved": split1/split2 dual models
    std::string manifest_path;
    std::string atmosphere_path;
    std::string model_path;
    std::map<std::string, std::string> label_paths;        // method name -> daily label CSV
    std::map<std::string, std::string> ground_truth_paths; // lake id -> date,code CSV
    std::vector<LoggerConfig> loggers;
    std::string out_dir = ".";

    std::string config_hash;  // FNV-1a of the raw config text
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");

/// Outline CSV: `x,y` vertex pairs, one per line, ring closed implicitly.
LakeOutline read_outline_csv(const std::string& path, const std::string& lake_id);
void write_outline_csv(const LakeOutline& outline, const std::string& path);

/// Atmospheric parameter CSV `timestamp,tau,l_up,l_down,theta_deg,epsilon`.
struct AtmosphereTable {
    std::vector<std::pair<DateTime, AtmParams>> rows;  // time-sorted

    /// Scene parameters for an acquisition: nearest row within max_dt_minutes.
    AtmParams at(DateTime t, int max_dt_minutes = 120) const;
};
AtmosphereTable read_atmosphere_csv(const std::string& path);

}  // namespace lakeice
