#include "lakeice/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lakeice {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& base, const std::string& rel) {
    if (rel.empty() || fs::path(rel).is_absolute()) return rel;
    return (fs::path(base) / rel).string();
}

MtaScheme parse_scheme(const std::string& s) {
    if (s == "mean") return MtaScheme::mean;
    if (s == "median") return MtaScheme::median;
    if (s == "gaussian") return MtaScheme::gaussian;
    throw validation_error("config: unknown MTA scheme '" + s + "'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("config: ") + e.what());
    }

    RunConfig cfg;
    cfg.config_hash = hex64(fnv1a(json_text));
    cfg.seed = j.value("seed", std::uint64_t(0));

    for (const auto& jl : j.value("lakes", nlohmann::json::array())) {
        LakeConfig lake;
        lake.id = jl.at("id").get<std::string>();
        lake.outline_path = join_path(base_dir, jl.at("outline").get<std::string>());
        lake.frozen_threshold = jl.value("frozen_threshold", 90.0);
        lake.buffer_m = jl.value("buffer_m", 0.0);
        if (jl.contains("shift")) {
            if (jl["shift"].is_string() && jl["shift"] == "estimate") {
                lake.estimate_shift = true;
            } else {
                lake.shift = GeoShift{jl["shift"].value("sx", 0.0), jl["shift"].value("sy", 0.0),
                                      0, 0};
            }
        }
        cfg.lakes.push_back(std::move(lake));
    }

    if (j.contains("sensor")) {
        const auto& js = j["sensor"];
        cfg.feature_bands = js.value("bands", std::vector<std::string>{});
        cfg.nir_band = js.value("nir_band", cfg.nir_band);
        cfg.swir_band = js.value("swir_band", cfg.swir_band);
        cfg.thermal_band_name = js.value("thermal_band", cfg.thermal_band_name);
    }

    if (j.contains("band")) {
        const auto& jb = j["band"];
        cfg.thermal_band.name = jb.value("name", cfg.thermal_band.name);
        cfg.thermal_band.center_um = jb.value("center_um", cfg.thermal_band.center_um);
        cfg.thermal_band.nu_c = jb.value("nu_c", 0.0);
        cfg.thermal_band.alpha = jb.value("alpha", 1.0);
        cfg.thermal_band.beta = jb.value("beta", 0.0);
    }

    if (j.contains("thresholds")) {
        const auto& jt = j["thresholds"];
        cfg.ice_thresholds.ndsi_min = jt.value("ndsi_min", cfg.ice_thresholds.ndsi_min);
        cfg.ice_thresholds.i2_refl_min = jt.value("i2_refl_min", cfg.ice_thresholds.i2_refl_min);
        cfg.ice_thresholds.lswt_max_k = jt.value("lswt_max_k", cfg.ice_thresholds.lswt_max_k);
        cfg.ice_thresholds.validate();
    }

    if (j.contains("phenology")) {
        const auto& jp = j["phenology"];
        cfg.phenology.nir_frozen_refl = jp.value("nir_frozen_refl", cfg.phenology.nir_frozen_refl);
        cfg.phenology.nir_open_refl = jp.value("nir_open_refl", cfg.phenology.nir_open_refl);
        cfg.phenology.majority = jp.value("majority", cfg.phenology.majority);
        cfg.phenology.bound_window_days =
            jp.value("bound_window_days", cfg.phenology.bound_window_days);
        cfg.phenology.suppression_window_days =
            jp.value("suppression_window_days", cfg.phenology.suppression_window_days);
        cfg.phenology.despike_k = jp.value("despike_k", cfg.phenology.despike_k);
    }

    if (j.contains("mta")) {
        cfg.mta.scheme = parse_scheme(j["mta"].value("scheme", std::string("mean")));
        cfg.mta.window_days = j["mta"].value("window_days", 3);
        if (cfg.mta.window_days < 1 || cfg.mta.window_days % 2 == 0 || cfg.mta.window_days > 15)
            throw validation_error("config: MTA window must be odd, between 1 and 15");
    }

    if (j.contains("svm")) {
        const std::string kernel = j["svm"].value("kernel", std::string("rbf"));
        if (kernel == "rbf") {
            cfg.svm_kernel = SvmKernel::rbf;
        } else if (kernel == "linear") {
            cfg.svm_kernel = SvmKernel::linear;
        } else {
            throw validation_error("config: unknown SVM kernel '" + kernel + "'");
        }
        cfg.svm_preset = j["svm"].value("preset", std::string("single"));
        if (cfg.svm_preset != "single" && cfg.svm_preset != "interleaved")
            throw validation_error("config: unknown SVM preset '" + cfg.svm_preset + "'");
    }

    if (j.contains("paths")) {
        const auto& jp = j["paths"];
        cfg.manifest_path = join_path(base_dir, jp.value("manifest", std::string()));
        cfg.atmosphere_path = join_path(base_dir, jp.value("atmosphere", std::string()));
        cfg.model_path = join_path(base_dir, jp.value("model", std::string()));
        cfg.out_dir = join_path(base_dir, jp.value("out_dir", std::string(".")));
        if (jp.contains("labels")) {
            for (const auto& [method, path] : jp["labels"].items()) {
                cfg.label_paths[method] = join_path(base_dir, path.get<std::string>());
            }
        }
        if (jp.contains("ground_truth")) {
            for (const auto& [lake, path] : jp["ground_truth"].items()) {
                cfg.ground_truth_paths[lake] = join_path(base_dir, path.get<std::string>());
            }
        }
        for (const auto& jl : jp.value("loggers", nlohmann::json::array())) {
            LoggerConfig lc;
            lc.path = join_path(base_dir, jl.at("path").get<std::string>());
            const std::string kind = jl.value("kind", std::string("temperature"));
            if (kind == "temperature") {
                lc.kind = LoggerKind::temperature;
            } else if (kind == "pressure") {
                lc.kind = LoggerKind::pressure;
            } else {
                throw validation_error("config: unknown logger kind '" + kind + "'");
            }
            lc.sensor_id = jl.value("sensor_id", lc.path);
            cfg.loggers.push_back(std::move(lc));
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), fs::path(path).parent_path().string());
}

LakeOutline read_outline_csv(const std::string& path, const std::string& lake_id) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open outline file: " + path);
    std::vector<Point> vertices;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        double x, y;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
            throw validation_error(path + ":" + std::to_string(line_no) +
                                   ": expected 'x,y' vertex");
        vertices.push_back({x, y});
    }
    return make_outline(lake_id, std::move(vertices));
}

void write_outline_csv(const LakeOutline& outline, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write outline file: " + path);
    char buf[64];
    for (const Point& p : outline.vertices) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", p.x, p.y);
        out << buf;
    }
}

AtmParams AtmosphereTable::at(DateTime t, int max_dt_minutes) const {
    if (rows.empty()) throw insufficient_data_error("atmosphere table is empty");
    const std::pair<DateTime, AtmParams>* best = nullptr;
    std::int64_t best_dt = std::int64_t(max_dt_minutes) * 60 + 1;
    for (const auto& row : rows) {
        const std::int64_t dt = std::abs(row.first.epoch_seconds() - t.epoch_seconds());
        if (dt < best_dt) {
            best_dt = dt;
            best = &row;
        }
    }
    if (!best)
        throw insufficient_data_error("no atmospheric parameters within " +
                                      std::to_string(max_dt_minutes) + " minutes of " + t.to_iso());
    return best->second;
}

AtmosphereTable read_atmosphere_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open atmosphere file: " + path);
    AtmosphereTable table;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!seen_data && line.rfind("timestamp", 0) == 0) continue;
        seen_data = true;
        std::stringstream ss(line);
        std::string ts, tau, lup, ldown, theta, eps;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, tau, ',') ||
            !std::getline(ss, lup, ',') || !std::getline(ss, ldown, ',') ||
            !std::getline(ss, theta, ',') || !std::getline(ss, eps))
            throw validation_error(path + ":" + std::to_string(line_no) +
                                   ": malformed atmosphere row");
        AtmParams atm{std::stod(tau), std::stod(lup), std::stod(ldown), std::stod(theta),
                      std::stod(eps)};
        atm.validate();
        table.rows.emplace_back(DateTime::parse(ts), atm);
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return table;
}

}  // namespace lakeice
