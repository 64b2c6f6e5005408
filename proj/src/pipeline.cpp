#include "lakeice/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lakeice/features.hpp"
#include "lakeice/splits.hpp"
#include "lakeice/svm.hpp"

namespace lakeice {

namespace {

namespace fs = std::filesystem;

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::size_t thread_cap() {
    if (const char* env = std::getenv("LAKEICE_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return std::size_t(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(i) for every index, fanning out across at most LAKEICE_THREADS
/// workers. Results are collected in index order, keeping outputs
/// deterministic.
template <typename Fn>
void parallel_indexed(std::size_t count, Fn fn) {
    const std::size_t workers = std::min(thread_cap(), std::max<std::size_t>(count, 1));
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        }));
    }
    for (auto& f : futures) f.get();
}

struct LakeContext {
    const LakeConfig* cfg;
    LakeOutline outline;          // shift applied
    std::optional<GeoShift> shift_used;
};

LakeContext prepare_lake(const LakeConfig& lake_cfg, const RunConfig& config,
                         const std::vector<Acquisition>& acquisitions,
                         std::vector<std::string>& warnings) {
    LakeContext ctx;
    ctx.cfg = &lake_cfg;
    ctx.outline = read_outline_csv(lake_cfg.outline_path, lake_cfg.id);

    std::optional<GeoShift> shift = lake_cfg.shift;
    if (lake_cfg.estimate_shift) {
        std::vector<LakeOutline> outlines;
        for (const LakeConfig& lc : config.lakes)
            outlines.push_back(read_outline_csv(lc.outline_path, lc.id));
        std::vector<ShiftAcquisition> shift_acqs;
        for (const Acquisition& acq : acquisitions) {
            if (!acq.bands.count(config.nir_band)) continue;
            shift_acqs.push_back(ShiftAcquisition{&acq.band(config.nir_band), &acq.clouds});
        }
        ShiftEstimationParams params;
        params.require_corner_coverage = false;
        params.min_clean_pixels = 50;  // pipeline scenes are per-lake subsets
        shift = estimate_geolocation_shift(shift_acqs, outlines, params);
        warnings.push_back("lake " + lake_cfg.id + ": estimated geolocation shift (" +
                           fmt_num(shift->sx) + ", " + fmt_num(shift->sy) + ") px");
    }
    if (shift && !acquisitions.empty()) {
        const GridGeometry g = acquisitions.front().geometry();
        ctx.outline = apply_shift(ctx.outline, *shift, g.dx, g.dy, ShiftRounding::none);
        ctx.shift_used = shift;
    }
    return ctx;
}

bool within_range(Date d, const RunOptions& opt) {
    if (opt.from && d < *opt.from) return false;
    if (opt.to && d > *opt.to) return false;
    return true;
}

/// The LSWT grid of one acquisition: per-pixel inversion of the thermal band.
RasterGrid lswt_grid(const Acquisition& acq, const RunConfig& config,
                     const AtmosphereTable& atmosphere) {
    const RasterGrid& thermal = acq.band(config.thermal_band_name);
    const AtmParams atm = atmosphere.at(acq.timestamp);
    RasterGrid out(thermal.geom, thermal.nodata, thermal.nodata);
    for (std::size_t i = 0; i < thermal.values.size(); ++i) {
        if (thermal.values[i] == thermal.nodata) {
            out.values[i] = out.nodata;
            continue;
        }
        const LswtResult res = invert_pmw(thermal.values[i], atm, config.thermal_band);
        out.values[i] = res.quality == LswtQuality::ok ? res.lswt_k : out.nodata;
    }
    return out;
}

std::ofstream open_artifact(const std::string& path, RunResult& result) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write artifact: " + path);
    result.artifacts.push_back(path);
    return out;
}

void cmd_lswt(const RunConfig& config, const RunOptions& opt, const IngestResult& ingested,
              const std::string& out_dir, RunResult& result) {
    const AtmosphereTable atmosphere = read_atmosphere_csv(config.atmosphere_path);

    struct SeriesRow {
        DateTime time;
        double mean;
        std::size_t n;
    };
    std::map<std::string, std::vector<SeriesRow>> series;

    for (const Acquisition& acq : ingested.acquisitions) {
        if (!within_range(acq.timestamp.date(), opt)) continue;
        const RasterGrid grid = lswt_grid(acq, config, atmosphere);
        std::string stamp = acq.timestamp.to_iso();
        std::replace(stamp.begin(), stamp.end(), ':', '-');
        const std::string path = out_dir + "/lswt_" + stamp + ".asc";
        write_esri_ascii(grid, path);
        result.artifacts.push_back(path);

        for (const LakeConfig& lake_cfg : config.lakes) {
            if (opt.lake && *opt.lake != lake_cfg.id) continue;
            std::vector<std::string> warn;
            const LakeContext ctx = prepare_lake(lake_cfg, config, ingested.acquisitions, warn);
            const LakeMask mask = rasterize_outline(ctx.outline, grid.geom);
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t r = 0; r < grid.geom.nrows; ++r) {
                for (std::size_t c = 0; c < grid.geom.ncols; ++c) {
                    if (mask.at(r, c) != PixelClass::clean) continue;
                    if (acq.clouds.is_cloudy(r, c) || grid.is_nodata(r, c)) continue;
                    sum += grid.at(r, c);
                    ++n;
                }
            }
            if (n) series[lake_cfg.id].push_back(SeriesRow{acq.timestamp, sum / double(n), n});
        }
    }

    for (const auto& [lake, rows] : series) {
        std::ofstream out = open_artifact(out_dir + "/lswt_series_" + lake + ".csv", result);
        out << "# config " << config.config_hash << "\n";
        out << "timestamp,mean_lswt_k,n_clear\n";
        for (const SeriesRow& row : rows)
            out << row.time.to_iso() << ',' << fmt_num(row.mean) << ',' << row.n << '\n';
    }
}

void cmd_icemap(const RunConfig& config, const RunOptions& opt, const IngestResult& ingested,
                const std::string& out_dir, RunResult& result) {
    const AtmosphereTable atmosphere = read_atmosphere_csv(config.atmosphere_path);
    for (const LakeConfig& lake_cfg : config.lakes) {
        if (opt.lake && *opt.lake != lake_cfg.id) continue;
        const LakeContext ctx = prepare_lake(lake_cfg, config, ingested.acquisitions,
                                             result.warnings);
        for (const Acquisition& acq : ingested.acquisitions) {
            if (!within_range(acq.timestamp.date(), opt)) continue;
            LakeMask mask = rasterize_outline(ctx.outline, acq.geometry());
            if (lake_cfg.buffer_m > 0.0)
                mask = buffered_lake_mask(mask, ctx.outline, lake_cfg.buffer_m);
            const double cloudy = cloud_fraction(acq.clouds, mask);
            if (!is_processable(cloudy)) {
                result.warnings.push_back("lake " + lake_cfg.id + " " + acq.timestamp.to_iso() +
                                          ": " + fmt_num(100.0 * cloudy) +
                                          "% cloudy, not processed");
                continue;
            }
            const RasterGrid lswt = lswt_grid(acq, config, atmosphere);
            const IceMapResult icemap =
                ice_map(acq.band(config.nir_band), acq.band(config.swir_band), lswt, acq.clouds,
                        mask, config.ice_thresholds);
            std::string stamp = acq.timestamp.to_iso();
            std::replace(stamp.begin(), stamp.end(), ':', '-');
            const std::string path = out_dir + "/icemap_" + lake_cfg.id + "_" + stamp + ".asc";
            write_ice_map(icemap, path);
            result.artifacts.push_back(path);
            result.artifacts.push_back(path + ".summary.json");
        }
    }
}

DailyLakeSeries collect_daily_series(const RunConfig& config, const RunOptions& opt,
                                     const IngestResult& ingested, const LakeContext& ctx,
                                     const AtmosphereTable& atmosphere,
                                     std::vector<std::string>& warnings) {
    std::vector<AcquisitionSamples> samples;
    for (const Acquisition& acq : ingested.acquisitions) {
        if (!within_range(acq.timestamp.date(), opt)) continue;
        const LakeMask mask = rasterize_outline(ctx.outline, acq.geometry());
        const double cloudy = cloud_fraction(acq.clouds, mask);
        if (!is_processable(cloudy)) {
            warnings.push_back("lake " + ctx.cfg->id + " " + acq.timestamp.to_iso() + ": " +
                               fmt_num(100.0 * cloudy) + "% cloudy, not processed");
            continue;
        }
        const RasterGrid& nir = acq.band(config.nir_band);
        const RasterGrid lswt = lswt_grid(acq, config, atmosphere);
        AcquisitionSamples s{acq.timestamp.date(), {}, {}};
        for (std::size_t r = 0; r < mask.geom.nrows; ++r) {
            for (std::size_t c = 0; c < mask.geom.ncols; ++c) {
                if (mask.at(r, c) != PixelClass::clean || acq.clouds.is_cloudy(r, c)) continue;
                s.nir.push_back(nir.is_nodata(r, c) ? missing_value() : nir.at(r, c));
                s.lswt.push_back(lswt.is_nodata(r, c) ? missing_value() : lswt.at(r, c));
            }
        }
        samples.push_back(std::move(s));
    }
    if (samples.empty())
        throw insufficient_data_error("lake " + ctx.cfg->id + ": no processable acquisition");
    return aggregate_daily(samples);
}

void write_events_json(const PhenologyEvents& ev, const std::string& lake,
                       const std::string& config_hash, const std::string& path,
                       RunResult& result) {
    nlohmann::json j;
    j["lake"] = lake;
    j["config_hash"] = config_hash;
    auto put = [&](const char* key, const std::optional<Date>& d) {
        if (d) j[key] = d->to_iso();
        else j[key] = nullptr;
    };
    put("FUS", ev.fus);
    put("FUE", ev.fue);
    put("BUS", ev.bus);
    put("BUE", ev.bue);
    put("ice_on", ev.ice_on);
    put("ice_off", ev.ice_off);
    j["uncertainties_days"] = {{"FUE", ev.fue_uncertainty_days}, {"BUS", ev.bus_uncertainty_days}};
    j["status"] = ev.status;
    j["warnings"] = ev.warnings;
    std::ofstream out = open_artifact(path, result);
    out << j.dump(2) << "\n";
}

void cmd_phenology(const RunConfig& config, const RunOptions& opt, const IngestResult& ingested,
                   const std::string& out_dir, RunResult& result) {
    const AtmosphereTable atmosphere = read_atmosphere_csv(config.atmosphere_path);

    std::vector<const LakeConfig*> lakes;
    for (const LakeConfig& lc : config.lakes) {
        if (!opt.lake || *opt.lake == lc.id) lakes.push_back(&lc);
    }
    struct LakeOut {
        DailyLakeSeries series;
        TwoStepResult two_step;
        std::vector<std::string> warnings;
    };
    std::vector<LakeOut> outputs(lakes.size());
    parallel_indexed(lakes.size(), [&](std::size_t i) {
        LakeOut& lo = outputs[i];
        const LakeContext ctx = prepare_lake(*lakes[i], config, ingested.acquisitions, lo.warnings);
        lo.series = collect_daily_series(config, opt, ingested, ctx, atmosphere, lo.warnings);
        lo.two_step = two_step_phenology(lo.series, config.phenology);
    });

    for (std::size_t i = 0; i < lakes.size(); ++i) {
        const LakeOut& lo = outputs[i];
        const std::string& lake = lakes[i]->id;
        result.warnings.insert(result.warnings.end(), lo.warnings.begin(), lo.warnings.end());

        {
            std::ofstream out = open_artifact(out_dir + "/daily_" + lake + ".csv", result);
            out << "# config " << config.config_hash << "\n";
            out << "date,mean_nir,mean_lswt,frac_nir_gt,frac_nir_lt,frac_lswt_frozen,"
                   "frac_lswt_open,n_obs\n";
            const double thr_frozen = lo.two_step.thresholds.frozen_k.value_or(
                config.phenology.fallback_threshold_k);
            const double thr_open =
                lo.two_step.thresholds.open_k.value_or(config.phenology.fallback_threshold_k);
            for (const DailyRecord& day : lo.series.days) {
                out << day.date.to_iso() << ',';
                if (!is_missing(day.mean_nir)) out << fmt_num(day.mean_nir);
                out << ',';
                if (!is_missing(day.mean_lswt)) out << fmt_num(day.mean_lswt);
                out << ',';
                auto frac_field = [&](double v) {
                    if (!is_missing(v)) out << fmt_num(v);
                    out << ',';
                };
                frac_field(frac_above(day.nir_samples, config.phenology.nir_frozen_refl));
                frac_field(frac_below(day.nir_samples, config.phenology.nir_open_refl));
                frac_field(frac_below(day.lswt_samples, thr_frozen));
                frac_field(frac_above(day.lswt_samples, thr_open));
                out << day.n_obs << '\n';
            }
        }
        {
            std::ofstream out = open_artifact(out_dir + "/bounds_" + lake + ".csv", result);
            out << "# config " << config.config_hash << "\n";
            out << "date,nir_despiked,lower,upper\n";
            const TwoStepResult& ts = lo.two_step;
            for (std::size_t d = 0; d < ts.nir_despiked.size(); ++d) {
                out << ts.nir_despiked.date_at(d).to_iso() << ',';
                auto field = [&](double v, bool last = false) {
                    if (!is_missing(v)) out << fmt_num(v);
                    if (!last) out << ',';
                };
                field(ts.nir_despiked.values[d]);
                field(ts.nir_bounds.lower.values[d]);
                field(ts.nir_bounds.upper.values[d], true);
                out << '\n';
            }
        }
        write_events_json(lo.two_step.events, lake, config.config_hash,
                          out_dir + "/events_" + lake + ".json", result);
    }
}

/// Scorer covering both model layouts: a single model file, or the
/// interleaved pair where the split a date belongs to picks the model
/// trained on the other split.
struct Scorer {
    std::optional<SvmModel> single;
    std::optional<SvmModel> model1, model2;
    std::set<int> split1, split2;

    static Scorer load(const std::string& model_path) {
        Scorer s;
        std::ifstream probe(model_path);
        if (!probe) throw validation_error("predict: cannot open model file " + model_path);
        std::stringstream ss;
        ss << probe.rdbuf();
        nlohmann::json j = nlohmann::json::parse(ss.str());
        if (!j.contains("split1")) {
            s.single = SvmModel::from_json(ss.str());
            return s;
        }
        const std::string base = fs::path(model_path).parent_path().string();
        s.model1 = SvmModel::load(base + "/" + j.at("model1").get<std::string>());
        s.model2 = SvmModel::load(base + "/" + j.at("model2").get<std::string>());
        for (const auto& d : j.at("split1")) s.split1.insert(Date::parse(d).serial());
        for (const auto& d : j.at("split2")) s.split2.insert(Date::parse(d).serial());
        return s;
    }

    double score(const std::vector<double>& row, Date date) const {
        if (single) return decision_to_score(single->decision_value(row));
        if (split1.count(date.serial()))
            return decision_to_score(model2->decision_value(row));
        if (split2.count(date.serial()))
            return decision_to_score(model1->decision_value(row));
        return 0.5 * (decision_to_score(model1->decision_value(row)) +
                      decision_to_score(model2->decision_value(row)));
    }
};

/// Enumerates clean pixels of the lake mask in row-major order; the cube's
/// pixel axis follows this order.
std::vector<std::size_t> clean_pixel_indices(const LakeMask& mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < mask.classes.size(); ++i) {
        if (mask.classes[i] == PixelClass::clean) idx.push_back(i);
    }
    return idx;
}

void cmd_predict(const RunConfig& config, const RunOptions& opt, const IngestResult& ingested,
                 const std::string& out_dir, RunResult& result) {
    if (config.model_path.empty() || !fs::exists(config.model_path))
        throw validation_error("predict: model required (configure paths.model)");
    const Scorer scorer = Scorer::load(config.model_path);

    for (const LakeConfig& lake_cfg : config.lakes) {
        if (opt.lake && *opt.lake != lake_cfg.id) continue;
        const LakeContext ctx = prepare_lake(lake_cfg, config, ingested.acquisitions,
                                             result.warnings);
        std::vector<ScoredAcquisition> scored;
        std::vector<std::size_t> pixels;
        for (const Acquisition& acq : ingested.acquisitions) {
            if (!within_range(acq.timestamp.date(), opt)) continue;
            const LakeMask mask = rasterize_outline(ctx.outline, acq.geometry());
            if (pixels.empty()) pixels = clean_pixel_indices(mask);
            const double cloudy = cloud_fraction(acq.clouds, mask);
            if (!is_processable(cloudy)) continue;

            ScoredAcquisition sa{acq.timestamp.date(),
                                 std::vector<double>(pixels.size(), missing_value())};
            for (std::size_t p = 0; p < pixels.size(); ++p) {
                const std::size_t r = pixels[p] / mask.geom.ncols;
                const std::size_t c = pixels[p] % mask.geom.ncols;
                if (acq.clouds.is_cloudy(r, c)) continue;
                std::vector<double> row;
                row.reserve(config.feature_bands.size());
                bool valid = true;
                for (const std::string& band : config.feature_bands) {
                    const RasterGrid& g = acq.band(band);
                    if (g.is_nodata(r, c)) {
                        valid = false;
                        break;
                    }
                    row.push_back(g.at(r, c));
                }
                if (!valid) continue;
                sa.pixel_scores[p] = scorer.score(row, acq.timestamp.date());
            }
            scored.push_back(std::move(sa));
        }
        if (scored.empty()) {
            result.warnings.push_back("lake " + lake_cfg.id + ": nothing to predict");
            continue;
        }
        DailyScoreCube cube = daily_aggregate(scored);
        cube = mta_smooth(cube, config.mta.scheme, config.mta.window_days);
        DailyLabelSeries labels = label_series(cube, lake_cfg.frozen_threshold);
        labels.lake = lake_cfg.id;
        labels.method = "svm";
        const std::string path = out_dir + "/labels_" + lake_cfg.id + ".csv";
        write_label_series(labels, path);
        result.artifacts.push_back(path);
    }
}

void cmd_train(const RunConfig& config, const RunOptions& opt, const IngestResult& ingested,
               const std::string& out_dir, RunResult& result) {
    if (config.ground_truth_paths.empty())
        throw validation_error("train: ground truth labels required (configure paths.ground_truth)");

    std::vector<std::vector<double>> rows;
    std::vector<SvmLabel> labels;
    std::vector<Date> row_dates;
    for (const LakeConfig& lake_cfg : config.lakes) {
        if (opt.lake && *opt.lake != lake_cfg.id) continue;
        auto it = config.ground_truth_paths.find(lake_cfg.id);
        if (it == config.ground_truth_paths.end()) continue;
        const std::vector<EnrichedDay> truth = enrich_labels(read_ground_codes(it->second));
        std::map<int, CleanLabel> by_day;
        for (const EnrichedDay& d : truth) by_day[d.date.serial()] = d.label;

        const LakeContext ctx = prepare_lake(lake_cfg, config, ingested.acquisitions,
                                             result.warnings);
        std::vector<FeatureAcquisition> feature_acqs;
        std::vector<std::vector<const RasterGrid*>> band_ptrs;
        LakeMask mask;
        bool mask_ready = false;
        for (const Acquisition& acq : ingested.acquisitions) {
            if (!within_range(acq.timestamp.date(), opt)) continue;
            auto day_it = by_day.find(acq.timestamp.date().serial());
            // Only non-transition dates with reliable labels enter training.
            if (day_it == by_day.end() || (day_it->second != CleanLabel::frozen &&
                                           day_it->second != CleanLabel::non_frozen))
                continue;
            if (!mask_ready) {
                mask = rasterize_outline(ctx.outline, acq.geometry());
                mask_ready = true;
            }
            FeatureAcquisition fa;
            fa.lake = lake_cfg.id;
            fa.date = acq.timestamp.date();
            fa.clouds = &acq.clouds;
            for (const std::string& band : config.feature_bands) fa.bands.push_back(&acq.band(band));
            feature_acqs.push_back(std::move(fa));
        }
        if (feature_acqs.empty()) continue;
        const FeatureMatrix fm =
            assemble_features(feature_acqs, mask, config.feature_bands);
        for (std::size_t i = 0; i < fm.n_rows(); ++i) {
            const CleanLabel lbl = by_day.at(fm.meta[i].date.serial());
            rows.push_back(fm.rows[i]);
            labels.push_back(lbl == CleanLabel::frozen ? SvmLabel::frozen : SvmLabel::non_frozen);
            row_dates.push_back(fm.meta[i].date);
        }
    }
    if (rows.empty()) throw insufficient_data_error("train: no labelled training rows");

    SvmTrainOptions train_opts;
    train_opts.kernel = config.svm_kernel;

    if (config.svm_preset == "single") {
        SvmModel model = train_svm(rows, labels, train_opts);
        model.training_note = "rows=" + std::to_string(rows.size());
        const std::string path = out_dir + "/model.json";
        model.save(path);
        result.artifacts.push_back(path);
        return;
    }

    // Interleaved preset: two models over temporally interleaved date splits;
    // prediction later crosses them (split-1 dates scored by model 2 and vice
    // versa, everything else by the average).
    const InterleavedSplit split = interleaved_split(row_dates);
    std::set<int> in_split1;
    for (Date d : split.split1) in_split1.insert(d.serial());

    std::vector<std::vector<double>> rows1, rows2;
    std::vector<SvmLabel> labels1, labels2;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool first = in_split1.count(row_dates[i].serial()) > 0;
        (first ? rows1 : rows2).push_back(rows[i]);
        (first ? labels1 : labels2).push_back(labels[i]);
    }
    if (rows1.empty() || rows2.empty())
        throw insufficient_data_error("train: interleaved split left one half empty");

    SvmModel model1 = train_svm(rows1, labels1, train_opts);
    model1.training_note = "split1 rows=" + std::to_string(rows1.size());
    SvmModel model2 = train_svm(rows2, labels2, train_opts);
    model2.training_note = "split2 rows=" + std::to_string(rows2.size());
    model1.save(out_dir + "/model1.json");
    model2.save(out_dir + "/model2.json");
    result.artifacts.push_back(out_dir + "/model1.json");
    result.artifacts.push_back(out_dir + "/model2.json");

    nlohmann::json j;
    j["model1"] = "model1.json";
    j["model2"] = "model2.json";
    std::vector<std::string> s1, s2;
    for (Date d : split.split1) s1.push_back(d.to_iso());
    for (Date d : split.split2) s2.push_back(d.to_iso());
    j["split1"] = s1;
    j["split2"] = s2;
    std::ofstream out = open_artifact(out_dir + "/splits.json", result);
    out << j.dump(2) << "\n";
}


void cmd_insitu(const RunConfig& config, const RunOptions&, const std::string& out_dir,
                RunResult& result) {
    if (config.loggers.empty()) throw validation_error("insitu: no loggers configured");

    std::vector<LoggerSeries> temperature;
    std::vector<LoggerSeries> pressure;
    for (const LoggerConfig& lc : config.loggers) {
        LoggerSeries s = read_logger_csv(lc.path, lc.kind, lc.sensor_id);
        (lc.kind == LoggerKind::temperature ? temperature : pressure).push_back(std::move(s));
    }
    std::sort(temperature.begin(), temperature.end(),
              [](const LoggerSeries& a, const LoggerSeries& b) { return a.depth_m < b.depth_m; });

    std::vector<std::pair<std::string, DetectorResult>> detections;
    if (temperature.size() >= 2)
        detections.emplace_back("correlation",
                                detect_by_correlation(temperature[0], temperature[1]));
    if (!temperature.empty())
        detections.emplace_back("spectral", detect_by_spectral_energy(temperature.back()));
    if (!pressure.empty())
        detections.emplace_back("pressure", detect_by_pressure(pressure.front()));
    if (detections.empty())
        throw insufficient_data_error("insitu: need two temperature loggers, or one for the "
                                      "spectral method, or a pressure logger");

    for (const auto& [method, det] : detections) {
        nlohmann::json j;
        j["method"] = method;
        j["config_hash"] = config.config_hash;
        j["freeze_up"] = det.interval.freeze_up ? nlohmann::json(det.interval.freeze_up->to_iso())
                                                : nlohmann::json(nullptr);
        j["break_up"] = det.interval.break_up ? nlohmann::json(det.interval.break_up->to_iso())
                                              : nlohmann::json(nullptr);
        j["status"] = det.interval.status;
        std::ofstream out = open_artifact(out_dir + "/insitu_" + method + ".json", result);
        out << j.dump(2) << "\n";
        const std::string diag_path = out_dir + "/insitu_" + method + "_diagnostics.csv";
        write_diagnostics_csv(det.diagnostics, diag_path);
        result.artifacts.push_back(diag_path);
    }
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "lswt") return Command::lswt;
    if (name == "icemap") return Command::icemap;
    if (name == "phenology") return Command::phenology;
    if (name == "train") return Command::train;
    if (name == "predict") return Command::predict;
    if (name == "insitu") return Command::insitu;
    if (name == "report") return Command::report;
    throw validation_error("unknown command '" + name + "'");
}

ComparisonTable build_comparison(const std::vector<DailyLabelSeries>& methods,
                                 int max_disagreement_days) {
    ComparisonTable table;
    for (const DailyLabelSeries& m : methods) {
        ComparisonRow row;
        row.lake = m.lake;
        row.method = m.method;
        row.dates = extract_ice_dates(m);
        const int gap =
            std::max(row.dates.ice_on_uncertainty_days, row.dates.ice_off_uncertainty_days);
        if (!row.dates.ice_on || !row.dates.ice_off) {
            row.confidence = "low";
        } else if (gap == 0) {
            row.confidence = "high";
        } else {
            row.confidence = gap <= 2 ? "medium" : "low";
        }
        if (gap > 0) row.remarks = "adjacent nd gaps: +-" + std::to_string(gap) + " days";
        table.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < table.rows.size(); ++j) {
            const ComparisonRow& a = table.rows[i];
            const ComparisonRow& b = table.rows[j];
            if (a.lake != b.lake) continue;
            auto flag_if_far = [&](const std::optional<Date>& da, const std::optional<Date>& db,
                                   const char* event) {
                if (!da || !db) return;
                const int diff = std::abs(*da - *db);
                if (diff > max_disagreement_days) {
                    table.disagreement_flags.push_back(
                        a.lake + " " + event + ": " + a.method + " " + da->to_iso() + " vs " +
                        b.method + " " + db->to_iso() + " differ by " + std::to_string(diff) +
                        " days");
                }
            };
            flag_if_far(a.dates.ice_on, b.dates.ice_on, "ice_on");
            flag_if_far(a.dates.ice_off, b.dates.ice_off, "ice_off");
        }
    }
    return table;
}

RunResult emit_report(const std::vector<DailyLabelSeries>& methods, const std::string& out_dir,
                      const std::string& config_hash) {
    if (methods.empty()) throw validation_error("report: no method results present");
    RunResult result;
    fs::create_directories(out_dir);

    // Per-day table across the union of dates.
    std::set<Date> dates;
    for (const DailyLabelSeries& m : methods) {
        for (const DailyLabel& d : m.days) dates.insert(d.date);
    }
    std::vector<std::map<int, const DailyLabel*>> lookup(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        for (const DailyLabel& d : methods[i].days) lookup[i][d.date.serial()] = &d;
    }
    {
        std::ofstream out = open_artifact(out_dir + "/report_daily.csv", result);
        out << "# config " << config_hash << "\n";
        out << "date";
        for (const DailyLabelSeries& m : methods) {
            out << ',' << m.method << "_label," << m.method << "_pct_fp";
        }
        out << '\n';
        for (Date d : dates) {
            out << d.to_iso();
            for (std::size_t i = 0; i < methods.size(); ++i) {
                auto it = lookup[i].find(d.serial());
                const DailyLabel* lbl = it == lookup[i].end() ? nullptr : it->second;
                out << ',';
                if (!lbl || lbl->label == DayLabel::nd) {
                    out << "nd";
                } else {
                    out << (lbl->label == DayLabel::yes ? 'Y' : 'N');
                }
                out << ',';
                if (lbl && lbl->pct_fp) out << fmt_num(*lbl->pct_fp);
            }
            out << '\n';
        }
    }

    // Normalized per-method label CSVs (re-ingestable).
    for (const DailyLabelSeries& m : methods) {
        const std::string path = out_dir + "/labels_" + m.lake + "_" + m.method + ".csv";
        write_label_series(m, path);
        result.artifacts.push_back(path);
    }

    const ComparisonTable table = build_comparison(methods);
    {
        std::ofstream out = open_artifact(out_dir + "/report_summary.csv", result);
        out << "# config " << config_hash << "\n";
        out << "lake,method,ice_on,ice_on_uncertainty_days,ice_off,ice_off_uncertainty_days,"
               "confidence,status,remarks\n";
        for (const ComparisonRow& row : table.rows) {
            out << row.lake << ',' << row.method << ','
                << (row.dates.ice_on ? row.dates.ice_on->to_iso() : "") << ','
                << row.dates.ice_on_uncertainty_days << ','
                << (row.dates.ice_off ? row.dates.ice_off->to_iso() : "") << ','
                << row.dates.ice_off_uncertainty_days << ',' << row.confidence << ','
                << row.dates.status << ',' << row.remarks << '\n';
        }
    }
    {
        std::ofstream out = open_artifact(out_dir + "/report_summary.txt", result);
        out << "Estimated ice-on/off dates (config " << config_hash << ")\n\n";
        for (const ComparisonRow& row : table.rows) {
            out << row.lake << " / " << row.method << ": ice_on "
                << (row.dates.ice_on ? row.dates.ice_on->to_iso() : "missing") << ", ice_off "
                << (row.dates.ice_off ? row.dates.ice_off->to_iso() : "missing")
                << ", confidence " << row.confidence;
            if (row.dates.status != "ok") out << " [" << row.dates.status << "]";
            if (!row.remarks.empty()) out << " (" << row.remarks << ")";
            out << '\n';
        }
        if (!table.disagreement_flags.empty()) {
            out << "\nDisagreements beyond +-2 days:\n";
            for (const std::string& flag : table.disagreement_flags) out << "  " << flag << '\n';
        }
    }

    // Plot-ready %FP timelines.
    for (const DailyLabelSeries& m : methods) {
        std::ofstream out =
            open_artifact(out_dir + "/timeline_" + m.lake + "_" + m.method + ".csv", result);
        out << "# config " << config_hash << "\n";
        out << "date,pct_fp\n";
        for (const DailyLabel& d : m.days) {
            out << d.date.to_iso() << ',';
            if (d.pct_fp) out << fmt_num(*d.pct_fp);
            out << '\n';
        }
    }
    return result;
}

RunResult run_pipeline(const RunConfig& config, Command command, const RunOptions& options) {
    RunConfig cfg = config;
    if (options.seed) cfg.seed = *options.seed;
    const std::string out_dir = options.out_dir.value_or(cfg.out_dir);
    fs::create_directories(out_dir);

    RunResult result;
    if (command == Command::report) {
        std::vector<DailyLabelSeries> methods;
        for (const auto& [method, path] : cfg.label_paths) {
            std::string lake = cfg.lakes.empty() ? "lake" : cfg.lakes.front().id;
            if (options.lake) lake = *options.lake;
            methods.push_back(read_label_series(path, lake, method));
        }
        RunResult rep = emit_report(methods, out_dir, cfg.config_hash);
        result.artifacts.insert(result.artifacts.end(), rep.artifacts.begin(),
                                rep.artifacts.end());
        result.warnings.insert(result.warnings.end(), rep.warnings.begin(), rep.warnings.end());
        return result;
    }
    if (command == Command::insitu) {
        cmd_insitu(cfg, options, out_dir, result);
        return result;
    }

    if (cfg.manifest_path.empty())
        throw validation_error("command requires paths.manifest in the config");
    const IngestResult ingested = ingest(cfg.manifest_path);
    result.warnings = ingested.warnings;

    switch (command) {
        case Command::lswt: cmd_lswt(cfg, options, ingested, out_dir, result); break;
        case Command::icemap: cmd_icemap(cfg, options, ingested, out_dir, result); break;
        case Command::phenology: cmd_phenology(cfg, options, ingested, out_dir, result); break;
        case Command::train: cmd_train(cfg, options, ingested, out_dir, result); break;
        case Command::predict: cmd_predict(cfg, options, ingested, out_dir, result); break;
        default: break;
    }
    return result;
}

}  // namespace lakeice
