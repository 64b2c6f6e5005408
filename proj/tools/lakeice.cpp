#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lakeice/pipeline.hpp"

namespace {

int exit_code_for(lakeice::ErrorKind kind) {
    switch (kind) {
        case lakeice::ErrorKind::validation: return 2;
        case lakeice::ErrorKind::numeric: return 3;
        case lakeice::ErrorKind::insufficient_data: return 4;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lakeice: lake ice maps, surface temperatures, and phenology dates from "
                 "satellite raster time series and mooring loggers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string lake;
    std::string from_s, to_s;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    for (const std::string name :
         {"lswt", "icemap", "phenology", "train", "predict", "insitu", "report"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--lake", lake, "restrict to one lake id");
        sub->add_option("--from", from_s, "first date (ISO-8601)");
        sub->add_option("--to", to_s, "last date (ISO-8601)");
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const lakeice::RunConfig config = lakeice::load_config(config_path);
        lakeice::RunOptions options;
        if (!lake.empty()) options.lake = lake;
        if (!from_s.empty()) options.from = lakeice::Date::parse(from_s);
        if (!to_s.empty()) options.to = lakeice::Date::parse(to_s);
        if (!out_dir.empty()) options.out_dir = out_dir;
        if (seed_set) options.seed = seed;

        const std::string command = app.get_subcommands().front()->get_name();
        const lakeice::RunResult result =
            lakeice::run_pipeline(config, lakeice::parse_command(command), options);

        for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
        for (const std::string& a : result.artifacts) std::cout << a << "\n";
        return 0;
    } catch (const lakeice::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
