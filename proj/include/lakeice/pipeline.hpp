#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lakeice/config.hpp"
#include "lakeice/manifest.hpp"
#include "lakeice/scores.hpp"

namespace lakeice {

enum class Command { lswt, icemap, phenology, train, predict, insitu, report };

Command parse_command(const std::string& name);

struct RunOptions {
    std::optional<std::string> lake;  // restrict to one lake id
    std::optional<Date> from;
    std::optional<Date> to;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

struct RunResult {
    std::vector<std::string> artifacts;  // paths written, in order
    std::vector<std::string> warnings;
};

/// Runs one pipeline stage. Outputs are deterministic for a fixed config and
/// seed, and every CSV/JSON artifact carries the config hash.
RunResult run_pipeline(const RunConfig& config, Command command, const RunOptions& options = {});

struct ComparisonRow {
    std::string lake;
    std::string method;
    IceDates dates;
    std::string confidence;  // high / medium / low, from the adjacent nd gaps
    std::string remarks;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    std::vector<std::string> disagreement_flags;  // method pairs differing > 2 days
};

ComparisonTable build_comparison(const std::vector<DailyLabelSeries>& methods,
                                 int max_disagreement_days = 2);

/// Per-day table (one column pair per method), the summary table, and the
/// plot CSVs for the %FP timelines.
RunResult emit_report(const std::vector<DailyLabelSeries>& methods, const std::string& out_dir,
                      const std::string& config_hash);

}  // namespace lakeice
