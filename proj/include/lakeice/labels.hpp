#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

/// Daily lake-state codes from visual interpretation:
/// s/i fully frozen, w fully non-frozen, ms/mi/mw partial, c clouds,
/// u unclear, n no data.
enum class GroundCode : std::uint8_t { s, i, w, ms, mi, mw, c, u, n };

GroundCode parse_ground_code(const std::string& text);
std::string ground_code_name(GroundCode code);

enum class CleanLabel : std::uint8_t { frozen, non_frozen, transition, unknown };

struct EnrichedDay {
    Date date;
    GroundCode raw;
    GroundCode cleaned;       // after gap filling and spike smoothing
    CleanLabel label;
    bool is_transition = false;  // ms/mi/mw: excluded from training
};

/// Ground-truth enrichment: c/u/n days strictly inside a run of fully frozen
/// (i/s) days become frozen, inside fully non-frozen (w) runs non-frozen;
/// isolated single-day spikes violating the monotone transition pattern
/// w <-> mw <-> mi/ms <-> i/s are replaced by interpolation; partial days are
/// flagged transition.
std::vector<EnrichedDay> enrich_labels(const std::vector<std::pair<Date, GroundCode>>& raw);

/// CSV `date,code` using the code vocabulary above.
std::vector<std::pair<Date, GroundCode>> read_ground_codes(const std::string& path);

}  // namespace lakeice
