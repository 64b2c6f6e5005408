#include "lakeice/labels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lakeice {

GroundCode parse_ground_code(const std::string& text) {
    if (text == "s") return GroundCode::s;
    if (text == "i") return GroundCode::i;
    if (text == "w") return GroundCode::w;
    if (text == "ms") return GroundCode::ms;
    if (text == "mi") return GroundCode::mi;
    if (text == "mw") return GroundCode::mw;
    if (text == "c") return GroundCode::c;
    if (text == "u") return GroundCode::u;
    if (text == "n") return GroundCode::n;
    throw validation_error("unknown ground-truth code '" + text + "'");
}

std::string ground_code_name(GroundCode code) {
    switch (code) {
        case GroundCode::s: return "s";
        case GroundCode::i: return "i";
        case GroundCode::w: return "w";
        case GroundCode::ms: return "ms";
        case GroundCode::mi: return "mi";
        case GroundCode::mw: return "mw";
        case GroundCode::c: return "c";
        case GroundCode::u: return "u";
        case GroundCode::n: return "n";
    }
    return "?";
}

namespace {

// Monotone freeze scale: w(0) <-> mw(1) <-> mi/ms(2) <-> i/s(3); -1 = no state.
int code_level(GroundCode c) {
    switch (c) {
        case GroundCode::w: return 0;
        case GroundCode::mw: return 1;
        case GroundCode::mi:
        case GroundCode::ms: return 2;
        case GroundCode::i:
        case GroundCode::s: return 3;
        default: return -1;
    }
}

GroundCode level_code(int level) {
    switch (level) {
        case 0: return GroundCode::w;
        case 1: return GroundCode::mw;
        case 2: return GroundCode::mi;
        default: return GroundCode::i;
    }
}

}  // namespace

std::vector<EnrichedDay> enrich_labels(const std::vector<std::pair<Date, GroundCode>>& raw) {
    std::vector<EnrichedDay> days;
    days.reserve(raw.size());
    for (const auto& [date, code] : raw) {
        days.push_back(EnrichedDay{date, code, code, CleanLabel::unknown, false});
    }
    const long n = long(days.size());

    // Gap filling: c/u/n runs strictly inside fully frozen (level 3) or fully
    // non-frozen (level 0) neighbours inherit that state.
    for (long i = 0; i < n; ++i) {
        if (code_level(days[i].cleaned) >= 0) continue;
        long j = i;
        while (j < n && code_level(days[j].cleaned) < 0) ++j;
        if (i > 0 && j < n) {
            const int before = code_level(days[i - 1].cleaned);
            const int after = code_level(days[j].cleaned);
            if (before == after && (before == 0 || before == 3)) {
                for (long k = i; k < j; ++k) days[k].cleaned = days[i - 1].cleaned;
            }
        }
        i = j - 1;
    }

    // Spike smoothing: a single day jumping by two or more levels against
    // both neighbours breaks the slow freeze/melt pattern and is replaced by
    // the interpolated level.
    for (long i = 0; i < n; ++i) {
        const int level = code_level(days[i].cleaned);
        if (level < 0) continue;
        long prev = i - 1, next = i + 1;
        while (prev >= 0 && code_level(days[prev].cleaned) < 0) --prev;
        while (next < n && code_level(days[next].cleaned) < 0) ++next;
        if (prev < 0 || next >= n) continue;
        const int lp = code_level(days[prev].cleaned);
        const int ln = code_level(days[next].cleaned);
        if (std::abs(level - lp) >= 2 && std::abs(level - ln) >= 2) {
            const int interp = int(std::lround((double(lp) + double(ln)) / 2.0));
            days[i].cleaned = level_code(interp);
        }
    }

    for (EnrichedDay& d : days) {
        switch (code_level(d.cleaned)) {
            case 0: d.label = CleanLabel::non_frozen; break;
            case 3: d.label = CleanLabel::frozen; break;
            case 1:
            case 2:
                d.label = CleanLabel::transition;
                d.is_transition = true;
                break;
            default: d.label = CleanLabel::unknown; break;
        }
    }
    return days;
}

std::vector<std::pair<Date, GroundCode>> read_ground_codes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open label file: " + path);
    std::vector<std::pair<Date, GroundCode>> out;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!seen_data && line.rfind("date,", 0) == 0) continue;
        seen_data = true;
        std::stringstream ss(line);
        std::string date_s, code_s;
        if (!std::getline(ss, date_s, ',') || !std::getline(ss, code_s))
            throw validation_error(path + ":" + std::to_string(line_no) + ": malformed label row");
        out.emplace_back(Date::parse(date_s), parse_ground_code(code_s));
    }
    return out;
}

}  // namespace lakeice
