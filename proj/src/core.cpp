#include "lakeice/core.hpp"

#include <cstdio>
#include <vector>

namespace lakeice {

Date Date::parse(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u", &y, &m, &d) == 3 && text.find('-') != std::string::npos) {
        return Date(y, m, d);
    }
    unsigned dd = 0, mm = 0, yy = 0;
    if (std::sscanf(text.c_str(), "%u.%u.%u", &dd, &mm, &yy) == 3) {
        int year = yy < 100 ? int(2000 + yy) : int(yy);
        return Date(year, mm, dd);
    }
    throw validation_error("unparseable date: '" + text + "'");
}

std::string Date::to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

DateTime DateTime::parse(const std::string& text) {
    auto t = text.find('T');
    if (t == std::string::npos) t = text.find(' ');
    Date date = Date::parse(t == std::string::npos ? text : text.substr(0, t));
    int hh = 0, mi = 0, ss = 0;
    if (t != std::string::npos) {
        const std::string clock = text.substr(t + 1);
        int n = std::sscanf(clock.c_str(), "%d:%d:%d", &hh, &mi, &ss);
        if (n < 2 || hh > 23 || mi > 59 || ss > 60)
            throw validation_error("unparseable timestamp: '" + text + "'");
    }
    return DateTime(std::int64_t(date.serial()) * 86400 + hh * 3600 + mi * 60 + ss);
}

std::string DateTime::to_iso() const {
    const int s = seconds_of_day();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d", date().to_iso().c_str(), s / 3600,
                  (s / 60) % 60, s % 60);
    return buf;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace lakeice
