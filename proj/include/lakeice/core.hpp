#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lakeice {

// Error categories map onto CLI exit codes (see tools/).
enum class ErrorKind {
    validation,        // exit 2: bad inputs, parse failures, geometry mismatches
    numeric,           // exit 3: singular fits, non-convergence
    insufficient_data  // exit 4: gating failed, series too short
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error validation_error(const std::string& msg) { return Error(ErrorKind::validation, msg); }
inline Error numeric_error(const std::string& msg) { return Error(ErrorKind::numeric, msg); }
inline Error insufficient_data_error(const std::string& msg) {
    return Error(ErrorKind::insufficient_data, msg);
}

/// Calendar date stored as a serial day count (days since 1970-01-01).
/// Comparison and day arithmetic work directly on the serial.
class Date {
public:
    Date() = default;
    explicit Date(int serial_days) : serial_(serial_days) {}
    Date(int year, unsigned month, unsigned day) {
        namespace chr = std::chrono;
        chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
        if (!ymd.ok()) throw validation_error("invalid date");
        serial_ = chr::sys_days{ymd}.time_since_epoch().count();
    }

    int serial() const { return serial_; }

    int year() const { return int(ymd().year()); }
    unsigned month() const { return unsigned(ymd().month()); }
    unsigned day() const { return unsigned(ymd().day()); }

    Date operator+(int days) const { return Date(serial_ + days); }
    Date operator-(int days) const { return Date(serial_ - days); }
    int operator-(Date other) const { return serial_ - other.serial_; }
    Date& operator++() { ++serial_; return *this; }

    auto operator<=>(const Date&) const = default;

    /// Accepts ISO-8601 (2017-01-06) and day.month.two-digit-year (6.1.17).
    static Date parse(const std::string& text);

    std::string to_iso() const;

private:
    std::chrono::year_month_day ymd() const {
        return std::chrono::year_month_day{
            std::chrono::sys_days{std::chrono::days{serial_}}};
    }

    int serial_ = 0;
};

/// Timestamp with minute resolution, stored as seconds since the Unix epoch.
class DateTime {
public:
    DateTime() = default;
    explicit DateTime(std::int64_t epoch_seconds) : sec_(epoch_seconds) {}

    std::int64_t epoch_seconds() const { return sec_; }
    Date date() const {
        std::int64_t d = sec_ >= 0 ? sec_ / 86400 : (sec_ - 86399) / 86400;
        return Date(int(d));
    }
    int seconds_of_day() const {
        std::int64_t r = sec_ % 86400;
        if (r < 0) r += 86400;
        return int(r);
    }

    auto operator<=>(const DateTime&) const = default;

    /// ISO-8601: 2016-10-01T12:34[:56]; a bare date parses as midnight.
    static DateTime parse(const std::string& text);

    std::string to_iso() const;

private:
    std::int64_t sec_ = 0;
};

inline bool is_missing(double v) { return std::isnan(v); }
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

/// FNV-1a, used for config/content hashes embedded in artifacts.
/// Stable across platforms, unlike std::hash.
std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

/// Deterministic integer in [0, n) from raw mt19937_64 draws (rejection
/// sampling). std::uniform_int_distribution is implementation-defined, so
/// seeded shuffles would not reproduce across standard libraries.
template <typename Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

template <typename T, typename Rng>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = std::size_t(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace lakeice
