#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lakeice/labels.hpp"

using namespace lakeice;

TEST_SUITE_BEGIN("labels");

namespace {

std::vector<std::pair<Date, GroundCode>> sequence(const std::vector<const char*>& codes) {
    std::vector<std::pair<Date, GroundCode>> out;
    const Date start(2016, 12, 1);
    for (std::size_t i = 0; i < codes.size(); ++i)
        out.emplace_back(start + int(i), parse_ground_code(codes[i]));
    return out;
}

}  // namespace

TEST_CASE("code parsing") {
    CHECK(parse_ground_code("mw") == GroundCode::mw);
    CHECK(parse_ground_code("s") == GroundCode::s);
    CHECK_THROWS_AS(parse_ground_code("xx"), Error);
    for (const char* c : {"s", "i", "w", "ms", "mi", "mw", "c", "u", "n"})
        CHECK(ground_code_name(parse_ground_code(c)) == c);
}

TEST_CASE("cloud days inside a water run become water") {
    const auto days = enrich_labels(sequence({"w", "w", "c", "w", "w"}));
    for (const EnrichedDay& d : days) {
        CHECK(d.cleaned == GroundCode::w);
        CHECK(d.label == CleanLabel::non_frozen);
    }
}

TEST_CASE("unclear days inside a frozen run become frozen") {
    const auto days = enrich_labels(sequence({"i", "s", "u", "s", "i"}));
    for (const EnrichedDay& d : days) CHECK(d.label == CleanLabel::frozen);
}

TEST_CASE("gap between different states is left unknown") {
    const auto days = enrich_labels(sequence({"w", "w", "n", "i", "i"}));
    CHECK(days[2].label == CleanLabel::unknown);
}

TEST_CASE("single-day spike violating the monotone pattern is interpolated") {
    const auto days = enrich_labels(sequence({"w", "mw", "i", "mw", "w"}));
    CHECK(days[2].cleaned == GroundCode::mw);
    CHECK(days[2].label == CleanLabel::transition);
    // The monotone neighbours are untouched.
    CHECK(days[1].cleaned == GroundCode::mw);
    CHECK(days[0].cleaned == GroundCode::w);
}

TEST_CASE("smooth transitions survive untouched") {
    const auto days = enrich_labels(sequence({"w", "mw", "mi", "s", "s", "ms", "mw", "w"}));
    CHECK(days[0].label == CleanLabel::non_frozen);
    CHECK(days[1].is_transition);
    CHECK(days[2].is_transition);
    CHECK(days[3].label == CleanLabel::frozen);
    CHECK(days[5].is_transition);
    CHECK(days[7].label == CleanLabel::non_frozen);
}

TEST_CASE("water spike inside ice is smoothed too") {
    const auto days = enrich_labels(sequence({"i", "i", "w", "i", "i"}));
    CHECK(days[2].label == CleanLabel::frozen);
}

TEST_CASE("transition days are flagged for exclusion from training") {
    const auto days = enrich_labels(sequence({"w", "mw", "mi", "i"}));
    CHECK_FALSE(days[0].is_transition);
    CHECK(days[1].is_transition);
    CHECK(days[2].is_transition);
    CHECK_FALSE(days[3].is_transition);
}

TEST_CASE("label CSV reader") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "lakeice_codes.csv").string();
    {
        std::ofstream out(path);
        out << "date,code\n2016-12-01,w\n2016-12-02,mw\n2016-12-03,i\n";
    }
    const auto rows = read_ground_codes(path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].second == GroundCode::w);
    CHECK(rows[2].second == GroundCode::i);
    {
        std::ofstream out(path);
        out << "date,code\n2016-12-01,zz\n";
    }
    CHECK_THROWS_AS(read_ground_codes(path), Error);
    std::filesystem::remove(path);
}

TEST_SUITE_END();
