#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "json.hpp"
#include "report.hpp"

using namespace magbar::cli;

namespace {

// Minimal RFC-4180 reader: records end at CRLF outside quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
    std::vector<std::vector<std::string>> rows(1);
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quoted) {
            if (c == '"' && i + 1 < s.size() && s[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            rows.back().push_back(field);
            field.clear();
        } else if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
            rows.back().push_back(field);
            field.clear();
            rows.emplace_back();
            ++i;
        } else {
            field += c;
        }
    }
    if (rows.back().empty()) rows.pop_back();
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("CSV number formatting uses 12 significant digits") {
    CHECK(format_csv_value(Value{1.0 / 3.0}) == "0.333333333333");
    CHECK(format_csv_value(Value{1e-20}) == "1e-20");
    CHECK(format_csv_value(Value{42LL}) == "42");
    CHECK(format_csv_value(Value{true}) == "true");
}

TEST_CASE("property: CSV text fields round-trip through an RFC-4180 reader") {
    gen::Gen g(11);
    const auto dir = std::filesystem::temp_directory_path() / "magbar_report_test";
    std::filesystem::remove_all(dir);
    for (int trial = 0; trial < 20; ++trial) {
        Report r;
        r.command = "t";
        auto& t = r.table("x", {"a", "b"});
        std::vector<std::pair<std::string, std::string>> expect;
        for (int i = 0; i < 8; ++i) {
            expect.emplace_back(g.text(12), g.text(12));
            t.add({expect.back().first, expect.back().second});
        }
        write_report(r, dir.string(), Format::Csv);
        const auto rows = parse_csv(slurp(dir / "t_x.csv"));
        REQUIRE(rows.size() == expect.size() + 1);
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(rows[i + 1][0] == expect[i].first);
            CHECK(rows[i + 1][1] == expect[i].second);
        }
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("JSON document carries schema version, status and full-precision floats") {
    const auto dir = std::filesystem::temp_directory_path() / "magbar_report_json";
    std::filesystem::remove_all(dir);
    Report r;
    r.command = "demo";
    r.config = {{"b", "1"}};
    r.note("x", 0.1 + 0.2);
    r.check("ok", false);
    r.failure = "boom";
    r.table("rows", {"v"}).add({2.0 / 3.0});
    write_report(r, dir.string(), Format::Json);
    const auto doc = nlohmann::json::parse(slurp(dir / "demo.json"));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["status"] == "FAILED");
    CHECK(doc["error"] == "boom");
    CHECK(doc["summary"]["x"].get<double>() == 0.1 + 0.2);
    CHECK(doc["tables"]["rows"]["rows"][0][0].get<double>() == 2.0 / 3.0);
    std::filesystem::remove_all(dir);
}
