#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

namespace magbar::cli {

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
    tables.push_back(Table{name, std::move(columns), {}});
    return tables.back();
}

void Report::check(const std::string& key, bool pass) {
    summary.emplace_back(key, pass);
    if (!pass) ok = false;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::ordered_json to_json(const Value& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(x)) return nullptr;
            }
            return x;
        },
        v);
}

std::ofstream open(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

}  // namespace

std::string format_csv_value(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.12g", x);
                return buf;
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else {
                return quote(x);
            }
        },
        v);
}

void write_report(const Report& r, const std::string& dir, Format format) {
    namespace fs = std::filesystem;
    const fs::path base(dir);
    fs::create_directories(base);
    const std::string status = r.ok ? "ok" : "FAILED";
    if (format == Format::Csv) {
        for (const auto& t : r.tables) {
            auto f = open(base / (r.command + "_" + t.name + ".csv"));
            for (std::size_t i = 0; i < t.columns.size(); ++i) f << (i ? "," : "") << quote(t.columns[i]);
            f << "\r\n";
            for (const auto& row : t.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_csv_value(row[i]);
                f << "\r\n";
            }
        }
        auto f = open(base / (r.command + "_summary.csv"));
        f << "key,value\r\n";
        for (const auto& [k, v] : r.summary) f << quote(k) << "," << format_csv_value(v) << "\r\n";
        f << "status," << status << "\r\n";
        if (!r.failure.empty()) f << "error," << quote(r.failure) << "\r\n";
        // The echoed configuration is itself a valid --config file.
        auto c = open(base / (r.command + "_config.ini"));
        c << "[" << r.command << "]\n";
        for (const auto& [k, v] : r.config) c << k << "=" << v << "\n";
    } else {
        nlohmann::ordered_json doc;
        doc["schema_version"] = 1;
        doc["command"] = r.command;
        doc["status"] = status;
        if (!r.failure.empty()) doc["error"] = r.failure;
        auto& cfg = doc["config"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.config) cfg[k] = v;
        auto& sum = doc["summary"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.summary) sum[k] = to_json(v);
        auto& tabs = doc["tables"] = nlohmann::ordered_json::object();
        for (const auto& t : r.tables) {
            nlohmann::ordered_json jt;
            jt["columns"] = t.columns;
            jt["rows"] = nlohmann::ordered_json::array();
            for (const auto& row : t.rows) {
                nlohmann::ordered_json jr = nlohmann::ordered_json::array();
                for (const auto& v : row) jr.push_back(to_json(v));
                jt["rows"].push_back(std::move(jr));
            }
            tabs[t.name] = std::move(jt);
        }
        auto f = open(base / (r.command + ".json"));
        f << doc.dump(2) << "\n";
    }
    for (const auto& [name, contents] : r.plots) {
        auto f = open(base / name);
        f << contents;
    }
}

void print_summary(const Report& r) {
    for (const auto& [k, v] : r.summary) {
        std::string s = format_csv_value(v);
        if (std::holds_alternative<bool>(v)) s = std::get<bool>(v) ? "PASS" : "FAIL";
        std::cout << r.command << "  " << k << " = " << s << "\n";
    }
    std::cout << r.command << "  status = " << (r.ok ? "ok" : "FAILED");
    if (!r.failure.empty()) std::cout << " (" << r.failure << ")";
    std::cout << "\n";
}

}  // namespace magbar::cli
