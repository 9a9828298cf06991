#pragma once

#include <string>
#include <utility>
#include <deque>
#include <variant>
#include <vector>

namespace magbar::cli {

using Value = std::variant<double, long long, bool, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    void add(std::vector<Value> row) { rows.push_back(std::move(row)); }
};

enum class Format { Csv, Json };

// Everything one subcommand produces. Tables are written as they stand, so a
// failure part-way through still flushes the rows computed so far.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::deque<Table> tables;  // stable references across table()
    std::vector<std::pair<std::string, Value>> summary;
    std::vector<std::pair<std::string, std::string>> plots;  // file name, contents
    bool ok = true;
    std::string failure;

    Table& table(const std::string& name, std::vector<std::string> columns);
    void note(const std::string& key, Value v) { summary.emplace_back(key, std::move(v)); }
    void check(const std::string& key, bool pass);
};

std::string format_csv_value(const Value& v);

// Writes <command>_<table>.csv, <command>_summary.csv and <command>_config.ini
// (csv), or a single <command>.json. Plot files are written in both formats.
void write_report(const Report& r, const std::string& dir, Format format);

// One line per summary entry, for the terminal.
void print_summary(const Report& r);

}  // namespace magbar::cli
