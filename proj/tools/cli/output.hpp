#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace tavis::cli {

using Cell = std::variant<double, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::vector<double> column(const std::string& name) const;
};

// Everything a command produces: tables plus diagnostics. The first table
// is the primary output.
struct Report {
    nlohmann::json config;
    std::vector<Table> tables;
    nlohmann::json diagnostics = nlohmann::json::object();
    std::string svg;  // rendered figure for --format svg
};

// 12 significant digits, locale independent; non-finite values print as nan/inf.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& table);

// {config, data: {table: {column: [values]}}, diagnostics}
nlohmann::json to_json(const Report& report);

}  // namespace tavis::cli
