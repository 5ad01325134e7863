#include "cli/output.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace tavis::cli {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match table '" + name + "'");
    rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& col) const {
    std::size_t k = 0;
    while (k < columns.size() && columns[k] != col) ++k;
    if (k == columns.size()) throw std::out_of_range("no column '" + col + "' in table '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        const double* v = std::get_if<double>(&r[k]);
        out.push_back(v ? *v : std::nan(""));
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const Cell& c) {
    if (const double* v = std::get_if<double>(&c)) return format_number(*v);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t k = 0; k < table.columns.size(); ++k) os << (k ? "," : "") << table.columns[k];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_field(row[k]);
        os << '\n';
    }
}

nlohmann::json to_json(const Report& report) {
    nlohmann::json data = nlohmann::json::object();
    for (const auto& t : report.tables) {
        nlohmann::json cols = nlohmann::json::object();
        for (std::size_t k = 0; k < t.columns.size(); ++k) {
            nlohmann::json values = nlohmann::json::array();
            for (const auto& row : t.rows) {
                if (const double* v = std::get_if<double>(&row[k])) {
                    values.push_back(std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr));
                } else {
                    values.push_back(std::get<std::string>(row[k]));
                }
            }
            cols[t.columns[k]] = std::move(values);
        }
        data[t.name] = std::move(cols);
    }
    return {{"config", report.config}, {"data", data}, {"diagnostics", report.diagnostics}};
}

}  // namespace tavis::cli
