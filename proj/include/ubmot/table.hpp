#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ubmot {

using Cell = std::variant<double, std::int64_t, std::string>;

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

class SweepTable {
public:
    SweepTable() = default;
    explicit SweepTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row);
    void set_meta(const std::string& key, const std::string& value);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

    size_t column_index(const std::string& name) const;
    double number(size_t row, const std::string& column) const;
    std::vector<double> column(const std::string& name) const;

    // Metadata goes to leading "# key: value" lines in CSV and a "meta"
    // object in JSON; pass with_meta = false for byte-stable output.
    std::string to_csv(bool with_meta = true) const;
    std::string to_json(bool with_meta = true) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace ubmot
