#include "ubmot/table.hpp"

#include <charconv>
#include <cmath>
#include "json.hpp"
#include <sstream>

#include "ubmot/errors.hpp"

namespace ubmot {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void SweepTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw DomainError("SweepTable: row width does not match header");
    rows_.push_back(std::move(row));
}

void SweepTable::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    meta_.emplace_back(key, value);
}

size_t SweepTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw DomainError("SweepTable: no column '" + name + "'");
}

double SweepTable::number(size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (auto d = std::get_if<double>(&c)) return *d;
    if (auto i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw DomainError("SweepTable: column '" + column + "' is not numeric");
}

std::vector<double> SweepTable::column(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (size_t r = 0; r < rows_.size(); ++r) out.push_back(number(r, name));
    return out;
}

std::string SweepTable::to_csv(bool with_meta) const {
    std::ostringstream os;
    if (with_meta)
        for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
    for (size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit([&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) os << format_double(v);
                else os << v;
            }, row[i]);
        }
        os << '\n';
    }
    return os.str();
}

std::string SweepTable::to_json(bool with_meta) const {
    // Floats are written as raw shortest-form tokens so the JSON matches the CSV.
    std::ostringstream os;
    os << "{";
    if (with_meta) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (const auto& [k, v] : meta_) m[k] = v;
        os << "\"meta\":" << m.dump() << ",";
    }
    os << "\"columns\":" << nlohmann::json(columns_).dump() << ",\"rows\":[";
    for (size_t r = 0; r < rows_.size(); ++r) {
        os << (r ? ",\n" : "\n") << "{";
        for (size_t i = 0; i < columns_.size(); ++i) {
            os << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ":";
            std::visit([&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    if (std::isfinite(v)) os << format_double(v);
                    else os << "null";
                } else if constexpr (std::is_same_v<T, std::string>) {
                    os << nlohmann::json(v).dump();
                } else {
                    os << v;
                }
            }, rows_[r][i]);
        }
        os << "}";
    }
    os << "\n]}\n";
    return os.str();
}

}  // namespace ubmot
