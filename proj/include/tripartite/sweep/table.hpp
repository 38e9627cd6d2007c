#pragma once

// Result tables and their CSV / JSON serialization. A CSV starts with one
// '#'-prefixed line of JSON metadata, then a header of column names, then
// rows. Numbers use the shortest round-trip decimal form.

#include "tripartite/core/format.hpp"

#include "json.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripartite::sweep {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "tripartite";
inline constexpr const char* kToolVersion = "1.0.0";

struct Column {
    std::string name;
    std::string unit;
};

class ResultTable {
public:
    ResultTable() = default;
    ResultTable(std::string name, std::vector<Column> columns)
        : name_(std::move(name)), columns_(std::move(columns)) {
        if (columns_.empty())
            throw std::invalid_argument("table '" + name_ + "' has no columns");
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    std::size_t width() const noexcept { return columns_.size(); }

    /// Rejects rows of the wrong width or with non-finite entries.
    void add_row(std::vector<double> row) {
        if (row.size() != columns_.size())
            throw std::invalid_argument("table '" + name_ + "': row width " + std::to_string(row.size()) +
                                        " != " + std::to_string(columns_.size()));
        for (double v : row)
            if (!std::isfinite(v))
                throw std::domain_error("table '" + name_ + "': non-finite value");
        rows_.push_back(std::move(row));
    }

    Json& metadata() noexcept { return meta_; }
    const Json& metadata() const noexcept { return meta_; }

    std::vector<double> column(const std::string& name) const {
        for (std::size_t j = 0; j < columns_.size(); ++j)
            if (columns_[j].name == name) {
                std::vector<double> out;
                out.reserve(rows_.size());
                for (const auto& r : rows_)
                    out.push_back(r[j]);
                return out;
            }
        throw std::out_of_range("table '" + name_ + "' has no column '" + name + "'");
    }

    /// Metadata as written: user fields plus tool, table and column units.
    Json header_json() const {
        Json h = meta_;
        h["tool"] = kToolName;
        h["version"] = kToolVersion;
        h["table"] = name_;
        Json cols = Json::array();
        for (const auto& c : columns_)
            cols.push_back({{"name", c.name}, {"unit", c.unit}});
        h["columns"] = cols;
        return h;
    }

    std::string to_csv() const {
        std::string out = "# " + header_json().dump() + "\n";
        out += header_line();
        out += body();
        return out;
    }

    std::string header_line() const {
        std::string out;
        for (std::size_t j = 0; j < columns_.size(); ++j) {
            if (j)
                out += ',';
            out += columns_[j].name;
        }
        return out + "\n";
    }

    /// Data rows only.
    std::string body() const {
        std::string out;
        for (const auto& r : rows_) {
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j)
                    out += ',';
                out += format_double(r[j]);
            }
            out += '\n';
        }
        return out;
    }

    Json to_json() const {
        Json j;
        j["metadata"] = header_json();
        Json rows = Json::array();
        for (const auto& r : rows_)
            rows.push_back(r);
        j["rows"] = rows;
        return j;
    }

private:
    std::string name_;
    std::vector<Column> columns_;
    std::vector<std::vector<double>> rows_;
    Json meta_ = Json::object();
};

/// One failed grid point or run, for the sidecar report.
struct Failure {
    std::string table;
    std::size_t index = 0;
    Json where = Json::object();
    std::string message;
    bool flag = false;  // recorded but not counted as a failed point

    Json to_json() const {
        return {{"table", table},
                {"index", index},
                {"where", where},
                {"message", message},
                {"kind", flag ? "flag" : "error"}};
    }
};

inline Json failures_json(const std::string& command, const std::vector<Failure>& failures) {
    Json list = Json::array();
    for (const auto& f : failures)
        list.push_back(f.to_json());
    return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"failures", list}};
}

} // namespace tripartite::sweep
