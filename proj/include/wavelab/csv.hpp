#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavelab {

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<double> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }
    std::vector<double> column(const std::string& name) const;

    void write(const std::filesystem::path& path) const;
    nlohmann::json to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace wavelab
