#include <wavelab/csv.hpp>
#include <wavelab/error.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>

namespace wavelab {

void CsvTable::add_row(std::vector<double> row)
{
    if (row.size() != columns_.size()) throw ConfigurationError("csv: row width does not match header");
    rows_.push_back(std::move(row));
}

std::vector<double> CsvTable::column(const std::string& name) const
{
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw ConfigurationError("csv: no column " + name);
    const auto c = static_cast<std::size_t>(it - columns_.begin());
    std::vector<double> out;
    for (const auto& r : rows_) out.push_back(r[c]);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path.string());
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n' << std::setprecision(17);
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
}

nlohmann::json CsvTable::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        nlohmann::json col = nlohmann::json::array();
        for (const auto& r : rows_) col.push_back(r[c]);
        j[columns_[c]] = col;
    }
    return j;
}

}  // namespace wavelab
