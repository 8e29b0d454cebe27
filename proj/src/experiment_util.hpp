#pragma once

#include <wavelab/bump.hpp>
#include <wavelab/data_family.hpp>
#include <wavelab/stochastic.hpp>

#include <json.hpp>
#include <string>
#include <vector>

namespace wavelab::detail {

BumpSpec parse_bump(const nlohmann::json& j, int dim);
Eigen::Vector3d parse_point(const nlohmann::json& j);
DataFamilyParams parse_family(const nlohmann::json& j);
RandomizationSpec parse_trig(const nlohmann::json& j, int dim, std::uint64_t seed);
nlohmann::json to_json(const RandomizationSpec& spec);
std::vector<double> number_list(const nlohmann::json& j, const std::string& what);

}  // namespace wavelab::detail
