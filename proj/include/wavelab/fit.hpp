#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace wavelab {

struct FitResult {
    std::string model;  // "power_law" or "log_power"
    double exponent = 0.0;
    double intercept = 0.0;
    double confidence = 0.0;  // 95% half-width of the slope
    double r2 = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y = a + b x with the 95% t-interval on b.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// log y = c + b log x
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// log y = c + b log log x
FitResult fit_log_power(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::json to_json(const FitResult& fit);

bool strictly_increasing(const std::vector<double>& v);
bool strictly_decreasing(const std::vector<double>& v);

}  // namespace wavelab
