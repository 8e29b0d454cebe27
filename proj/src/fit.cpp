#include <wavelab/error.hpp>
#include <wavelab/fit.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

namespace wavelab {

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw DomainError("fit: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 4) throw DomainError("fit: need at least 4 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("fit: abscissae are all equal");
    FitResult r;
    r.points = n;
    r.exponent = sxy / sxx;
    r.intercept = my - r.exponent * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - r.intercept - r.exponent * x[i];
        ssr += e * e;
    }
    r.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    const double dof = static_cast<double>(n - 2);
    const double se = std::sqrt(ssr / dof / sxx);
    const boost::math::students_t dist(dof);
    r.confidence = boost::math::quantile(dist, 0.975) * se;
    return r;
}

namespace {

std::vector<double> logs(const std::vector<double>& v, const char* what)
{
    std::vector<double> out;
    for (double a : v) {
        if (!(a > 0.0)) throw DomainError(std::string("fit: ") + what + " must be positive");
        out.push_back(std::log(a));
    }
    return out;
}

}  // namespace

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y)
{
    FitResult r = linear_fit(logs(x, "x"), logs(y, "y"));
    r.model = "power_law";
    return r;
}

FitResult fit_log_power(const std::vector<double>& x, const std::vector<double>& y)
{
    FitResult r = linear_fit(logs(logs(x, "x"), "log x"), logs(y, "y"));
    r.model = "log_power";
    return r;
}

nlohmann::json to_json(const FitResult& fit)
{
    return {{"model", fit.model},
            {"exponent", fit.exponent},
            {"intercept", fit.intercept},
            {"confidence", fit.confidence},
            {"r2", fit.r2},
            {"points", fit.points}};
}

bool strictly_increasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

}  // namespace wavelab
