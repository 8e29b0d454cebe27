#pragma once

#include <vector>

namespace wavelab {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int points);

// Composite Gauss-Legendre over `panels` equal subintervals of [a, b].
template <typename F>
double integrate(F&& f, double a, double b, int panels = 16, int points = 20)
{
    const GaussRule& rule = gauss_legendre(points);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

}  // namespace wavelab
