#include <wavelab/data_family.hpp>
#include <wavelab/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wavelab {

double critical_regularity(double p) { return 1.5 - 2.0 / (p - 1.0); }

double g_expanded(double s, double p)
{
    return -0.5 * (p - 1.0) * s * s + (7.0 * p - 15.0) / 4.0 * s -
           (p - 2.0) * (3.0 * p - 7.0) / (2.0 * (p - 1.0));
}

double g_factored(double s, double p)
{
    return -0.5 * ((p - 1.0) * s - 2.0 * (p - 2.0)) * (s - critical_regularity(p));
}

void validate(const DataFamilyParams& prm)
{
    if (!(prm.p >= 3.0 && prm.p < 5.0)) throw DomainError("p must lie in [3, 5)");
    const double sc = critical_regularity(prm.p);
    if (!(prm.s > 0.0 && prm.s < sc))
        throw DomainError("s must lie in (0, " + std::to_string(sc) + ") for p = " + std::to_string(prm.p));
    if (!(prm.delta1 > 0.0) || !(prm.delta2 > 0.0)) throw DomainError("delta1 and delta2 must be positive");
}

ExponentLedger exponent_ledger_log(const DataFamilyParams& prm, double log_n)
{
    validate(prm);
    if (!(log_n > 1.0)) throw DomainError("n must satisfy log n > 1 (n >= 3)");
    ExponentLedger e;
    const double s = prm.s, p = prm.p;
    e.q1 = 1.5 - s;
    e.q2 = 0.5 * (5.0 - p) * (1.5 - 1.0 / (p - 1.0) - s);
    e.g = g_expanded(s, p);
    e.g_factored = g_factored(s, p);
    if (std::abs(e.g - e.g_factored) > 1e-12 * std::max(1.0, std::abs(e.g)))
        throw AccuracyError("exponent ledger: expanded and factored g disagree",
                            std::abs(e.g - e.g_factored));
    e.log_n = log_n;
    const double loglog = std::log(log_n);
    e.kappa_n = std::exp(-prm.delta1 * loglog);
    // t_n = (log n)^{d2} (kappa n^{q1})^{-(p-1)/2}
    e.log_t_n = prm.delta2 * loglog - 0.5 * (p - 1.0) * (std::log(e.kappa_n) + e.q1 * log_n);
    e.t_n = std::exp(e.log_t_n);
    e.eps_pred = critical_regularity(p) - s;
    return e;
}

ExponentLedger exponent_ledger(const DataFamilyParams& prm)
{
    if (prm.n < 3) throw DomainError("n must be >= 3");
    return exponent_ledger_log(prm, std::log(static_cast<double>(prm.n)));
}

namespace {

GridField psi_field(const DataFamilyParams& prm, double log_n, const BumpSpec& bump, const TorusGrid& grid)
{
    const ExponentLedger e = exponent_ledger_log(prm, log_n);
    BumpSpec scaled = bump;
    scaled.support_radius = bump.support_radius * std::exp(-log_n);
    GridField f = make_bump(scaled, grid);
    f.samples *= e.kappa_n * std::exp(e.q1 * log_n);
    return f;
}

}  // namespace

GridField make_psi_n(const DataFamilyParams& prm, const BumpSpec& bump, const TorusGrid& grid)
{
    if (prm.n < 3) throw DomainError("n must be >= 3");
    return psi_field(prm, std::log(static_cast<double>(prm.n)), bump, grid);
}

namespace {

// int_{S^{d-1}} omega^{2 alpha} for a multi-index alpha.
double sphere_moment(int dim, const int* alpha)
{
    double num = 2.0;
    int total = 0;
    for (int a = 0; a < dim; ++a) {
        num *= std::tgamma(alpha[a] + 0.5);
        total += alpha[a];
    }
    return num / std::tgamma(total + 0.5 * dim);
}

}  // namespace

BumpMoment bump_moment_details(const BumpSpec& spec, double p)
{
    if (!(p >= 3.0 && p <= 5.0)) throw DomainError("bump_moment_check: p must lie in [3, 5]");
    const int d = spec.dim;
    BumpMoment best;
    best.value = -1.0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            for (int k = j; k < d; ++k) {
                int alpha[3] = {0, 0, 0};
                ++alpha[i];
                ++alpha[j];
                ++alpha[k];
                const double a = sphere_moment(d, alpha);
                if (a > best.value) best = {a, i + 1, j + 1, k + 1};
            }
    const double angular = best.value;

    auto integrand = [&](double r) {
        const double f = bump_profile(spec.shape, spec.exponent, r);
        const double df = bump_profile_derivative(spec.shape, spec.exponent, r);
        if (f <= 0.0 || df == 0.0) return 0.0;
        return std::exp(6.0 * std::log(std::abs(df)) + (p - 5.0) * std::log(f) + (d - 1) * std::log(r));
    };

    // Panels [1 - 2^-m, 1 - 2^-(m+1)] approach the support edge. Near the edge an integrand
    // like (1-r)^a gives panel contributions shrinking by 2^-(a+1); contributions that stop
    // shrinking mean a <= -1.
    double total = integrate(integrand, 0.0, 0.5, 8, 20);
    double prev_panel = 0.0;
    int flat = 0;
    int quiet = 0;
    auto fail = [&](const std::string& why) {
        return InadmissibleBumpError("bump_moment_check: integral " + why + " for (i,j,k) = (" + std::to_string(best.i) +
                                         "," + std::to_string(best.j) + "," + std::to_string(best.k) + ")",
                                     best.i, best.j, best.k);
    };
    for (int m = 1; m <= 60; ++m) {
        const double a = 1.0 - std::ldexp(1.0, -m);
        const double b = 1.0 - std::ldexp(1.0, -(m + 1));
        const double panel = integrate(integrand, a, b, 2, 20);
        total += panel;
        if (m >= 6 && panel > 0.0 && panel >= 0.95 * prev_panel) {
            if (++flat >= 3) throw fail("diverges at the support edge");
        } else {
            flat = 0;
        }
        if (total > 0.0 && panel <= 1e-14 * total) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        prev_panel = panel;
        if (m == 60) throw fail("did not converge");
    }
    best.value = angular * std::pow(spec.support_radius, d - 6) * total;
    return best;
}

double bump_moment_check(const BumpSpec& spec, double p) { return bump_moment_details(spec, p).value; }

GridField make_wk_packet(double k, double amplitude, const Eigen::Vector3d& center, const BumpSpec& chi,
                         const TorusGrid& grid)
{
    if (!(k >= 1.0)) throw DomainError("make_wk_packet: scale k must be >= 1");
    BumpSpec scaled = chi;
    scaled.center = center;
    scaled.support_radius = chi.support_radius / k;
    GridField f = make_bump(scaled, grid);
    f.samples *= amplitude * std::pow(k, 0.5 * grid.dim());
    return f;
}

BumpSpec default_chi(int dim)
{
    BumpSpec chi;
    chi.dim = dim;
    chi.shape = BumpShape::plateau;
    chi.support_radius = 1.0;
    return chi;
}

double gdelta_amplitude(int j, double eps) { return std::pow(2.0, -0.5 * j) * std::sqrt(eps); }

double gdelta_log2_scale(int j) { return std::ldexp(1.0, j) + 10.0; }

double gdelta_position(int j) { return 0.25 * (1.0 - std::ldexp(1.0, -j)); }

double AnalyticLedger::log_lq_norm() const { return log_lq_power / q; }

double AnalyticLedger::lq_norm() const { return std::exp(log_lq_norm()); }

AnalyticLedger gdelta_ledger(int M, double eps, double q, int dim, const BumpSpec& chi)
{
    if (M < 0) throw DomainError("gdelta ledger: M must be >= 0");
    if (!(eps > 0.0)) throw DomainError("gdelta ledger: eps must be positive");
    if (!(q > 2.0)) throw DomainError("gdelta ledger: q must exceed 2");
    AnalyticLedger led;
    led.M = M;
    led.eps = eps;
    led.q = q;
    led.dim = dim;
    BumpSpec c = chi;
    c.dim = dim;
    // Packets use chi normalized in L^2, so ||eps_j w_j||_2 = eps_j.
    const double log_chi_q = q * (std::log(bump_lq_norm(c, q)) - std::log(bump_lq_norm(c, 2.0)));
    double sum = 0.0;
    double log_total = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= M; ++j) {
        const double ej = gdelta_amplitude(j, eps);
        sum += ej * ej;
        const double t = q * std::log(ej) + dim * (0.5 * q - 1.0) * gdelta_log2_scale(j) * std::numbers::ln2 + log_chi_q;
        led.log_terms.push_back(t);
        const double hi = std::max(log_total, t);
        log_total = hi + std::log(std::exp(log_total - hi) + std::exp(t - hi));
    }
    led.sum_eps_sq = sum;
    led.log_lq_power = log_total;
    return led;
}

std::pair<GridField, AnalyticLedger> make_gdelta_sum(const SpectrumField& u0, long long N, int M, double eps,
                                                      double q, const TorusGrid& grid, const BumpSpec& chi)
{
    require_same_grid(u0.grid, grid);
    const AnalyticLedger led = gdelta_ledger(M, eps, q, grid.dim(), chi);
    for (int a = 1; a <= M; ++a) {
        const double ra = chi.support_radius * std::exp2(-gdelta_log2_scale(a));
        for (int b = a + 1; b <= M; ++b) {
            const double rb = chi.support_radius * std::exp2(-gdelta_log2_scale(b));
            if (std::abs(gdelta_position(b) - gdelta_position(a)) <= ra + rb)
                throw ConstructionError("make_gdelta_sum: packets " + std::to_string(a) + " and " +
                                        std::to_string(b) + " overlap");
        }
    }
    GridField v = inverse_transform(low_pass(u0, N));
    BumpSpec c = chi;
    c.dim = grid.dim();
    const double chi_l2 = bump_lq_norm(c, 2.0);
    for (int j = 1; j <= M; ++j) {
        Eigen::Vector3d center = Eigen::Vector3d::Zero();
        center[0] = gdelta_position(j);
        v = v + make_wk_packet(std::exp2(gdelta_log2_scale(j)), gdelta_amplitude(j, eps) / chi_l2, center, c, grid);
    }
    return {v, led};
}

PsiNormTable::PsiNormTable(const DataFamilyParams& prm, const BumpSpec& bump)
    : params_(prm), dim_(bump.dim)
{
    validate(prm);
    if (dim_ < 1 || dim_ > 3) throw DomainError("PsiNormTable: dimension must be 1, 2 or 3");
    const double R = bump.support_radius;
    // Inner radial nodes on [0, R].
    const GaussRule& in = gauss_legendre(16);
    const int in_panels = 120;
    std::vector<double> r, fw;
    for (int p = 0; p < in_panels; ++p) {
        const double h = R / in_panels, mid = (p + 0.5) * h;
        for (std::size_t i = 0; i < in.nodes.size(); ++i) {
            const double x = mid + 0.5 * h * in.nodes[i];
            r.push_back(x);
            fw.push_back(0.5 * h * in.weights[i] * bump_profile(bump.shape, bump.exponent, x / R));
        }
    }
    auto phi_hat = [&](double rho) {
        double acc = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double x = rho * r[i];
            switch (dim_) {
                case 1: acc += fw[i] * std::cos(x); break;
                case 2: acc += fw[i] * r[i] * std::cyl_bessel_j(0.0, x); break;
                default: acc += fw[i] * r[i] * (x > 1e-8 ? std::sin(x) / rho : r[i] * (1.0 - x * x / 6.0)); break;
            }
        }
        return (dim_ == 1 ? 2.0 : dim_ == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi) * acc;
    };
    // Outer nodes in rho: geometric panels toward 0, then uniform panels out to 600/R.
    const GaussRule& out = gauss_legendre(8);
    std::vector<std::pair<double, double>> panels;
    double lo = 1.0 / R;
    for (int j = 0; j < 40; ++j) {
        panels.emplace_back(0.5 * lo, lo);
        lo *= 0.5;
    }
    panels.emplace_back(0.0, lo);
    for (int j = 1; j < 600; ++j) panels.emplace_back(j / R, (j + 1) / R);
    std::vector<double> k2, en;
    const double scale = sphere_area(dim_) / std::pow(2.0 * std::numbers::pi, dim_);
    for (const auto& [a, b] : panels) {
        const double h = b - a, mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < out.nodes.size(); ++i) {
            const double rho = mid + 0.5 * h * out.nodes[i];
            const double f = phi_hat(rho);
            k2.push_back(rho * rho);
            en.push_back(0.5 * h * out.weights[i] * scale * std::pow(rho, dim_ - 1) * f * f);
        }
    }
    k2_ = Eigen::Map<Eigen::ArrayXd>(k2.data(), static_cast<Eigen::Index>(k2.size()));
    energy_ = Eigen::Map<Eigen::ArrayXd>(en.data(), static_cast<Eigen::Index>(en.size()));
}

double PsiNormTable::hs_norm(double log_n) const
{
    // ||psi_n||^2 = kappa^2 n^{3-d} int (n^-2 + rho^2)^s |phi_hat|^2 d rho / (2 pi)^d
    const double inv_n2 = std::exp(-2.0 * log_n);
    const double sum = ((inv_n2 + k2_).pow(params_.s) * energy_).sum();
    const double log_norm = -params_.delta1 * std::log(log_n) + 0.5 * (3 - dim_) * log_n + 0.5 * std::log(sum);
    return std::exp(log_norm);
}

std::vector<double> budget_schedule(const DataFamilyParams& prm, const BumpSpec& bump, int k0, int count)
{
    const PsiNormTable table(prm, bump);
    std::vector<double> out;
    double floor_log = std::log(3.0);
    for (int k = k0; k < k0 + count; ++k) {
        const double target = std::ldexp(1.0, -k);
        double lo = floor_log;
        if (table.hs_norm(lo) <= target) {
            out.push_back(lo);
        } else {
            // Bisection in log log n; the norm decreases in n.
            double a = std::log(lo), b = a;
            while (table.hs_norm(std::exp(b)) > target) {
                b += 1.0;
                if (b > 700.0) throw ScheduleError("budget_schedule: no n reaches the H^s budget");
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                (table.hs_norm(std::exp(mid)) > target ? a : b) = mid;
            }
            double log_n = std::exp(b);
            if (log_n < 40.0) {
                // Small enough to pin the exact smallest integer.
                double n = std::ceil(std::exp(log_n) - 1e-9);
                while (n > 3.0 && table.hs_norm(std::log(n - 1.0)) <= target) n -= 1.0;
                while (table.hs_norm(std::log(n)) > target) n += 1.0;
                log_n = std::log(n);
            }
            out.push_back(log_n);
        }
        // Next index must be a strictly larger integer.
        floor_log = out.back() < 40.0 ? std::log(std::round(std::exp(out.back())) + 1.0)
                                      : std::nextafter(out.back(), 1e300);
    }
    return out;
}

InstantaneousData make_instantaneous_data(const WaveState& base, const std::vector<InstantPacket>& schedule,
                                          const DataFamilyParams& prm, const BumpSpec& bump)
{
    if (schedule.empty()) throw ScheduleError("make_instantaneous_data: empty schedule");
    const TorusGrid& grid = base.grid();
    const int d = grid.dim();
    InstantaneousData out;
    double t_max = 0.0;
    for (const auto& pk : schedule) {
        out.ledgers.push_back(exponent_ledger_log(prm, pk.log_n));
        t_max = std::max(t_max, out.ledgers.back().t_n);
    }
    auto radius = [&](std::size_t a) { return bump.support_radius * std::exp(-schedule[a].log_n); };
    auto distance = [&](const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double o = periodic_offset(x[a], y[a], grid.period());
            r2 += o * o;
        }
        return std::sqrt(r2);
    };
    for (std::size_t a = 0; a < schedule.size(); ++a) {
        const double ra = radius(a);
        Box box;
        box.center = schedule[a].center;
        for (int ax = 0; ax < d; ++ax) box.half_width[ax] = ra + out.ledgers[a].t_n;
        out.boxes.push_back(box);
        for (std::size_t b = a + 1; b < schedule.size(); ++b) {
            const double sep = distance(schedule[a].center, schedule[b].center);
            if (sep <= ra + radius(b) + 2.0 * t_max)
                throw ScheduleError("make_instantaneous_data: light cones of packets " + std::to_string(a + 1) +
                                    " and " + std::to_string(b + 1) + " overlap");
        }
    }
    // The 1.2x cutoff region of each box must stay clear of every other light cone.
    for (std::size_t a = 0; a < schedule.size(); ++a) {
        const double t = out.ledgers[a].t_n;
        for (std::size_t b = 0; b < schedule.size(); ++b) {
            if (a == b) continue;
            double r2 = 0.0;
            for (int ax = 0; ax < d; ++ax) {
                const double o = std::abs(periodic_offset(schedule[b].center[ax], schedule[a].center[ax], grid.period()));
                const double gap = std::max(0.0, o - 1.2 * out.boxes[a].half_width[ax]);
                r2 += gap * gap;
            }
            if (std::sqrt(r2) <= radius(b) + t)
                throw ScheduleError("make_instantaneous_data: box of packet " + std::to_string(a + 1) +
                                    " meets the light cone of packet " + std::to_string(b + 1));
        }
    }
    out.state = base;
    for (const auto& pk : schedule) {
        BumpSpec phi = bump;
        phi.center = pk.center;
        out.state.u = out.state.u + psi_field(prm, pk.log_n, phi, grid);
    }
    return out;
}

}  // namespace wavelab
