#pragma once

#include <wavelab/bump.hpp>
#include <wavelab/wave_state.hpp>

#include <string>
#include <utility>
#include <vector>

namespace wavelab {

struct DataFamilyParams {
    double s = 0.25;
    double p = 3.0;
    double delta1 = 0.1;
    double delta2 = 0.05;
    long long n = 8;
};

// 3/2 - 2/(p-1), the scaling threshold.
double critical_regularity(double p);

double g_expanded(double s, double p);
double g_factored(double s, double p);

struct ExponentLedger {
    double q1 = 0.0;
    double q2 = 0.0;
    double g = 0.0;
    double g_factored = 0.0;
    double kappa_n = 0.0;
    double t_n = 0.0;
    double eps_pred = 0.0;
    double log_n = 0.0;
    double log_t_n = 0.0;
};

void validate(const DataFamilyParams& params);

ExponentLedger exponent_ledger(const DataFamilyParams& params);

// Same ledger with n given through log n (n may exceed any integer type).
ExponentLedger exponent_ledger_log(const DataFamilyParams& params, double log_n);

// kappa_n n^{q1} phi(n (x - center)), phi = bump with the given center and radius.
GridField make_psi_n(const DataFamilyParams& params, const BumpSpec& bump, const TorusGrid& grid);

struct BumpMoment {
    double value = 0.0;
    int i = 0, j = 0, k = 0;
};

// max over (i,j,k) of int |phi_i phi_j phi_k|^2 phi^{p-5} dx over R^d.
BumpMoment bump_moment_details(const BumpSpec& spec, double p);
double bump_moment_check(const BumpSpec& spec, double p);

// amplitude k^{d/2} chi(k (x - center)).
GridField make_wk_packet(double k, double amplitude, const Eigen::Vector3d& center,
                         const BumpSpec& chi, const TorusGrid& grid);

BumpSpec default_chi(int dim);

// Schedule of the L^q-breaking packets: eps_j = 2^{-j/2} sqrt(eps),
// k_j = 2^{2^j + 10}, x_j = sum_{i<=j} 2^{-(i+2)} on the first axis.
double gdelta_amplitude(int j, double eps);
double gdelta_log2_scale(int j);
double gdelta_position(int j);

struct AnalyticLedger {
    int M = 0;
    double eps = 0.0;
    double q = 4.0;
    int dim = 1;
    double sum_eps_sq = 0.0;
    // log of sum_{j<=M} eps_j^q k_j^{d(q/2-1)} ||chi||_q^q (-inf when M = 0).
    double log_lq_power = 0.0;
    std::vector<double> log_terms;
    double lq_norm() const;          // may overflow to +inf
    double log_lq_norm() const;      // log of lq_norm
};

AnalyticLedger gdelta_ledger(int M, double eps, double q, int dim, const BumpSpec& chi);

// v_M = Pi_N u0 + sum_{j<=M} eps_j w_{k_j}(x - x_j).
std::pair<GridField, AnalyticLedger> make_gdelta_sum(const SpectrumField& u0, long long N, int M,
                                                      double eps, double q, const TorusGrid& grid,
                                                      const BumpSpec& chi);

struct InstantPacket {
    double log_n = 0.0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
};

struct InstantaneousData {
    WaveState state;
    std::vector<Box> boxes;
    std::vector<ExponentLedger> ledgers;
};

// ||psi_n||_{H^s} with n given by log n, from the radial Fourier transform of phi so any n works.
class PsiNormTable {
public:
    PsiNormTable(const DataFamilyParams& params, const BumpSpec& bump);
    double hs_norm(double log_n) const;

private:
    DataFamilyParams params_;
    int dim_;
    Eigen::ArrayXd k2_;
    Eigen::ArrayXd energy_;
};

// Smallest integers n_k (via log n_k) with ||psi_{n_k}||_{H^s} <= 2^{-k}, k = k0..k0+count-1,
// strictly increasing.
std::vector<double> budget_schedule(const DataFamilyParams& params, const BumpSpec& bump, int k0,
                                    int count);

InstantaneousData make_instantaneous_data(const WaveState& base,
                                          const std::vector<InstantPacket>& schedule,
                                          const DataFamilyParams& params, const BumpSpec& bump);

}  // namespace wavelab
