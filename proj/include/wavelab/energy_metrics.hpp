#pragma once

#include <wavelab/wave_state.hpp>

#include <filesystem>
#include <utility>
#include <vector>

namespace wavelab {

struct SemiclassicalWeights {
    double n = 3.0;
    double q2 = 0.0;
};

// n^{-q2} (|ut|^2 + |grad u|^2)^{1/2} + n^{-q2-1} (|ut|_{H^1}^2 + |grad u|_{H^1}^2)^{1/2}
double semiclassical_energy(const WaveState& state, const SemiclassicalWeights& w);

class EnergyTrace {
public:
    void push(double t, double energy, double hs_norm);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& energies() const { return energies_; }
    const std::vector<double>& running_sup() const { return running_sup_; }
    const std::vector<double>& hs_norms() const { return hs_; }
    double final_sup() const { return running_sup_.empty() ? 0.0 : running_sup_.back(); }

    void write_csv(const std::filesystem::path& path) const;

private:
    std::vector<double> times_, energies_, running_sup_, hs_;
};

// (|a.u - b.u|_{H^s}^2 + |a.ut - b.ut|_{H^{s-1}}^2)^{1/2}
double hs_distance(const WaveState& a, const WaveState& b, double s);

// H^s norm of (u, ut) in the same product norm.
double hs_state_norm(const WaveState& a, double s);

// eta = product of 1D plateaus, 1 on the box, 0 outside its 1.2x enlargement.
GridField box_cutoff(const Box& box, const TorusGrid& grid);

// |eta f|_{H^s}; a box covering the whole domain uses eta = 1.
double localized_hs_norm(const GridField& f, double s, const Box& box);

std::pair<double, double> interpolation_bound_check(const GridField& f, double s0, double s1, double theta);

}  // namespace wavelab
