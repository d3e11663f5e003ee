#pragma once

#include <vector>

#include "pstchain/chain.hpp"
#include "pstchain/eigensolver.hpp"

namespace pstchain {

// Uniform time grid, inclusive of both endpoints.
struct Schedule {
    double t_start = 0.0;
    double t_end = 0.0;
    int n_samples = 1;

    double at(int j) const {
        if (n_samples < 2) return t_start;
        return t_start + (t_end - t_start) * static_cast<double>(j) / (n_samples - 1);
    }
};

// Time at which every state of the clean engineered chain maps to its mirror
// image: t_M = pi/(2 J0). Full revival period t_S = 2 t_M.
double mirroring_time(const ChainSpec& spec);
double revival_period(const ChainSpec& spec);

// Spectral evolution: |psi(t)> = sum_m e^{-i E_m t} <phi_m|psi0> |phi_m>.
StateVector evolve(const StateVector& state0, const EigenSystem& eig, double t);

// |<target|psi>|^2.
double fidelity(const StateVector& psi, const StateVector& target);

double mirror_fidelity_at(const StateVector& state0, const EigenSystem& eig, double t);

// Fixed overlap amplitude <target| e^{-iHt} |psi0> as a cheap function of t;
// O(N) per sample instead of a full state reconstruction.
class OverlapScan {
public:
    OverlapScan(const StateVector& psi0, const StateVector& target, const EigenSystem& eig);

    double fidelity_at(double t) const;

private:
    std::vector<double> energies_;
    std::vector<complexd> weights_;
};

struct WindowMax {
    double f_max = 0.0;
    double t_at_max = 0.0;
};

// Scan the window on the uniform grid, then refine around the best sample by
// parabolic interpolation on the bracketing samples plus up to 20
// golden-section steps. Never returns less than the best grid sample.
WindowMax max_fidelity_over_window(const StateVector& state0, const StateVector& target,
                                   const EigenSystem& eig, const Schedule& window);

struct SteppedEvolution {
    StateVector state;
    double norm_drift = 0.0; // |norm - 1| accumulated before the final renormalisation
};

// Classical RK4 integration of i dc/dt = H c at fixed step dt (final partial
// step shortened). Renormalises once at the end. Exists as an independent
// cross-check of the spectral path.
SteppedEvolution evolve_stepped_oracle(const StateVector& state0, const Hamiltonian& h,
                                       double t, double dt);

} // namespace pstchain
