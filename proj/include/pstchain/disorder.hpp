#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstchain/chain.hpp"
#include "pstchain/rng.hpp"

namespace pstchain {

// One sampled on-site-energy vector, eps_i = E * J_max * d_i with d_i
// uniform on [0,1). Regenerating from (seed, index, N, E) is bit-exact.
struct DisorderRealization {
    std::vector<double> energies;
    double strength = 0.0; // dimensionless E
    std::uint64_t seed = 0;
    int index = 0;
};

struct EnsembleSpec {
    ChainSpec chain;
    double strength = 0.0;
    int n_realizations = 100;
    std::uint64_t master_seed = 0;
};

DisorderRealization sample_disorder(const EnsembleSpec& spec, int index);

Hamiltonian build_hamiltonian(const ChainSpec& spec, const DisorderRealization& disorder);

class EnsembleError : public std::runtime_error {
public:
    EnsembleError(int realization_index, const std::string& what)
        : std::runtime_error("realization " + std::to_string(realization_index) + ": " + what),
          index_(realization_index) {}
    int realization_index() const { return index_; }

private:
    int index_;
};

struct EnsembleResult {
    std::vector<std::vector<double>> per_realization; // indexed by realization
    std::vector<double> mean;                         // elementwise, pairwise-summed ascending
    std::vector<double> std_error;
};

// Pure per-realization computation; must not depend on evaluation order.
using Observable = std::function<std::vector<double>(const ChainSpec&, const DisorderRealization&)>;

// Runs the observable over all realizations, with `workers` threads grabbing
// realization indices. Results and aggregates are bitwise independent of the
// worker count: each slot depends only on its index and the reduction order
// is fixed. The first per-realization failure (lowest index) is rethrown as
// EnsembleError.
EnsembleResult run_ensemble(const EnsembleSpec& spec, const Observable& observable,
                            int workers = 1);

} // namespace pstchain
