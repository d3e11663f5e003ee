#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pstchain {

using complexd = std::complex<double>;

enum class CouplingLaw { Pst, Uniform };

// Immutable description of a spin chain in the single-excitation picture.
// J_max sets the energy unit (default 1); times are in units of hbar/J_max.
class ChainSpec {
public:
    explicit ChainSpec(int n_sites, double j_max = 1.0, CouplingLaw law = CouplingLaw::Pst);

    int n_sites() const { return n_sites_; }
    double j_max() const { return j_max_; }
    CouplingLaw law() const { return law_; }

    // Base coupling of the engineered profile, normalised so the peak
    // coupling mid-chain equals j_max for both parities of N.
    double j0() const;

private:
    int n_sites_;
    double j_max_;
    CouplingLaw law_;
};

// Real symmetric tridiagonal matrix in the site basis; only one off-diagonal
// is stored, so symmetry is structural.
struct Hamiltonian {
    std::vector<double> diagonal;     // on-site energies eps_i
    std::vector<double> off_diagonal; // couplings J_{i,i+1}, strictly positive for the engineered law

    int size() const { return static_cast<int>(diagonal.size()); }
};

// Complex amplitudes over sites. Kept as a plain value type; unit norm is a
// contract of the evolution routines, not enforced on construction.
struct StateVector {
    std::vector<complexd> amplitudes;

    int size() const { return static_cast<int>(amplitudes.size()); }
    double norm() const;

    // Excitation fully on one site. `site` is 1-based, as in all interfaces.
    static StateVector site_basis(int n_sites, int site);
};

// J_{i,i+1} = J0 * sqrt(i (N-i)), i = 1..N-1. Palindromic by construction.
std::vector<double> pst_couplings(const ChainSpec& spec);

std::vector<double> uniform_couplings(const ChainSpec& spec);

Hamiltonian build_hamiltonian(const ChainSpec& spec);
Hamiltonian build_hamiltonian(const ChainSpec& spec, std::span<const double> site_energies);

// y = H x.
void apply_hamiltonian(const Hamiltonian& h, std::span<const complexd> x, std::span<complexd> y);
StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& s);

// Site reversal i -> N+1-i. Involutive and norm preserving; commutes with the
// clean engineered Hamiltonian.
StateVector mirror(const StateVector& s);

struct ParitySplit {
    StateVector even; // (s + Ms)/sqrt(2), mirror eigenvalue +1
    StateVector odd;  // (s - Ms)/sqrt(2), mirror eigenvalue -1
};

// s reconstructs as (even + odd)/sqrt(2).
ParitySplit mirror_parity_split(const StateVector& s);

} // namespace pstchain
