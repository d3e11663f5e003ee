#include "pstchain/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace pstchain {

ChainSpec::ChainSpec(int n_sites, double j_max, CouplingLaw law)
    : n_sites_(n_sites), j_max_(j_max), law_(law) {
    if (n_sites < 2) throw std::invalid_argument("n_sites: chain needs at least 2 sites");
    if (!(j_max > 0.0)) throw std::invalid_argument("j_max: must be positive");
}

double ChainSpec::j0() const {
    const double n = static_cast<double>(n_sites_);
    if (n_sites_ % 2 == 0) return 2.0 * j_max_ / n;
    // Odd N: the peak of sqrt(i(N-i)) is (N/2) sqrt(1 - 1/N^2), so the
    // normalisation carries the same factor to keep the peak at j_max.
    return 2.0 * j_max_ / (n * std::sqrt(1.0 - 1.0 / (n * n)));
}

std::vector<double> pst_couplings(const ChainSpec& spec) {
    const int n = spec.n_sites();
    const double j0 = spec.j0();
    std::vector<double> j(n - 1);
    for (int i = 1; i < n; ++i)
        j[i - 1] = j0 * std::sqrt(static_cast<double>(i) * static_cast<double>(n - i));
    return j;
}

std::vector<double> uniform_couplings(const ChainSpec& spec) {
    return std::vector<double>(spec.n_sites() - 1, spec.j_max());
}

static std::vector<double> couplings_for(const ChainSpec& spec) {
    return spec.law() == CouplingLaw::Pst ? pst_couplings(spec) : uniform_couplings(spec);
}

Hamiltonian build_hamiltonian(const ChainSpec& spec) {
    Hamiltonian h;
    h.diagonal.assign(spec.n_sites(), 0.0);
    h.off_diagonal = couplings_for(spec);
    return h;
}

Hamiltonian build_hamiltonian(const ChainSpec& spec, std::span<const double> site_energies) {
    if (static_cast<int>(site_energies.size()) != spec.n_sites())
        throw std::invalid_argument("disorder: energy vector length " +
                                    std::to_string(site_energies.size()) + " != n_sites " +
                                    std::to_string(spec.n_sites()));
    Hamiltonian h;
    h.diagonal.assign(site_energies.begin(), site_energies.end());
    h.off_diagonal = couplings_for(spec);
    return h;
}

void apply_hamiltonian(const Hamiltonian& h, std::span<const complexd> x,
                       std::span<complexd> y) {
    const int n = h.size();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("apply_hamiltonian: dimension mismatch");
    for (int i = 0; i < n; ++i) {
        complexd v = h.diagonal[i] * x[i];
        if (i > 0) v += h.off_diagonal[i - 1] * x[i - 1];
        if (i < n - 1) v += h.off_diagonal[i] * x[i + 1];
        y[i] = v;
    }
}

StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& s) {
    StateVector out;
    out.amplitudes.resize(s.size());
    apply_hamiltonian(h, s.amplitudes, out.amplitudes);
    return out;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const complexd& c : amplitudes) s += std::norm(c);
    return std::sqrt(s);
}

StateVector StateVector::site_basis(int n_sites, int site) {
    if (site < 1 || site > n_sites)
        throw std::invalid_argument("site: must be in [1, n_sites]");
    StateVector s;
    s.amplitudes.assign(n_sites, complexd{0.0, 0.0});
    s.amplitudes[site - 1] = complexd{1.0, 0.0};
    return s;
}

StateVector mirror(const StateVector& s) {
    StateVector out;
    out.amplitudes.assign(s.amplitudes.rbegin(), s.amplitudes.rend());
    return out;
}

ParitySplit mirror_parity_split(const StateVector& s) {
    const int n = s.size();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ParitySplit split;
    split.even.amplitudes.resize(n);
    split.odd.amplitudes.resize(n);
    for (int i = 0; i < n; ++i) {
        const complexd a = s.amplitudes[i];
        const complexd b = s.amplitudes[n - 1 - i];
        split.even.amplitudes[i] = (a + b) * inv_sqrt2;
        split.odd.amplitudes[i] = (a - b) * inv_sqrt2;
    }
    return split;
}

} // namespace pstchain
