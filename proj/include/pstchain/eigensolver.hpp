#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstchain/chain.hpp"

namespace pstchain {

class SolverError : public std::runtime_error {
public:
    SolverError(int eigenvalue_index, const std::string& what)
        : std::runtime_error(what), index_(eigenvalue_index) {}
    int eigenvalue_index() const { return index_; }

private:
    int index_;
};

// Full spectrum of a real symmetric tridiagonal matrix with orthonormal
// eigenvectors. Eigenvalues ascending; eigenvectors stored column-major,
// column m = |phi_m> in the site basis. Sign convention: the
// largest-magnitude component of each eigenvector is positive (ties broken
// by lowest site index), which makes the output byte-reproducible.
struct EigenSystem {
    int n = 0;
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors; // n*n, column-major

    std::span<const double> eigenvector(int m) const {
        return std::span<const double>(eigenvectors).subspan(static_cast<std::size_t>(m) * n, n);
    }
    // Component of eigenvector m at (0-based) site i.
    double component(int site, int m) const {
        return eigenvectors[static_cast<std::size_t>(m) * n + site];
    }
};

// Implicit-shift QL iteration with accumulated transforms; 50 sweeps per
// eigenvalue before SolverError.
EigenSystem diagonalize(const Hamiltonian& h);

// a_m = <phi_m|psi>.
std::vector<complexd> project(const StateVector& psi, const EigenSystem& eig);

} // namespace pstchain
