#include "pstchain/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pstchain {

namespace {

// Implicit-shift QL for a symmetric tridiagonal matrix, rotations accumulated
// into z (column-major, columns are eigenvectors). Classic EISPACK tql2
// structure; orthogonality of the output is structural because z only ever
// sees Givens rotations.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                    int n) {
    constexpr int kMaxSweeps = 50;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxSweeps)
                    throw SolverError(l, "tridiagonal QL failed to converge at index " +
                                             std::to_string(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        // Deflate and restart the sweep.
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;

                    double* zi = z.data() + static_cast<std::size_t>(i) * n;
                    double* zj = zi + n; // column i+1
                    for (int k = 0; k < n; ++k) {
                        f = zj[k];
                        zj[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

EigenSystem diagonalize(const Hamiltonian& h) {
    const int n = h.size();
    if (n < 2) throw std::invalid_argument("hamiltonian: need at least 2 sites");
    if (static_cast<int>(h.off_diagonal.size()) != n - 1)
        throw std::invalid_argument("hamiltonian: off_diagonal size must be n-1");

    std::vector<double> d = h.diagonal;
    std::vector<double> e = h.off_diagonal;
    e.push_back(0.0);

    std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;

    tridiagonal_ql(d, e, z, n);

    // Ascending order, stable under ties.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    EigenSystem eig;
    eig.n = n;
    eig.eigenvalues.resize(n);
    eig.eigenvectors.resize(static_cast<std::size_t>(n) * n);
    for (int m = 0; m < n; ++m) {
        eig.eigenvalues[m] = d[order[m]];
        const double* src = z.data() + static_cast<std::size_t>(order[m]) * n;
        double* dst = eig.eigenvectors.data() + static_cast<std::size_t>(m) * n;

        // Fix the overall sign: largest-magnitude component positive, ties
        // broken by lowest site index (strict > keeps the first maximum).
        int peak = 0;
        double peak_abs = std::abs(src[0]);
        for (int i = 1; i < n; ++i) {
            const double a = std::abs(src[i]);
            if (a > peak_abs) {
                peak_abs = a;
                peak = i;
            }
        }
        const double sign = src[peak] < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) dst[i] = sign * src[i];
    }
    return eig;
}

std::vector<complexd> project(const StateVector& psi, const EigenSystem& eig) {
    const int n = eig.n;
    if (psi.size() != n)
        throw std::invalid_argument("project: state dimension " + std::to_string(psi.size()) +
                                    " != eigensystem dimension " + std::to_string(n));
    std::vector<complexd> a(n);
    for (int m = 0; m < n; ++m) {
        const double* v = eig.eigenvectors.data() + static_cast<std::size_t>(m) * n;
        double re = 0.0;
        double im = 0.0;
        for (int i = 0; i < n; ++i) {
            re += v[i] * psi.amplitudes[i].real();
            im += v[i] * psi.amplitudes[i].imag();
        }
        a[m] = complexd{re, im};
    }
    return a;
}

} // namespace pstchain
