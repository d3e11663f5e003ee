#include "pstchain/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pstchain {

double mirroring_time(const ChainSpec& spec) {
    if (spec.law() != CouplingLaw::Pst)
        throw std::invalid_argument("mirroring_time: defined for the engineered coupling law only");
    return std::numbers::pi / (2.0 * spec.j0());
}

double revival_period(const ChainSpec& spec) { return 2.0 * mirroring_time(spec); }

StateVector evolve(const StateVector& state0, const EigenSystem& eig, double t) {
    const int n = eig.n;
    std::vector<complexd> a = project(state0, eig);
    for (int m = 0; m < n; ++m) {
        const double phase = -eig.eigenvalues[m] * t;
        a[m] *= complexd{std::cos(phase), std::sin(phase)};
    }
    StateVector out;
    out.amplitudes.assign(n, complexd{0.0, 0.0});
    for (int m = 0; m < n; ++m) {
        const double* v = eig.eigenvectors.data() + static_cast<std::size_t>(m) * n;
        const complexd w = a[m];
        for (int i = 0; i < n; ++i) out.amplitudes[i] += v[i] * w;
    }
    return out;
}

double fidelity(const StateVector& psi, const StateVector& target) {
    if (psi.size() != target.size())
        throw std::invalid_argument("fidelity: dimension mismatch");
    complexd ov{0.0, 0.0};
    for (int i = 0; i < psi.size(); ++i)
        ov += std::conj(target.amplitudes[i]) * psi.amplitudes[i];
    return std::norm(ov);
}

double mirror_fidelity_at(const StateVector& state0, const EigenSystem& eig, double t) {
    return fidelity(evolve(state0, eig, t), mirror(state0));
}

OverlapScan::OverlapScan(const StateVector& psi0, const StateVector& target,
                         const EigenSystem& eig)
    : energies_(eig.eigenvalues), weights_(eig.n) {
    const std::vector<complexd> a = project(psi0, eig);
    const std::vector<complexd> b = project(target, eig);
    for (int m = 0; m < eig.n; ++m) weights_[m] = std::conj(b[m]) * a[m];
}

double OverlapScan::fidelity_at(double t) const {
    double re = 0.0;
    double im = 0.0;
    const int n = static_cast<int>(energies_.size());
    for (int m = 0; m < n; ++m) {
        const double phase = -energies_[m] * t;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        re += weights_[m].real() * c - weights_[m].imag() * s;
        im += weights_[m].real() * s + weights_[m].imag() * c;
    }
    return re * re + im * im;
}

WindowMax max_fidelity_over_window(const StateVector& state0, const StateVector& target,
                                   const EigenSystem& eig, const Schedule& window) {
    if (window.n_samples < 2)
        throw std::invalid_argument("window: need at least 2 samples");
    const OverlapScan scan(state0, target, eig);

    WindowMax best;
    int best_idx = 0;
    std::vector<double> f(window.n_samples);
    for (int j = 0; j < window.n_samples; ++j) {
        f[j] = scan.fidelity_at(window.at(j));
        if (j == 0 || f[j] > best.f_max) {
            best.f_max = f[j];
            best.t_at_max = window.at(j);
            best_idx = j;
        }
    }

    double lo = window.at(best_idx > 0 ? best_idx - 1 : 0);
    double hi = window.at(best_idx < window.n_samples - 1 ? best_idx + 1 : window.n_samples - 1);
    auto consider = [&](double t) {
        const double v = scan.fidelity_at(t);
        if (v > best.f_max) {
            best.f_max = v;
            best.t_at_max = t;
        }
    };

    if (best_idx > 0 && best_idx < window.n_samples - 1) {
        // Parabola through the three bracketing samples (uniform spacing).
        const double fm = f[best_idx - 1];
        const double f0 = f[best_idx];
        const double fp = f[best_idx + 1];
        const double denom = fm - 2.0 * f0 + fp;
        if (denom < 0.0) {
            const double step = (hi - lo) / 2.0;
            double tv = window.at(best_idx) + 0.5 * step * (fm - fp) / denom;
            tv = std::max(lo, std::min(hi, tv));
            consider(tv);
        }
    }

    // Golden-section on the bracket, keeping the best value seen anywhere.
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = scan.fidelity_at(x1);
    double f2 = scan.fidelity_at(x2);
    for (int it = 0; it < 20; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = scan.fidelity_at(x2);
            if (f2 > best.f_max) {
                best.f_max = f2;
                best.t_at_max = x2;
            }
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = scan.fidelity_at(x1);
            if (f1 > best.f_max) {
                best.f_max = f1;
                best.t_at_max = x1;
            }
        }
    }
    return best;
}

SteppedEvolution evolve_stepped_oracle(const StateVector& state0, const Hamiltonian& h, double t,
                                       double dt) {
    SteppedEvolution result;
    result.state = state0;
    if (t == 0.0) return result;
    if (!(dt > 0.0) || dt > t)
        throw std::invalid_argument("dt: need 0 < dt <= t");

    const int n = h.size();
    if (state0.size() != n) throw std::invalid_argument("state: dimension mismatch");

    std::vector<complexd>& c = result.state.amplitudes;
    std::vector<complexd> k1(n), k2(n), k3(n), k4(n), tmp(n), hx(n);
    const complexd minus_i{0.0, -1.0};

    auto rk4_step = [&](double step) {
        apply_hamiltonian(h, c, hx);
        for (int i = 0; i < n; ++i) k1[i] = minus_i * hx[i];
        for (int i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * step * k1[i];
        apply_hamiltonian(h, tmp, hx);
        for (int i = 0; i < n; ++i) k2[i] = minus_i * hx[i];
        for (int i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * step * k2[i];
        apply_hamiltonian(h, tmp, hx);
        for (int i = 0; i < n; ++i) k3[i] = minus_i * hx[i];
        for (int i = 0; i < n; ++i) tmp[i] = c[i] + step * k3[i];
        apply_hamiltonian(h, tmp, hx);
        for (int i = 0; i < n; ++i) k4[i] = minus_i * hx[i];
        const double w = step / 6.0;
        for (int i = 0; i < n; ++i) c[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };

    const long n_full = static_cast<long>(t / dt);
    for (long s = 0; s < n_full; ++s) rk4_step(dt);
    const double remainder = t - static_cast<double>(n_full) * dt;
    if (remainder > 1e-12 * dt) rk4_step(remainder);

    const double norm = result.state.norm();
    result.norm_drift = std::abs(norm - 1.0);
    if (norm > 0.0)
        for (int i = 0; i < n; ++i) c[i] /= norm;
    return result;
}

} // namespace pstchain
