#include "pstchain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pstchain {

int injection_site(Injection inj, int n_sites) {
    if (inj == Injection::End) return 1;
    return n_sites % 2 == 0 ? n_sites / 2 : (n_sites + 1) / 2;
}

namespace {

Schedule absolute_window(const ChainSpec& chain, const SteadyStateProtocol& protocol) {
    const double tm = mirroring_time(chain);
    return Schedule{protocol.t_start_tm * tm, protocol.t_end_tm * tm, protocol.n_samples};
}

} // namespace

OccupationProfile steady_state_profile(const ChainSpec& chain, const EigenSystem& eig,
                                       int site, const SteadyStateProtocol& protocol) {
    const int n = chain.n_sites();
    if (eig.n != n) throw std::invalid_argument("eigensystem: dimension mismatch");
    if (site < 1 || site > n) throw std::invalid_argument("injection_site: must be in [1, N]");
    if (protocol.n_samples < 1) throw std::invalid_argument("n_samples: must be >= 1");

    const Schedule window = absolute_window(chain, protocol);
    const int inj = site - 1;

    OccupationProfile profile;
    profile.injection_site = site;
    profile.provenance = Provenance::SingleRealization;
    profile.time_window = window;
    profile.probabilities.assign(n, 0.0);

    // a_m = <phi_m|site> is just the site-th row of the eigenvector matrix.
    std::vector<double> a(n);
    for (int m = 0; m < n; ++m) a[m] = eig.component(inj, m);

    std::vector<double> re(n), im(n);
    std::vector<double> wr(n), wi(n);
    for (int j = 0; j < window.n_samples; ++j) {
        const double t = window.at(j);
        for (int m = 0; m < n; ++m) {
            const double phase = -eig.eigenvalues[m] * t;
            wr[m] = a[m] * std::cos(phase);
            wi[m] = a[m] * std::sin(phase);
        }
        std::fill(re.begin(), re.end(), 0.0);
        std::fill(im.begin(), im.end(), 0.0);
        for (int m = 0; m < n; ++m) {
            const double* v = eig.eigenvectors.data() + static_cast<std::size_t>(m) * n;
            const double cr = wr[m];
            const double ci = wi[m];
            for (int i = 0; i < n; ++i) {
                re[i] += v[i] * cr;
                im[i] += v[i] * ci;
            }
        }
        for (int i = 0; i < n; ++i) profile.probabilities[i] += re[i] * re[i] + im[i] * im[i];
    }
    const double inv = 1.0 / window.n_samples;
    for (double& p : profile.probabilities) p *= inv;
    return profile;
}

OccupationProfile steady_state_profile(const ChainSpec& chain, const DisorderRealization& disorder,
                                       int site, const SteadyStateProtocol& protocol) {
    const EigenSystem eig = diagonalize(build_hamiltonian(chain, disorder));
    return steady_state_profile(chain, eig, site, protocol);
}

OccupationProfile ensemble_steady_state_profile(const EnsembleSpec& ensemble, int site,
                                                const SteadyStateProtocol& protocol, int workers,
                                                std::vector<double>* std_errors) {
    const EnsembleResult res = run_ensemble(
        ensemble,
        [site, protocol](const ChainSpec& chain, const DisorderRealization& r) {
            return steady_state_profile(chain, r, site, protocol).probabilities;
        },
        workers);
    OccupationProfile profile;
    profile.probabilities = res.mean;
    profile.injection_site = site;
    profile.provenance = Provenance::EnsembleMean;
    profile.time_window = absolute_window(ensemble.chain, protocol);
    if (std_errors) *std_errors = res.std_error;
    return profile;
}

std::vector<double> critical_line(int n_sites, Injection inj) {
    std::vector<double> line(n_sites);
    if (inj == Injection::End) {
        for (int i = 1; i <= n_sites; ++i)
            line[i - 1] = kCriticalPrefactor / (static_cast<double>(i) * i);
    } else {
        const int centre = injection_site(Injection::Centre, n_sites);
        for (int i = 1; i <= n_sites; ++i) {
            const double x = std::abs(i - centre) + 1.0;
            line[i - 1] = 0.5 * kCriticalPrefactor / (x * x);
        }
    }
    return line;
}

LocalisationVerdict fit_delta(const OccupationProfile& profile, int fit_lo, int fit_hi) {
    if (fit_lo < 1 || fit_hi <= fit_lo)
        throw std::invalid_argument("fit_range: need i_hi > i_lo >= 1");

    const int n = static_cast<int>(profile.probabilities.size());
    std::vector<double> lx, lp;
    lx.reserve(n);
    lp.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const int x = std::abs(i - profile.injection_site) + 1;
        if (x < fit_lo || x > fit_hi) continue;
        const double p = profile.probabilities[i - 1];
        if (!(p > 0.0))
            throw FitError("fit: non-positive probability at site " + std::to_string(i) +
                           " (range reaches the numerical noise floor)");
        lx.push_back(std::log(static_cast<double>(x)));
        lp.push_back(std::log(p));
    }
    if (lx.size() < 2) throw FitError("fit: fewer than 2 sites in range");

    const std::size_t k = lx.size();
    double mx = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += lx[i];
        mp += lp[i];
    }
    mx /= static_cast<double>(k);
    mp /= static_cast<double>(k);
    double sxx = 0.0, sxp = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxp += (lx[i] - mx) * (lp[i] - mp);
    }
    if (sxx == 0.0) throw FitError("fit: degenerate abscissa (single distance value)");
    const double slope = sxp / sxx;
    const double intercept = mp - slope * mx;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = lp[i] - (intercept + slope * lx[i]);
        ss_res += r * r;
    }

    LocalisationVerdict v;
    v.delta = -slope - 2.0;
    v.alpha = std::exp(intercept);
    v.fit_lo = fit_lo;
    v.fit_hi = fit_hi;
    v.localised = v.delta >= 0.0;
    v.rms_log_residual = std::sqrt(ss_res / static_cast<double>(k));
    return v;
}

std::pair<int, int> default_fit_range(int n_sites, Injection inj) {
    if (inj == Injection::End) return {10, n_sites / 2};
    return {10, n_sites / 4};
}

int contiguous_support(const std::vector<double>& probabilities, int site, double threshold) {
    const int n = static_cast<int>(probabilities.size());
    if (site < 1 || site > n) throw std::invalid_argument("injection_site: must be in [1, N]");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("threshold: must be in (0, 1)");

    int lo = site - 1;
    int hi = site - 1;
    double sum = probabilities[lo];
    while (sum < threshold && (lo > 0 || hi < n - 1)) {
        const double left = lo > 0 ? probabilities[lo - 1] : -1.0;
        const double right = hi < n - 1 ? probabilities[hi + 1] : -1.0;
        if (left > right) {
            --lo;
            sum += left;
        } else {
            ++hi;
            sum += right;
        }
    }
    return hi - lo + 1;
}

double support_fraction(const EnsembleSpec& ensemble, int site, double threshold,
                        const SteadyStateProtocol& protocol, int workers) {
    const OccupationProfile mean =
        ensemble_steady_state_profile(ensemble, site, protocol, workers);
    const int n = contiguous_support(mean.probabilities, site, threshold);
    return static_cast<double>(n) / ensemble.chain.n_sites();
}

std::vector<double> eigenstate_profiles(const EigenSystem& eig) {
    std::vector<double> out(eig.eigenvectors.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = eig.eigenvectors[i] * eig.eigenvectors[i];
    return out;
}

std::vector<double> max_site_occupancy(const EigenSystem& eig) {
    const int n = eig.n;
    std::vector<double> occ(n, 0.0);
    for (int m = 0; m < n; ++m) {
        const double* v = eig.eigenvectors.data() + static_cast<std::size_t>(m) * n;
        for (int i = 0; i < n; ++i) occ[i] = std::max(occ[i], v[i] * v[i]);
    }
    return occ;
}

std::vector<double> rho_bar(const EnsembleSpec& ensemble, int workers,
                            std::vector<double>* std_errors) {
    const EnsembleResult res = run_ensemble(
        ensemble,
        [](const ChainSpec& chain, const DisorderRealization& r) {
            return max_site_occupancy(diagonalize(build_hamiltonian(chain, r)));
        },
        workers);
    if (std_errors) *std_errors = res.std_error;
    return res.mean;
}

InjectedStateReport injected_state_report(const EigenSystem& eig, int site, int k) {
    const int n = eig.n;
    if (site < 1 || site > n) throw std::invalid_argument("injection_site: must be in [1, N]");
    if (k < 1 || k > n) throw std::invalid_argument("k: must be in [1, N]");

    std::vector<double> weights(n);
    double energy = 0.0;
    for (int m = 0; m < n; ++m) {
        const double a = eig.component(site - 1, m);
        weights[m] = a * a;
        energy += weights[m] * eig.eigenvalues[m];
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return a < b;
    });

    InjectedStateReport report;
    report.energy_expectation = energy;
    report.top_modes.reserve(k);
    for (int j = 0; j < k; ++j)
        report.top_modes.push_back({order[j], weights[order[j]], eig.eigenvalues[order[j]]});
    return report;
}

SpectrumReport spectrum_report(const EigenSystem& eig, const ChainSpec& spec, int site, int k) {
    SpectrumReport report;
    report.eigenvalues = eig.eigenvalues;
    report.gaps.resize(eig.n - 1);
    for (int m = 0; m + 1 < eig.n; ++m)
        report.gaps[m] = eig.eigenvalues[m + 1] - eig.eigenvalues[m];
    report.unperturbed_gap = 2.0 * spec.j0();
    report.marked_modes = injected_state_report(eig, site, std::min(k, eig.n)).top_modes;
    return report;
}

std::vector<FidelityCell> fidelity_surface(const std::vector<int>& n_values,
                                           const std::vector<double>& e_values,
                                           int n_realizations, std::uint64_t master_seed,
                                           double j_max, const FidelityWindowParams& params,
                                           int workers) {
    if (n_values.empty() || e_values.empty())
        throw std::invalid_argument("grid: N and E lists must be non-empty");

    std::vector<FidelityCell> cells;
    cells.reserve(n_values.size() * e_values.size());
    for (int n : n_values) {
        const ChainSpec chain(n, j_max);
        const double tm = mirroring_time(chain);
        const Schedule window{0.0, params.window_tm * tm,
                              static_cast<int>(std::lround(params.grid_per_tm * params.window_tm))};
        for (double e : e_values) {
            const EnsembleSpec ens{chain, e, n_realizations, master_seed};
            const EnsembleResult res = run_ensemble(
                ens,
                [&chain, tm, &window](const ChainSpec& spec, const DisorderRealization& r) {
                    const EigenSystem eig = diagonalize(build_hamiltonian(spec, r));
                    const StateVector from = StateVector::site_basis(spec.n_sites(), 1);
                    const StateVector to = StateVector::site_basis(spec.n_sites(), spec.n_sites());
                    const OverlapScan scan(from, to, eig);
                    WindowMax wm = max_fidelity_over_window(from, to, eig, window);
                    // t_M is inside the window but not a grid point; probing it
                    // makes max >= F(t_M) hold exactly, per realization.
                    const double f_tm = scan.fidelity_at(tm);
                    if (f_tm > wm.f_max) wm = {f_tm, tm};
                    return std::vector<double>{f_tm, wm.f_max, wm.t_at_max};
                },
                workers);
            FidelityCell cell;
            cell.n_sites = n;
            cell.strength = e;
            cell.f_tm_mean = res.mean[0];
            cell.f_tm_std_error = res.std_error[0];
            cell.f_max_mean = res.mean[1];
            cell.f_max_std_error = res.std_error[1];
            cell.t_at_max_mean = res.mean[2];
            cells.push_back(cell);
        }
    }
    return cells;
}

} // namespace pstchain
