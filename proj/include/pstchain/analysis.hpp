#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pstchain/disorder.hpp"
#include "pstchain/dynamics.hpp"

namespace pstchain {

enum class Injection { End, Centre };

// Injection site for the two canonical release points. 1-based.
int injection_site(Injection inj, int n_sites);

enum class Provenance { SingleRealization, EnsembleMean };

// Site occupation probabilities |c_i|^2 averaged over a late-time window
// (and optionally over a disorder ensemble). Sums to 1.
struct OccupationProfile {
    std::vector<double> probabilities;
    int injection_site = 1; // 1-based
    Provenance provenance = Provenance::SingleRealization;
    Schedule time_window;
};

// Late-time sampling protocol, in units of t_M.
struct SteadyStateProtocol {
    double t_start_tm = 5.0;
    double t_end_tm = 7.0;
    int n_samples = 100;
};

OccupationProfile steady_state_profile(const ChainSpec& chain, const DisorderRealization& disorder,
                                       int injection_site, const SteadyStateProtocol& protocol = {});

// Same computation from an already-diagonalised Hamiltonian.
OccupationProfile steady_state_profile(const ChainSpec& chain, const EigenSystem& eig,
                                       int injection_site, const SteadyStateProtocol& protocol = {});

OccupationProfile ensemble_steady_state_profile(const EnsembleSpec& ensemble, int injection_site,
                                                const SteadyStateProtocol& protocol = {},
                                                int workers = 1,
                                                std::vector<double>* std_errors = nullptr);

// Cut-off profile below which a steady-state distribution counts as
// localised in the N -> infinity criterion. End injection: alpha_cr * i^-2
// with alpha_cr = 1/zeta(2); centre injection: double-sided, half the
// prefactor, distance coordinate |i - N/2| + 1.
std::vector<double> critical_line(int n_sites, Injection inj);

inline constexpr double kCriticalPrefactor = 0.60792710185402662; // 6/pi^2

struct LocalisationVerdict {
    double delta = 0.0; // occupation decays as x^-(2+delta); delta >= 0 means localised
    double alpha = 0.0; // prefactor from the intercept
    int fit_lo = 0;     // fit range in the distance coordinate
    int fit_hi = 0;
    bool localised = false;
    double rms_log_residual = 0.0;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Least-squares fit of log p vs log(|i - injection| + 1) over sites whose
// distance coordinate lies in [fit_lo, fit_hi]. Throws FitError on
// non-positive probabilities in range.
LocalisationVerdict fit_delta(const OccupationProfile& profile, int fit_lo, int fit_hi);

// Default fit ranges: end injection [10, N/2]; centre injection [10, N/4].
std::pair<int, int> default_fit_range(int n_sites, Injection inj);

// Smallest contiguous window around the injection site holding `threshold`
// of the given profile, grown greedily towards the larger-probability
// neighbour. Returns the window size n.
int contiguous_support(const std::vector<double>& probabilities, int injection_site,
                       double threshold);

// n/N for the ensemble- and time-averaged occupation.
double support_fraction(const EnsembleSpec& ensemble, int injection_site, double threshold = 0.95,
                        const SteadyStateProtocol& protocol = {}, int workers = 1);

// |<i|phi_m>|^2, column-major like EigenSystem::eigenvectors; columns sum to 1.
std::vector<double> eigenstate_profiles(const EigenSystem& eig);

// Per-site maximum occupation over eigenstates, max_m |<i|phi_m>|^2.
std::vector<double> max_site_occupancy(const EigenSystem& eig);

// Ensemble mean of max_site_occupancy.
std::vector<double> rho_bar(const EnsembleSpec& ensemble, int workers = 1,
                            std::vector<double>* std_errors = nullptr);

struct InjectedMode {
    int mode_index = 0; // 0-based into the ascending spectrum
    double weight = 0.0;
    double energy = 0.0;
};

struct InjectedStateReport {
    std::vector<InjectedMode> top_modes; // k largest weights, descending
    double energy_expectation = 0.0;     // sum_m |a_m|^2 E_m over all modes
};

InjectedStateReport injected_state_report(const EigenSystem& eig, int injection_site, int k = 3);

struct SpectrumReport {
    std::vector<double> eigenvalues; // ascending
    std::vector<double> gaps;        // N-1 consecutive differences
    double unperturbed_gap = 0.0;    // 2 J0 reference
    std::vector<InjectedMode> marked_modes; // modes dominating the injected state
};

SpectrumReport spectrum_report(const EigenSystem& eig, const ChainSpec& spec,
                               int injection_site = 1, int k = 3);

struct FidelityWindowParams {
    double window_tm = 4.5;  // scan window [0, window_tm * t_M]
    int grid_per_tm = 2000;  // samples per t_M before refinement
};

struct FidelityCell {
    int n_sites = 0;
    double strength = 0.0;
    double f_tm_mean = 0.0;
    double f_tm_std_error = 0.0;
    double f_max_mean = 0.0;
    double f_max_std_error = 0.0;
    double t_at_max_mean = 0.0;
};

// End-to-end transfer statistics over an (N, E) grid: mean fidelity site 1 ->
// site N at exactly t_M and mean maximum over the scan window, each with
// standard errors, per 100-realization (by default) ensembles.
std::vector<FidelityCell> fidelity_surface(const std::vector<int>& n_values,
                                           const std::vector<double>& e_values,
                                           int n_realizations, std::uint64_t master_seed,
                                           double j_max = 1.0,
                                           const FidelityWindowParams& params = {},
                                           int workers = 1);

} // namespace pstchain
