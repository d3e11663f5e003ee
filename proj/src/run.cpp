#include "pstchain/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "pstchain/rng.hpp"
#include "pstchain/version.hpp"

namespace pstchain {

namespace fs = std::filesystem;
using nlohmann::json;

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Couplings: return "couplings";
        case Experiment::Evolve: return "evolve";
        case Experiment::SteadyState: return "steady-state";
        case Experiment::SupportFraction: return "support-fraction";
        case Experiment::FidelitySurface: return "fidelity-surface";
        case Experiment::EigenReport: return "eigen-report";
        case Experiment::DeltaFit: return "delta-fit";
    }
    return "?";
}

std::optional<Experiment> experiment_from_name(const std::string& name) {
    for (Experiment e : {Experiment::Couplings, Experiment::Evolve, Experiment::SteadyState,
                         Experiment::SupportFraction, Experiment::FidelitySurface,
                         Experiment::EigenReport, Experiment::DeltaFit})
        if (experiment_name(e) == name) return e;
    return std::nullopt;
}

int InjectionSpec::resolve(int n_sites) const {
    switch (kind) {
        case Kind::End: return 1;
        case Kind::Centre: return injection_site(Injection::Centre, n_sites);
        case Kind::Site:
            if (site < 1 || site > n_sites)
                throw ConfigError("injection", "site " + std::to_string(site) +
                                                   " outside chain of " + std::to_string(n_sites) +
                                                   " sites");
            return site;
    }
    return 1;
}

std::string InjectionSpec::to_string() const {
    switch (kind) {
        case Kind::End: return "end";
        case Kind::Centre: return "centre";
        case Kind::Site: return std::to_string(site);
    }
    return "end";
}

void apply_experiment_defaults(RunConfig& cfg) {
    if (cfg.experiment == Experiment::Evolve) {
        cfg.window = SteadyStateProtocol{0.0, 2.0, 201};
    } else {
        cfg.window = SteadyStateProtocol{5.0, 7.0, 100};
    }
}

namespace {

[[noreturn]] void bad_type(const std::string& field, const char* expected) {
    throw ConfigError(field, std::string("expected ") + expected);
}

double get_number(const json& v, const std::string& field) {
    if (!v.is_number()) bad_type(field, "a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) bad_type(field, "an integer");
    return v.get<int>();
}

std::vector<int> get_int_list(const json& v, const std::string& field) {
    std::vector<int> out;
    if (v.is_number_integer()) {
        out.push_back(v.get<int>());
    } else if (v.is_array()) {
        for (const auto& x : v) out.push_back(get_int(x, field));
    } else {
        bad_type(field, "an integer or list of integers");
    }
    return out;
}

std::vector<double> get_number_list(const json& v, const std::string& field) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) out.push_back(get_number(x, field));
    } else {
        bad_type(field, "a number or list of numbers");
    }
    return out;
}

void parse_chain_object(const json& v, RunConfig& cfg) {
    if (!v.is_object()) bad_type("chain", "an object");
    for (const auto& [key, value] : v.items()) {
        if (key == "N") {
            cfg.n_values = get_int_list(value, "chain.N");
        } else if (key == "J_max") {
            cfg.j_max = get_number(value, "chain.J_max");
        } else if (key == "law") {
            if (!value.is_string()) bad_type("chain.law", "\"pst\" or \"uniform\"");
            const std::string law = value.get<std::string>();
            if (law == "pst")
                cfg.law = CouplingLaw::Pst;
            else if (law == "uniform")
                cfg.law = CouplingLaw::Uniform;
            else
                throw ConfigError("chain.law", "unknown law '" + law + "'");
        } else {
            throw ConfigError("chain." + key, "unknown key");
        }
    }
}

void parse_window_object(const json& v, RunConfig& cfg) {
    if (!v.is_object()) bad_type("window", "an object");
    for (const auto& [key, value] : v.items()) {
        if (key == "start_tM")
            cfg.window.t_start_tm = get_number(value, "window.start_tM");
        else if (key == "end_tM")
            cfg.window.t_end_tm = get_number(value, "window.end_tM");
        else if (key == "samples")
            cfg.window.n_samples = get_int(value, "window.samples");
        else
            throw ConfigError("window." + key, "unknown key");
    }
}

void parse_fidelity_window_object(const json& v, RunConfig& cfg) {
    if (!v.is_object()) bad_type("fidelity_window", "an object");
    for (const auto& [key, value] : v.items()) {
        if (key == "end_tM")
            cfg.fidelity_window.window_tm = get_number(value, "fidelity_window.end_tM");
        else if (key == "grid_per_tM")
            cfg.fidelity_window.grid_per_tm = get_int(value, "fidelity_window.grid_per_tM");
        else
            throw ConfigError("fidelity_window." + key, "unknown key");
    }
}

void parse_fit_range_object(const json& v, RunConfig& cfg) {
    if (!v.is_object()) bad_type("fit_range", "an object");
    int lo = 0, hi = 0;
    for (const auto& [key, value] : v.items()) {
        if (key == "lo")
            lo = get_int(value, "fit_range.lo");
        else if (key == "hi")
            hi = get_int(value, "fit_range.hi");
        else
            throw ConfigError("fit_range." + key, "unknown key");
    }
    cfg.fit_range = std::make_pair(lo, hi);
}

void parse_injection_value(const json& v, RunConfig& cfg) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "end")
            cfg.injection = {InjectionSpec::Kind::End, 1};
        else if (s == "centre")
            cfg.injection = {InjectionSpec::Kind::Centre, 1};
        else
            throw ConfigError("injection", "expected \"end\", \"centre\", or a site number");
    } else if (v.is_number_integer()) {
        cfg.injection = {InjectionSpec::Kind::Site, v.get<int>()};
    } else {
        bad_type("injection", "\"end\", \"centre\", or a site number");
    }
}

} // namespace

RunConfig parse_config(const std::string& json_text, std::optional<Experiment> experiment_override,
                       bool validate_now) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "top level must be an object");

    RunConfig cfg;
    std::optional<Experiment> experiment = experiment_override;
    if (doc.contains("experiment")) {
        const json& v = doc["experiment"];
        if (!v.is_string()) bad_type("experiment", "a string");
        const auto e = experiment_from_name(v.get<std::string>());
        if (!e) throw ConfigError("experiment", "unknown experiment '" + v.get<std::string>() + "'");
        if (!experiment_override) experiment = e;
    }
    if (!experiment) throw ConfigError("experiment", "missing");
    cfg.experiment = *experiment;
    apply_experiment_defaults(cfg);

    for (const auto& [key, value] : doc.items()) {
        if (key == "experiment") {
            // handled above
        } else if (key == "chain") {
            parse_chain_object(value, cfg);
        } else if (key == "N") {
            cfg.n_values = get_int_list(value, "N");
        } else if (key == "J_max") {
            cfg.j_max = get_number(value, "J_max");
        } else if (key == "E") {
            cfg.e_values = get_number_list(value, "E");
        } else if (key == "n_realizations") {
            cfg.n_realizations = get_int(value, "n_realizations");
        } else if (key == "master_seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                bad_type("master_seed", "a non-negative integer");
            if (value.is_number_integer() && !value.is_number_unsigned() && value.get<long long>() < 0)
                throw ConfigError("master_seed", "must be non-negative");
            cfg.master_seed = value.get<std::uint64_t>();
        } else if (key == "injection") {
            parse_injection_value(value, cfg);
        } else if (key == "window") {
            parse_window_object(value, cfg);
        } else if (key == "fidelity_window") {
            parse_fidelity_window_object(value, cfg);
        } else if (key == "fit_range") {
            parse_fit_range_object(value, cfg);
        } else if (key == "threshold") {
            cfg.threshold = get_number(value, "threshold");
        } else if (key == "top_k") {
            cfg.top_k = get_int(value, "top_k");
        } else if (key == "workers") {
            cfg.workers = get_int(value, "workers");
        } else if (key == "out") {
            if (!value.is_string()) bad_type("out", "a string");
            cfg.out_dir = value.get<std::string>();
        } else if (key == "rng_algorithm") {
            if (!value.is_string() || value.get<std::string>() != kRngAlgorithm)
                throw ConfigError("rng_algorithm",
                                  std::string("this build generates '") + kRngAlgorithm + "'");
        } else if (key == "code_version" || key == "outputs" || key == "injected_state_reports") {
            // informational manifest fields, accepted on re-parse
        } else {
            throw ConfigError(key, "unknown key");
        }
    }

    if (validate_now) validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.n_values.empty()) throw ConfigError("N", "required");
    for (int n : cfg.n_values)
        if (n < 2) throw ConfigError("N", "chain needs at least 2 sites");
    if (!(cfg.j_max > 0.0)) throw ConfigError("J_max", "must be positive");
    for (double e : cfg.e_values)
        if (!(e >= 0.0)) throw ConfigError("E", "must be non-negative");
    if (cfg.n_realizations < 1) throw ConfigError("n_realizations", "must be >= 1");
    if (cfg.workers < 1) throw ConfigError("workers", "must be >= 1");
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
        throw ConfigError("threshold", "must be in (0, 1)");
    if (cfg.top_k < 1) throw ConfigError("top_k", "must be >= 1");
    if (cfg.window.n_samples < 1) throw ConfigError("window.samples", "must be >= 1");
    if (cfg.window.t_end_tm < cfg.window.t_start_tm)
        throw ConfigError("window.end_tM", "must be >= window.start_tM");
    if (!(cfg.fidelity_window.window_tm > 0.0))
        throw ConfigError("fidelity_window.end_tM", "must be positive");
    if (cfg.fidelity_window.grid_per_tm < 1)
        throw ConfigError("fidelity_window.grid_per_tM", "must be >= 1");
    if (cfg.fit_range && !(cfg.fit_range->second > cfg.fit_range->first && cfg.fit_range->first >= 1))
        throw ConfigError("fit_range", "need hi > lo >= 1");
    if (cfg.injection.kind == InjectionSpec::Kind::Site && cfg.injection.site < 1)
        throw ConfigError("injection", "site must be >= 1");

    const bool needs_disorder = cfg.experiment != Experiment::Couplings;
    if (needs_disorder) {
        if (!cfg.master_seed)
            throw ConfigError("master_seed", "required (no silent default seed)");
        if (cfg.e_values.empty()) throw ConfigError("E", "required");
    }

    // Protocols phrased in units of t_M only make sense for the engineered law.
    const bool needs_tm = cfg.experiment == Experiment::Evolve ||
                          cfg.experiment == Experiment::SteadyState ||
                          cfg.experiment == Experiment::SupportFraction ||
                          cfg.experiment == Experiment::FidelitySurface ||
                          cfg.experiment == Experiment::DeltaFit;
    if (needs_tm && cfg.law != CouplingLaw::Pst)
        throw ConfigError("law", "experiment '" + experiment_name(cfg.experiment) +
                                     "' requires the pst coupling law");
    if (cfg.experiment == Experiment::FidelitySurface &&
        cfg.injection.kind != InjectionSpec::Kind::End)
        throw ConfigError("injection", "fidelity-surface is defined for end injection");
}

namespace {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string cell_tag(int n, double e) {
    return "N" + std::to_string(n) + "_E" + num_short(e);
}

// Critical occupation line for an arbitrary release site: end release decays
// as i^-2 from the release end; interior release is double-sided with half
// the prefactor.
std::vector<double> critical_line_for_site(int n_sites, int site) {
    if (site == 1) return critical_line(n_sites, Injection::End);
    if (site == n_sites) {
        std::vector<double> line(n_sites);
        for (int i = 1; i <= n_sites; ++i) {
            const double x = n_sites + 1 - i;
            line[i - 1] = kCriticalPrefactor / (x * x);
        }
        return line;
    }
    std::vector<double> line(n_sites);
    for (int i = 1; i <= n_sites; ++i) {
        const double x = std::abs(i - site) + 1.0;
        line[i - 1] = 0.5 * kCriticalPrefactor / (x * x);
    }
    return line;
}

struct Output {
    std::string name;
    ResultTable table;
};

struct ExperimentResult {
    std::vector<Output> outputs;
    json extra; // merged into the manifest
};

ExperimentResult run_couplings(const RunConfig& cfg) {
    ExperimentResult result;
    for (int n : cfg.n_values) {
        const ChainSpec chain(n, cfg.j_max, cfg.law);
        const std::vector<double> j =
            cfg.law == CouplingLaw::Pst ? pst_couplings(chain) : uniform_couplings(chain);
        ResultTable t;
        t.columns = {"i", "J"};
        t.units = {"bond index", "J_max"};
        for (int i = 1; i < n; ++i)
            t.rows.push_back({static_cast<double>(i), j[i - 1]});
        result.outputs.push_back({"couplings_N" + std::to_string(n) + ".csv", std::move(t)});
    }
    return result;
}

ExperimentResult run_evolve(const RunConfig& cfg) {
    ExperimentResult result;
    for (int n : cfg.n_values) {
        const ChainSpec chain(n, cfg.j_max, cfg.law);
        const double tm = mirroring_time(chain);
        const int site = cfg.injection.resolve(n);
        const StateVector psi0 = StateVector::site_basis(n, site);
        const StateVector target = mirror(psi0);
        for (double e : cfg.e_values) {
            const EnsembleSpec ens{chain, e, std::max(1, cfg.n_realizations), *cfg.master_seed};
            const DisorderRealization r = sample_disorder(ens, 0);
            const EigenSystem eig = diagonalize(build_hamiltonian(chain, r));
            ResultTable t;
            t.columns = {"t", "t_over_tM", "F_mirror", "F_initial", "p_first", "p_last"};
            t.units = {"hbar/J_max", "t_M", "fidelity", "fidelity", "probability", "probability"};
            const Schedule sched{cfg.window.t_start_tm * tm, cfg.window.t_end_tm * tm,
                                 cfg.window.n_samples};
            for (int j = 0; j < sched.n_samples; ++j) {
                const double time = sched.at(j);
                const StateVector psi = evolve(psi0, eig, time);
                t.rows.push_back({time, time / tm, fidelity(psi, target), fidelity(psi, psi0),
                                  std::norm(psi.amplitudes.front()),
                                  std::norm(psi.amplitudes.back())});
            }
            result.outputs.push_back({"evolve_" + cell_tag(n, e) + ".csv", std::move(t)});
        }
    }
    return result;
}

ExperimentResult run_steady_state(const RunConfig& cfg) {
    ExperimentResult result;
    for (int n : cfg.n_values) {
        const ChainSpec chain(n, cfg.j_max, cfg.law);
        const int site = cfg.injection.resolve(n);
        const std::vector<double> critical = critical_line_for_site(n, site);
        for (double e : cfg.e_values) {
            std::cerr << "[steady-state] N=" << n << " E=" << num_short(e) << "\n";
            const EnsembleSpec ens{chain, e, cfg.n_realizations, *cfg.master_seed};
            std::vector<double> se;
            const OccupationProfile mean =
                ensemble_steady_state_profile(ens, site, cfg.window, cfg.workers, &se);
            ResultTable t;
            t.columns = {"site", "p_mean", "p_stderr", "critical_line"};
            t.units = {"index", "probability", "probability", "probability"};
            for (int i = 0; i < n; ++i)
                t.rows.push_back({static_cast<double>(i + 1), mean.probabilities[i], se[i],
                                  critical[i]});
            result.outputs.push_back({"steady_state_" + cell_tag(n, e) + ".csv", std::move(t)});
        }
    }
    return result;
}

ExperimentResult run_support_fraction(const RunConfig& cfg) {
    ExperimentResult result;
    ResultTable t;
    t.columns = {"N", "E", "n", "n_over_N"};
    t.units = {"sites", "J_max", "sites", "dimensionless"};
    for (int n : cfg.n_values) {
        const ChainSpec chain(n, cfg.j_max, cfg.law);
        const int site = cfg.injection.resolve(n);
        for (double e : cfg.e_values) {
            std::cerr << "[support-fraction] N=" << n << " E=" << num_short(e) << "\n";
            const EnsembleSpec ens{chain, e, cfg.n_realizations, *cfg.master_seed};
            const OccupationProfile mean =
                ensemble_steady_state_profile(ens, site, cfg.window, cfg.workers);
            const int support = contiguous_support(mean.probabilities, site, cfg.threshold);
            t.rows.push_back({static_cast<double>(n), e, static_cast<double>(support),
                              static_cast<double>(support) / n});
        }
    }
    result.outputs.push_back({"support_fraction.csv", std::move(t)});
    return result;
}

ExperimentResult run_fidelity_surface(const RunConfig& cfg) {
    ExperimentResult result;
    const std::vector<FidelityCell> cells =
        fidelity_surface(cfg.n_values, cfg.e_values, cfg.n_realizations, *cfg.master_seed,
                         cfg.j_max, cfg.fidelity_window, cfg.workers);
    ResultTable t;
    t.columns = {"N", "E", "F_tM_mean", "F_tM_stderr", "F_max_mean", "F_max_stderr",
                 "t_at_max_mean"};
    t.units = {"sites", "J_max", "fidelity", "fidelity", "fidelity", "fidelity", "hbar/J_max"};
    for (const FidelityCell& c : cells)
        t.rows.push_back({static_cast<double>(c.n_sites), c.strength, c.f_tm_mean,
                          c.f_tm_std_error, c.f_max_mean, c.f_max_std_error, c.t_at_max_mean});
    result.outputs.push_back({"fidelity_surface.csv", std::move(t)});
    return result;
}

ExperimentResult run_eigen_report(const RunConfig& cfg) {
    ExperimentResult result;
    json reports = json::array();
    for (int n : cfg.n_values) {
        const ChainSpec chain(n, cfg.j_max, cfg.law);
        const int site = cfg.injection.resolve(n);
        for (double e : cfg.e_values) {
            std::cerr << "[eigen-report] N=" << n << " E=" << num_short(e) << "\n";
            const EnsembleSpec ens{chain, e, cfg.n_realizations, *cfg.master_seed};
            std::vector<double> se;
            const std::vector<double> rho = rho_bar(ens, cfg.workers, &se);

            ResultTable rt;
            rt.columns = {"site", "rho_bar", "rho_bar_stderr"};
            rt.units = {"index", "probability", "probability"};
            for (int i = 0; i < n; ++i)
                rt.rows.push_back({static_cast<double>(i + 1), rho[i], se[i]});
            result.outputs.push_back({"rho_bar_" + cell_tag(n, e) + ".csv", std::move(rt)});

            // Spectrum and injected-state structure for the first realization.
            const DisorderRealization r0 = sample_disorder(ens, 0);
            const EigenSystem eig = diagonalize(build_hamiltonian(chain, r0));
            const SpectrumReport sr = spectrum_report(eig, chain, site, cfg.top_k);
            ResultTable st;
            st.columns = {"mode_index", "eigenvalue", "gap_to_next"};
            st.units = {"index", "J_max", "J_max"};
            for (int m = 0; m < n; ++m)
                st.rows.push_back({static_cast<double>(m + 1), sr.eigenvalues[m],
                                   m + 1 < n ? sr.gaps[m]
                                             : std::numeric_limits<double>::quiet_NaN()});
            result.outputs.push_back({"spectrum_" + cell_tag(n, e) + ".csv", std::move(st)});

            const InjectedStateReport ir = injected_state_report(eig, site, cfg.top_k);
            json jr;
            jr["N"] = n;
            jr["E"] = e;
            jr["realization"] = 0;
            jr["energy_expectation"] = ir.energy_expectation;
            jr["unperturbed_gap"] = sr.unperturbed_gap;
            jr["modes"] = json::array();
            for (const InjectedMode& m : ir.top_modes)
                jr["modes"].push_back(
                    {{"mode_index", m.mode_index + 1}, {"weight", m.weight}, {"energy", m.energy}});
            reports.push_back(std::move(jr));
        }
    }
    result.extra["injected_state_reports"] = std::move(reports);
    return result;
}

ExperimentResult run_delta_fit(const RunConfig& cfg) {
    ExperimentResult result;
    ResultTable t;
    t.columns = {"N", "E", "i_lo", "i_hi", "delta", "alpha", "rms_log_residual"};
    t.units = {"sites", "J_max", "distance", "distance", "dimensionless", "dimensionless",
               "log-probability"};
    for (int n : cfg.n_values) {
        const ChainSpec chain(n, cfg.j_max, cfg.law);
        const int site = cfg.injection.resolve(n);
        const Injection inj_kind = cfg.injection.kind == InjectionSpec::Kind::Centre
                                       ? Injection::Centre
                                       : Injection::End;
        const auto range = cfg.fit_range ? *cfg.fit_range : default_fit_range(n, inj_kind);
        for (double e : cfg.e_values) {
            std::cerr << "[delta-fit] N=" << n << " E=" << num_short(e) << "\n";
            const EnsembleSpec ens{chain, e, cfg.n_realizations, *cfg.master_seed};
            const OccupationProfile mean =
                ensemble_steady_state_profile(ens, site, cfg.window, cfg.workers);
            const LocalisationVerdict v = fit_delta(mean, range.first, range.second);
            t.rows.push_back({static_cast<double>(n), e, static_cast<double>(v.fit_lo),
                              static_cast<double>(v.fit_hi), v.delta, v.alpha,
                              v.rms_log_residual});
        }
    }
    result.outputs.push_back({"delta_fit.csv", std::move(t)});
    return result;
}

ExperimentResult dispatch(const RunConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::Couplings: return run_couplings(cfg);
        case Experiment::Evolve: return run_evolve(cfg);
        case Experiment::SteadyState: return run_steady_state(cfg);
        case Experiment::SupportFraction: return run_support_fraction(cfg);
        case Experiment::FidelitySurface: return run_fidelity_surface(cfg);
        case Experiment::EigenReport: return run_eigen_report(cfg);
        case Experiment::DeltaFit: return run_delta_fit(cfg);
    }
    throw std::logic_error("unreachable");
}

} // namespace

void write_csv(const ResultTable& table, std::ostream& os, const std::string& manifest_ref) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << "\n# units: ";
    for (std::size_t i = 0; i < table.units.size(); ++i)
        os << (i ? "," : "") << table.units[i];
    os << "\n# manifest: " << manifest_ref << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << num17(row[i]);
        os << "\n";
    }
}

std::string manifest_json(const RunConfig& cfg, const std::vector<std::string>& outputs,
                          const std::string& extra_json) {
    json j;
    j["experiment"] = experiment_name(cfg.experiment);
    if (cfg.n_values.size() == 1)
        j["chain"]["N"] = cfg.n_values.front();
    else
        j["chain"]["N"] = cfg.n_values;
    j["chain"]["J_max"] = cfg.j_max;
    j["chain"]["law"] = cfg.law == CouplingLaw::Pst ? "pst" : "uniform";
    if (!cfg.e_values.empty()) {
        if (cfg.e_values.size() == 1)
            j["E"] = cfg.e_values.front();
        else
            j["E"] = cfg.e_values;
    }
    j["n_realizations"] = cfg.n_realizations;
    if (cfg.master_seed) {
        j["master_seed"] = *cfg.master_seed;
        j["rng_algorithm"] = kRngAlgorithm;
    }
    if (cfg.injection.kind == InjectionSpec::Kind::Site)
        j["injection"] = cfg.injection.site;
    else
        j["injection"] = cfg.injection.to_string();
    j["window"] = {{"start_tM", cfg.window.t_start_tm},
                   {"end_tM", cfg.window.t_end_tm},
                   {"samples", cfg.window.n_samples}};
    j["fidelity_window"] = {{"end_tM", cfg.fidelity_window.window_tm},
                            {"grid_per_tM", cfg.fidelity_window.grid_per_tm}};
    if (cfg.fit_range)
        j["fit_range"] = {{"lo", cfg.fit_range->first}, {"hi", cfg.fit_range->second}};
    j["threshold"] = cfg.threshold;
    j["top_k"] = cfg.top_k;
    j["workers"] = cfg.workers;
    j["out"] = cfg.out_dir;
    j["code_version"] = kVersion;
    j["outputs"] = outputs;
    if (!extra_json.empty()) {
        const json extra = json::parse(extra_json);
        for (const auto& [key, value] : extra.items()) j[key] = value;
    }
    return j.dump(2) + "\n";
}

int run(const RunConfig& cfg) {
    validate(cfg);
    const ExperimentResult result = dispatch(cfg);

    if (cfg.out_dir == "-") {
        if (result.outputs.size() != 1)
            throw ConfigError("out", "pipe mode supports single-table experiments only (got " +
                                         std::to_string(result.outputs.size()) + " tables)");
        write_csv(result.outputs.front().table, std::cout, "none (pipe mode)");
        return 0;
    }

    fs::create_directories(cfg.out_dir);
    std::vector<std::string> names;
    names.reserve(result.outputs.size());
    for (const Output& out : result.outputs) names.push_back(out.name);

    for (const Output& out : result.outputs) {
        const fs::path path = fs::path(cfg.out_dir) / out.name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
        write_csv(out.table, os, "manifest.json");
        if (!os) throw std::runtime_error("write failed for " + path.string());
    }

    const fs::path mpath = fs::path(cfg.out_dir) / "manifest.json";
    std::ofstream ms(mpath, std::ios::binary);
    if (!ms) throw std::runtime_error("cannot open " + mpath.string() + " for writing");
    ms << manifest_json(cfg, names, result.extra.empty() ? std::string{} : result.extra.dump());
    if (!ms) throw std::runtime_error("write failed for " + mpath.string());
    return 0;
}

} // namespace pstchain
