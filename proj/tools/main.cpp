#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pstchain/run.hpp"
#include "pstchain/version.hpp"

namespace {

using pstchain::ConfigError;
using pstchain::Experiment;
using pstchain::RunConfig;

struct Flags {
    std::string config_file;
    std::vector<int> n_values;
    std::vector<double> e_values;
    std::uint64_t seed = 0;
    int realizations = 0;
    std::string injection;
    double j_max = 0.0;
    std::string law;
    std::string out;
    int workers = 0;
    double window_start_tm = 0.0, window_end_tm = 0.0;
    int window_samples = 0;
    double fid_window_tm = 0.0;
    int grid_per_tm = 0;
    int fit_lo = 0, fit_hi = 0;
    double threshold = 0.0;
    int top_k = 0;
};

void add_common_options(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_file, "JSON config file (flags override file values)");
    sub->add_option("--N", f.n_values, "chain length(s)")->delimiter(',');
    sub->add_option("--E", f.e_values, "disorder strength(s) in units of J_max")->delimiter(',');
    sub->add_option("--seed", f.seed, "master seed for the disorder ensemble");
    sub->add_option("--realizations", f.realizations, "disorder realizations per ensemble");
    sub->add_option("--injection", f.injection, "end, centre, or a 1-based site number");
    sub->add_option("--jmax", f.j_max, "peak coupling (energy unit)");
    sub->add_option("--law", f.law, "coupling law: pst or uniform");
    sub->add_option("--out", f.out, "output directory, or '-' for single-table stdout");
    sub->add_option("--workers", f.workers, "ensemble worker threads (results are identical for any count)");
    sub->add_option("--window-start-tM", f.window_start_tm, "sampling window start, units of t_M");
    sub->add_option("--window-end-tM", f.window_end_tm, "sampling window end, units of t_M");
    sub->add_option("--window-samples", f.window_samples, "samples in the window");
    sub->add_option("--fid-window-tM", f.fid_window_tm, "fidelity scan window length, units of t_M");
    sub->add_option("--grid-per-tM", f.grid_per_tm, "fidelity scan samples per t_M");
    sub->add_option("--fit-lo", f.fit_lo, "power-law fit range, lower distance");
    sub->add_option("--fit-hi", f.fit_hi, "power-law fit range, upper distance");
    sub->add_option("--threshold", f.threshold, "support-fraction probability threshold");
    sub->add_option("--top-k", f.top_k, "eigenmodes reported for the injected state");
}

void apply_flags(const CLI::App* sub, const Flags& f, RunConfig& cfg) {
    auto set = [&](const char* name) { return sub->count(name) > 0; };
    if (set("--N")) cfg.n_values = f.n_values;
    if (set("--E")) cfg.e_values = f.e_values;
    if (set("--seed")) cfg.master_seed = f.seed;
    if (set("--realizations")) cfg.n_realizations = f.realizations;
    if (set("--injection")) {
        if (f.injection == "end")
            cfg.injection = {pstchain::InjectionSpec::Kind::End, 1};
        else if (f.injection == "centre")
            cfg.injection = {pstchain::InjectionSpec::Kind::Centre, 1};
        else {
            try {
                cfg.injection = {pstchain::InjectionSpec::Kind::Site, std::stoi(f.injection)};
            } catch (...) {
                throw ConfigError("injection", "expected end, centre, or a site number");
            }
        }
    }
    if (set("--jmax")) cfg.j_max = f.j_max;
    if (set("--law")) {
        if (f.law == "pst")
            cfg.law = pstchain::CouplingLaw::Pst;
        else if (f.law == "uniform")
            cfg.law = pstchain::CouplingLaw::Uniform;
        else
            throw ConfigError("law", "expected pst or uniform");
    }
    if (set("--out")) cfg.out_dir = f.out;
    if (set("--workers")) cfg.workers = f.workers;
    if (set("--window-start-tM")) cfg.window.t_start_tm = f.window_start_tm;
    if (set("--window-end-tM")) cfg.window.t_end_tm = f.window_end_tm;
    if (set("--window-samples")) cfg.window.n_samples = f.window_samples;
    if (set("--fid-window-tM")) cfg.fidelity_window.window_tm = f.fid_window_tm;
    if (set("--grid-per-tM")) cfg.fidelity_window.grid_per_tm = f.grid_per_tm;
    if (set("--fit-lo") || set("--fit-hi")) {
        if (!(set("--fit-lo") && set("--fit-hi")))
            throw ConfigError("fit_range", "--fit-lo and --fit-hi must be given together");
        cfg.fit_range = std::make_pair(f.fit_lo, f.fit_hi);
    }
    if (set("--threshold")) cfg.threshold = f.threshold;
    if (set("--top-k")) cfg.top_k = f.top_k;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disordered spin-chain transport and localisation toolkit"};
    app.set_version_flag("--version", std::string("pstchain ") + pstchain::kVersion);
    app.require_subcommand(1);

    struct SubEntry {
        Experiment experiment;
        CLI::App* sub;
    };
    Flags flags;
    std::vector<SubEntry> subs;
    const std::pair<Experiment, const char*> kExperiments[] = {
        {Experiment::Couplings, "engineered coupling profile"},
        {Experiment::Evolve, "single-realization trajectory"},
        {Experiment::SteadyState, "late-time site occupation profile"},
        {Experiment::SupportFraction, "contiguous fraction of the chain holding the occupation"},
        {Experiment::FidelitySurface, "end-to-end transfer fidelity over an (N, E) grid"},
        {Experiment::EigenReport, "eigenstate localisation and spectrum structure"},
        {Experiment::DeltaFit, "power-law exponent of the occupation decay"},
    };
    for (const auto& [experiment, description] : kExperiments) {
        CLI::App* sub = app.add_subcommand(pstchain::experiment_name(experiment), description);
        add_common_options(sub, flags);
        subs.push_back({experiment, sub});
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const SubEntry* active = nullptr;
        for (const SubEntry& entry : subs)
            if (entry.sub->parsed()) active = &entry;
        if (!active) {
            std::cerr << "error: experiment: no subcommand given\n";
            return 2;
        }

        RunConfig cfg;
        if (active->sub->count("--config") > 0) {
            std::ifstream is(flags.config_file);
            if (!is) {
                std::cerr << "error: config: cannot read '" << flags.config_file << "'\n";
                return 2;
            }
            std::stringstream buffer;
            buffer << is.rdbuf();
            cfg = pstchain::parse_config(buffer.str(), active->experiment, /*validate_now=*/false);
        } else {
            cfg.experiment = active->experiment;
            pstchain::apply_experiment_defaults(cfg);
        }
        apply_flags(active->sub, flags, cfg);
        pstchain::validate(cfg);
        return pstchain::run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.field() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
