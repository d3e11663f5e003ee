#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pstchain/analysis.hpp"

namespace pstchain {

enum class Experiment {
    Couplings,
    Evolve,
    SteadyState,
    SupportFraction,
    FidelitySurface,
    EigenReport,
    DeltaFit,
};

std::string experiment_name(Experiment e);
std::optional<Experiment> experiment_from_name(const std::string& name);

struct InjectionSpec {
    enum class Kind { End, Centre, Site };
    Kind kind = Kind::End;
    int site = 1; // only for Kind::Site, 1-based

    int resolve(int n_sites) const;
    std::string to_string() const;
};

// Invalid configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    Experiment experiment = Experiment::Couplings;
    std::vector<int> n_values;
    double j_max = 1.0;
    CouplingLaw law = CouplingLaw::Pst;
    std::vector<double> e_values;
    int n_realizations = 100;
    std::optional<std::uint64_t> master_seed;
    InjectionSpec injection;
    SteadyStateProtocol window; // per-experiment defaults, see apply_experiment_defaults
    FidelityWindowParams fidelity_window;
    std::optional<std::pair<int, int>> fit_range;
    double threshold = 0.95;
    int top_k = 3;
    int workers = 1;
    std::string out_dir = ".";
};

// Evolve samples [0, 2 t_M] with 201 points by default; the steady-state
// protocols sample [5 t_M, 7 t_M] with 100.
void apply_experiment_defaults(RunConfig& cfg);

// Parse a JSON config document (the same schema run() writes as a manifest,
// so a manifest feeds back as a config). Unknown keys are errors. Set
// validate_now=false when flag overrides will be applied before validate().
RunConfig parse_config(const std::string& json_text,
                       std::optional<Experiment> experiment_override = {},
                       bool validate_now = true);

void validate(const RunConfig& cfg);

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
};

// Header line, then "# units: ..." and "# manifest: ..." comment lines, then
// rows with 17 significant digits (round-trip exact for doubles).
void write_csv(const ResultTable& table, std::ostream& os, const std::string& manifest_ref);

std::string manifest_json(const RunConfig& cfg, const std::vector<std::string>& outputs,
                          const std::string& extra_json = {});

// Executes the experiment, writes CSV outputs plus manifest.json under
// cfg.out_dir (or the single table to stdout when out_dir is "-"), and
// returns the process exit status. Identical configs produce identical bytes
// regardless of worker count.
int run(const RunConfig& cfg);

} // namespace pstchain
