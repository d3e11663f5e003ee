#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pstchain/analysis.hpp"
#include "pstchain/version.hpp"

namespace py = pybind11;
using namespace pstchain;

namespace {

StateVector state_from_array(const py::array_t<complexd>& arr) {
    if (arr.ndim() != 1) throw std::invalid_argument("state: expected a 1-d array");
    StateVector s;
    s.amplitudes.assign(arr.data(), arr.data() + arr.shape(0));
    return s;
}

py::array_t<complexd> state_to_array(const StateVector& s) {
    py::array_t<complexd> out(s.size());
    std::copy(s.amplitudes.begin(), s.amplitudes.end(), out.mutable_data());
    return out;
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

// Column-major n*n buffer -> numpy [site, mode] array.
py::array_t<double> columns_to_array(const std::vector<double>& data, int n) {
    py::array_t<double> out({n, n});
    auto r = out.mutable_unchecked<2>();
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) r(i, m) = data[static_cast<std::size_t>(m) * n + i];
    return out;
}

CouplingLaw law_from_string(const std::string& law) {
    if (law == "pst") return CouplingLaw::Pst;
    if (law == "uniform") return CouplingLaw::Uniform;
    throw std::invalid_argument("law: expected 'pst' or 'uniform'");
}

Injection injection_from_string(const std::string& inj) {
    if (inj == "end") return Injection::End;
    if (inj == "centre") return Injection::Centre;
    throw std::invalid_argument("injection: expected 'end' or 'centre'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Single-excitation dynamics and Anderson-localisation diagnostics for "
              "engineered spin chains";
    m.attr("__version__") = kVersion;
    m.attr("RNG_ALGORITHM") = kRngAlgorithm;

    py::class_<ChainSpec>(m, "ChainSpec")
        .def(py::init([](int n_sites, double j_max, const std::string& law) {
                 return ChainSpec(n_sites, j_max, law_from_string(law));
             }),
             py::arg("n_sites"), py::arg("j_max") = 1.0, py::arg("law") = "pst")
        .def_property_readonly("n_sites", &ChainSpec::n_sites)
        .def_property_readonly("j_max", &ChainSpec::j_max)
        .def_property_readonly("j0", &ChainSpec::j0)
        .def_property_readonly("law", [](const ChainSpec& s) {
            return s.law() == CouplingLaw::Pst ? "pst" : "uniform";
        });

    py::class_<Hamiltonian>(m, "Hamiltonian")
        .def_property_readonly("diagonal",
                               [](const Hamiltonian& h) { return vector_to_array(h.diagonal); })
        .def_property_readonly("off_diagonal",
                               [](const Hamiltonian& h) { return vector_to_array(h.off_diagonal); })
        .def_property_readonly("n_sites", &Hamiltonian::size);

    py::class_<EigenSystem>(m, "EigenSystem")
        .def_property_readonly("eigenvalues",
                               [](const EigenSystem& e) { return vector_to_array(e.eigenvalues); })
        .def_property_readonly("eigenvectors", [](const EigenSystem& e) {
            return columns_to_array(e.eigenvectors, e.n);
        });

    py::class_<DisorderRealization>(m, "DisorderRealization")
        .def_property_readonly("energies",
                               [](const DisorderRealization& r) { return vector_to_array(r.energies); })
        .def_readonly("strength", &DisorderRealization::strength)
        .def_readonly("seed", &DisorderRealization::seed)
        .def_readonly("index", &DisorderRealization::index);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def(py::init([](const ChainSpec& chain, double strength, int n_realizations,
                         std::uint64_t master_seed) {
                 return EnsembleSpec{chain, strength, n_realizations, master_seed};
             }),
             py::arg("chain"), py::arg("strength"), py::arg("n_realizations"),
             py::arg("master_seed"))
        .def_readonly("strength", &EnsembleSpec::strength)
        .def_readonly("n_realizations", &EnsembleSpec::n_realizations)
        .def_readonly("master_seed", &EnsembleSpec::master_seed);

    m.def("pst_couplings", [](const ChainSpec& s) { return vector_to_array(pst_couplings(s)); });
    m.def("uniform_couplings",
          [](const ChainSpec& s) { return vector_to_array(uniform_couplings(s)); });

    m.def(
        "build_hamiltonian",
        [](const ChainSpec& spec, py::object energies) {
            if (energies.is_none()) return build_hamiltonian(spec);
            const auto arr = energies.cast<py::array_t<double>>();
            return build_hamiltonian(
                spec, std::span<const double>(arr.data(), static_cast<std::size_t>(arr.size())));
        },
        py::arg("spec"), py::arg("energies") = py::none());

    m.def("site_basis", [](int n_sites, int site) {
        return state_to_array(StateVector::site_basis(n_sites, site));
    }, py::arg("n_sites"), py::arg("site"), "Excitation on one site (1-based).");

    m.def("mirror", [](const py::array_t<complexd>& s) {
        return state_to_array(mirror(state_from_array(s)));
    });

    m.def("mirror_parity_split", [](const py::array_t<complexd>& s) {
        const ParitySplit split = mirror_parity_split(state_from_array(s));
        return py::make_tuple(state_to_array(split.even), state_to_array(split.odd));
    });

    m.def("diagonalize", &diagonalize, py::call_guard<py::gil_scoped_release>());

    m.def("project", [](const py::array_t<complexd>& psi, const EigenSystem& eig) {
        const auto a = project(state_from_array(psi), eig);
        py::array_t<complexd> out(static_cast<py::ssize_t>(a.size()));
        std::copy(a.begin(), a.end(), out.mutable_data());
        return out;
    });

    m.def("mirroring_time", &mirroring_time);
    m.def("revival_period", &revival_period);

    m.def("evolve", [](const py::array_t<complexd>& s, const EigenSystem& eig, double t) {
        return state_to_array(evolve(state_from_array(s), eig, t));
    });

    m.def("fidelity", [](const py::array_t<complexd>& psi, const py::array_t<complexd>& target) {
        return fidelity(state_from_array(psi), state_from_array(target));
    });

    m.def("mirror_fidelity_at", [](const py::array_t<complexd>& s, const EigenSystem& eig,
                                   double t) {
        return mirror_fidelity_at(state_from_array(s), eig, t);
    });

    m.def(
        "max_fidelity_over_window",
        [](const py::array_t<complexd>& s, const py::array_t<complexd>& target,
           const EigenSystem& eig, double t_start, double t_end, int n_samples) {
            const WindowMax wm = max_fidelity_over_window(
                state_from_array(s), state_from_array(target), eig,
                Schedule{t_start, t_end, n_samples});
            return py::make_tuple(wm.f_max, wm.t_at_max);
        },
        py::arg("state0"), py::arg("target"), py::arg("eig"), py::arg("t_start"),
        py::arg("t_end"), py::arg("n_samples"));

    m.def(
        "evolve_stepped",
        [](const py::array_t<complexd>& s, const Hamiltonian& h, double t, double dt) {
            const SteppedEvolution r = evolve_stepped_oracle(state_from_array(s), h, t, dt);
            return py::make_tuple(state_to_array(r.state), r.norm_drift);
        },
        py::arg("state0"), py::arg("h"), py::arg("t"), py::arg("dt"));

    m.def("sample_disorder", &sample_disorder, py::arg("spec"), py::arg("index"));

    m.def(
        "steady_state_profile",
        [](const ChainSpec& chain, const DisorderRealization& r, int site, double t_start_tm,
           double t_end_tm, int n_samples) {
            std::vector<double> p;
            {
                py::gil_scoped_release release;
                p = steady_state_profile(chain, r, site,
                                         SteadyStateProtocol{t_start_tm, t_end_tm, n_samples})
                        .probabilities;
            }
            return vector_to_array(p);
        },
        py::arg("chain"), py::arg("realization"), py::arg("injection_site"),
        py::arg("t_start_tm") = 5.0, py::arg("t_end_tm") = 7.0, py::arg("n_samples") = 100);

    m.def(
        "ensemble_steady_state_profile",
        [](const EnsembleSpec& ens, int site, int workers) {
            std::vector<double> p;
            {
                py::gil_scoped_release release;
                p = ensemble_steady_state_profile(ens, site, {}, workers).probabilities;
            }
            return vector_to_array(p);
        },
        py::arg("ensemble"), py::arg("injection_site"), py::arg("workers") = 1);

    m.def("critical_line", [](int n_sites, const std::string& inj) {
        return vector_to_array(critical_line(n_sites, injection_from_string(inj)));
    });

    m.def(
        "fit_delta",
        [](const py::array_t<double>& probabilities, int injection_site, int fit_lo, int fit_hi) {
            OccupationProfile profile;
            profile.probabilities.assign(probabilities.data(),
                                         probabilities.data() + probabilities.shape(0));
            profile.injection_site = injection_site;
            const LocalisationVerdict v = fit_delta(profile, fit_lo, fit_hi);
            py::dict out;
            out["delta"] = v.delta;
            out["alpha"] = v.alpha;
            out["fit_lo"] = v.fit_lo;
            out["fit_hi"] = v.fit_hi;
            out["localised"] = v.localised;
            out["rms_log_residual"] = v.rms_log_residual;
            return out;
        },
        py::arg("probabilities"), py::arg("injection_site"), py::arg("fit_lo"), py::arg("fit_hi"));

    m.def(
        "support_fraction",
        [](const EnsembleSpec& ens, int site, double threshold, int workers) {
            py::gil_scoped_release release;
            return support_fraction(ens, site, threshold, {}, workers);
        },
        py::arg("ensemble"), py::arg("injection_site"), py::arg("threshold") = 0.95,
        py::arg("workers") = 1);

    m.def("eigenstate_profiles", [](const EigenSystem& eig) {
        return columns_to_array(eigenstate_profiles(eig), eig.n);
    });

    m.def("max_site_occupancy",
          [](const EigenSystem& eig) { return vector_to_array(max_site_occupancy(eig)); });

    m.def(
        "rho_bar",
        [](const EnsembleSpec& ens, int workers) {
            std::vector<double> rho;
            {
                py::gil_scoped_release release;
                rho = rho_bar(ens, workers);
            }
            return vector_to_array(rho);
        },
        py::arg("ensemble"), py::arg("workers") = 1);

    m.def(
        "injected_state_report",
        [](const EigenSystem& eig, int site, int k) {
            const InjectedStateReport r = injected_state_report(eig, site, k);
            py::list modes;
            for (const InjectedMode& mode : r.top_modes) {
                py::dict d;
                d["mode_index"] = mode.mode_index;
                d["weight"] = mode.weight;
                d["energy"] = mode.energy;
                modes.append(d);
            }
            py::dict out;
            out["top_modes"] = modes;
            out["energy_expectation"] = r.energy_expectation;
            return out;
        },
        py::arg("eig"), py::arg("injection_site"), py::arg("k") = 3);

    m.def(
        "fidelity_surface",
        [](const std::vector<int>& n_values, const std::vector<double>& e_values,
           int n_realizations, std::uint64_t master_seed, double j_max, int workers) {
            std::vector<FidelityCell> cells;
            {
                py::gil_scoped_release release;
                cells = fidelity_surface(n_values, e_values, n_realizations, master_seed, j_max,
                                         {}, workers);
            }
            py::list out;
            for (const FidelityCell& c : cells) {
                py::dict d;
                d["N"] = c.n_sites;
                d["E"] = c.strength;
                d["F_tM_mean"] = c.f_tm_mean;
                d["F_tM_stderr"] = c.f_tm_std_error;
                d["F_max_mean"] = c.f_max_mean;
                d["F_max_stderr"] = c.f_max_std_error;
                d["t_at_max_mean"] = c.t_at_max_mean;
                out.append(d);
            }
            return out;
        },
        py::arg("n_values"), py::arg("e_values"), py::arg("n_realizations"),
        py::arg("master_seed"), py::arg("j_max") = 1.0, py::arg("workers") = 1);
}
