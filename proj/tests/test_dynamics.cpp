#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"

using namespace pstchain;
using namespace pstchain::testing;

TEST_CASE("mirroring time") {
    CHECK(mirroring_time(ChainSpec(4)) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(mirroring_time(ChainSpec(2)) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(mirroring_time(ChainSpec(100)) == doctest::Approx(25 * std::numbers::pi).epsilon(1e-15));
    CHECK(revival_period(ChainSpec(100)) ==
          doctest::Approx(50 * std::numbers::pi).epsilon(1e-15));
    CHECK_THROWS_AS(mirroring_time(ChainSpec(4, 1.0, CouplingLaw::Uniform)),
                    std::invalid_argument);
}

TEST_CASE("two-site oscillation has a closed form") {
    const EigenSystem eig = diagonalize(build_hamiltonian(ChainSpec(2)));
    const StateVector psi0 = StateVector::site_basis(2, 1);

    // c(t) = (cos t, -i sin t) up to a global phase.
    for (double t : {0.3, 1.1, std::numbers::pi / 2}) {
        const StateVector psi = evolve(psi0, eig, t);
        StateVector expected;
        expected.amplitudes = {complexd{std::cos(t), 0}, complexd{0, -std::sin(t)}};
        CHECK(fidelity(psi, expected) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const StateVector at_tm = evolve(psi0, eig, std::numbers::pi / 2);
    CHECK(std::norm(at_tm.amplitudes[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigenstates are stationary") {
    const ChainSpec spec(12);
    const Hamiltonian h = build_hamiltonian(spec, disorder_for(spec, 1.0, 21));
    const EigenSystem eig = diagonalize(h);
    StateVector phi;
    phi.amplitudes.resize(12);
    for (int i = 0; i < 12; ++i) phi.amplitudes[i] = eig.component(i, 5);
    const StateVector evolved = evolve(phi, eig, 3.7);
    const auto p0 = site_probabilities(phi);
    const auto p1 = site_probabilities(evolved);
    for (int i = 0; i < 12; ++i) CHECK(std::abs(p0[i] - p1[i]) <= 1e-12);
    CHECK(fidelity(evolved, phi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perfect transfer of an end excitation") {
    const ChainSpec spec(50);
    const EigenSystem eig = diagonalize(build_hamiltonian(spec));
    const StateVector psi = evolve(StateVector::site_basis(50, 1), eig, mirroring_time(spec));
    CHECK(std::norm(psi.amplitudes[49]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("evolution at t=0 is the identity") {
    const ChainSpec spec(100);
    const EigenSystem eig = diagonalize(build_hamiltonian(spec, disorder_for(spec, 1.0, 31)));
    const StateVector s = random_state(100, 32);
    CHECK(max_component_diff(evolve(s, eig, 0.0), s) <= 1e-14);
}

TEST_CASE("fidelity basics") {
    const StateVector a = StateVector::site_basis(6, 2);
    const StateVector b = StateVector::site_basis(6, 5);
    CHECK(fidelity(a, a) == 1.0);
    CHECK(fidelity(a, b) == 0.0);
    StateVector mix;
    mix.amplitudes.assign(6, complexd{0, 0});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    mix.amplitudes[1] = inv_sqrt2;
    mix.amplitudes[4] = inv_sqrt2;
    CHECK(fidelity(mix, a) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(fidelity(a, StateVector::site_basis(5, 1)), std::invalid_argument);
}

TEST_CASE("every clean chain mirrors at t_M and revives at t_S") {
    for (int n : {2, 3, 10, 51, 100}) {
        const ChainSpec spec(n);
        const EigenSystem eig = diagonalize(build_hamiltonian(spec));
        const double tm = mirroring_time(spec);
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector s = random_state(n, 5000 + 100 * n + trial);
            CHECK(mirror_fidelity_at(s, eig, tm) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(fidelity(evolve(s, eig, 2 * tm), s) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("zero-strength disorder reproduces the clean dynamics") {
    const ChainSpec spec(20);
    const DisorderRealization none = disorder_for(spec, 0.0, 77);
    const EigenSystem clean = diagonalize(build_hamiltonian(spec));
    const EigenSystem zero = diagonalize(build_hamiltonian(spec, none));
    const StateVector s = random_state(20, 78);
    const double tm = mirroring_time(spec);
    CHECK(max_component_diff(evolve(s, clean, tm), evolve(s, zero, tm)) <= 1e-12);
}

TEST_CASE("unitarity, energy conservation, composition") {
    const ChainSpec spec(30);
    const Hamiltonian h = build_hamiltonian(spec, disorder_for(spec, 1.0, 41));
    const EigenSystem eig = diagonalize(h);
    const StateVector s = random_state(30, 42);
    const double tm = mirroring_time(spec);
    const double e0 = energy_expectation(h, s);
    const double h_scale = std::max(std::abs(eig.eigenvalues.front()),
                                    std::abs(eig.eigenvalues.back()));

    for (double f : {0.13, 1.0, 3.7, 10.0}) {
        const StateVector evolved = evolve(s, eig, f * tm);
        CHECK(std::abs(evolved.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(energy_expectation(h, evolved) - e0) <= 1e-10 * h_scale);
    }

    const StateVector two_step = evolve(evolve(s, eig, 1.3), eig, 2.4);
    const StateVector one_step = evolve(s, eig, 3.7);
    CHECK(max_component_diff(two_step, one_step) <= 1e-11);
}

TEST_CASE("overlap scan agrees with explicit evolution") {
    const ChainSpec spec(14);
    const EigenSystem eig = diagonalize(build_hamiltonian(spec, disorder_for(spec, 0.8, 55)));
    const StateVector psi0 = random_state(14, 56);
    const StateVector target = random_state(14, 57);
    const OverlapScan scan(psi0, target, eig);
    for (double t : {0.0, 0.9, 4.2, 17.0})
        CHECK(std::abs(scan.fidelity_at(t) - fidelity(evolve(psi0, eig, t), target)) <= 1e-12);
}

TEST_CASE("window maximisation finds the transfer peak") {
    const ChainSpec spec(20);
    const EigenSystem eig = diagonalize(build_hamiltonian(spec));
    const double tm = mirroring_time(spec);
    const StateVector from = StateVector::site_basis(20, 1);
    const StateVector to = StateVector::site_basis(20, 20);

    const Schedule window{0.0, 4.5 * tm, 9000};
    const WindowMax wm = max_fidelity_over_window(from, to, eig, window);
    CHECK(wm.f_max == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(wm.t_at_max - tm) <= (window.t_end - window.t_start) / (window.n_samples - 1));

    // The initial sample already achieves the maximum for target == state0.
    const WindowMax self = max_fidelity_over_window(from, from, eig, Schedule{0.0, tm, 100});
    CHECK(self.f_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(self.t_at_max == 0.0);
}

TEST_CASE("window maximisation matches a dense scan under disorder") {
    const ChainSpec spec(10);
    const EigenSystem eig = diagonalize(build_hamiltonian(spec, disorder_for(spec, 1.0, 4242)));
    const double tm = mirroring_time(spec);
    const StateVector from = StateVector::site_basis(10, 1);
    const StateVector to = StateVector::site_basis(10, 10);

    const Schedule window{0.0, 4.5 * tm, 9000};
    const WindowMax wm = max_fidelity_over_window(from, to, eig, window);

    // Independent oracle: a 10x denser plain grid scan.
    const OverlapScan scan(from, to, eig);
    double dense_best = 0.0;
    const Schedule dense{0.0, 4.5 * tm, 90000};
    for (int j = 0; j < dense.n_samples; ++j)
        dense_best = std::max(dense_best, scan.fidelity_at(dense.at(j)));

    CHECK(wm.f_max >= dense_best - 1e-4);
    CHECK(wm.f_max <= dense_best + 1e-4);

    // Structural guarantee: never below the coarse grid.
    double coarse_best = 0.0;
    for (int j = 0; j < window.n_samples; ++j)
        coarse_best = std::max(coarse_best, scan.fidelity_at(window.at(j)));
    CHECK(wm.f_max >= coarse_best);
}

TEST_CASE("stepped integrator agrees with the spectral path") {
    const ChainSpec spec(10);
    const double tm = mirroring_time(spec);
    const StateVector psi0 = StateVector::site_basis(10, 1);

    SUBCASE("t = 0 returns the input") {
        const Hamiltonian h = build_hamiltonian(spec);
        const SteppedEvolution r = evolve_stepped_oracle(psi0, h, 0.0, 0.1);
        CHECK(max_component_diff(r.state, psi0) == 0.0);
    }

    SUBCASE("clean chain, one mirroring time") {
        const Hamiltonian h = build_hamiltonian(spec);
        const EigenSystem eig = diagonalize(h);
        const SteppedEvolution r = evolve_stepped_oracle(psi0, h, tm, tm / 1e5);
        CHECK(max_component_diff(r.state, evolve(psi0, eig, tm)) <= 1e-6);
        CHECK(r.norm_drift <= 1e-8);
    }

    SUBCASE("disordered chain, five mirroring times") {
        const Hamiltonian h = build_hamiltonian(spec, disorder_for(spec, 1.0, 1234));
        const EigenSystem eig = diagonalize(h);
        const SteppedEvolution r = evolve_stepped_oracle(psi0, h, 5 * tm, tm / 2e4);
        const auto p_stepped = site_probabilities(r.state);
        const auto p_spectral = site_probabilities(evolve(psi0, eig, 5 * tm));
        for (int i = 0; i < 10; ++i) CHECK(std::abs(p_stepped[i] - p_spectral[i]) <= 1e-5);
    }

    SUBCASE("dt validation") {
        const Hamiltonian h = build_hamiltonian(spec);
        CHECK_THROWS_AS(evolve_stepped_oracle(psi0, h, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(evolve_stepped_oracle(psi0, h, 1.0, 2.0), std::invalid_argument);
    }
}
