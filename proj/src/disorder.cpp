#include "pstchain/disorder.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "pstchain/numeric.hpp"

namespace pstchain {

DisorderRealization sample_disorder(const EnsembleSpec& spec, int index) {
    if (index < 0 || index >= spec.n_realizations)
        throw std::out_of_range("index: realization index " + std::to_string(index) +
                                " outside [0, " + std::to_string(spec.n_realizations) + ")");
    DisorderRealization r;
    r.strength = spec.strength;
    r.seed = spec.master_seed;
    r.index = index;
    const int n = spec.chain.n_sites();
    r.energies.resize(n);
    const double scale = spec.strength * spec.chain.j_max();
    SplitMix64 rng = realization_stream(spec.master_seed, static_cast<std::uint64_t>(index));
    for (int i = 0; i < n; ++i) r.energies[i] = scale * rng.next_unit();
    return r;
}

Hamiltonian build_hamiltonian(const ChainSpec& spec, const DisorderRealization& disorder) {
    return build_hamiltonian(spec, std::span<const double>(disorder.energies));
}

EnsembleResult run_ensemble(const EnsembleSpec& spec, const Observable& observable, int workers) {
    const int n = spec.n_realizations;
    if (n < 1) throw std::invalid_argument("n_realizations: must be >= 1");

    EnsembleResult result;
    result.per_realization.assign(n, {});
    std::vector<std::exception_ptr> failures(n);

    std::atomic<int> cursor{0};
    auto work = [&]() {
        for (;;) {
            const int i = cursor.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            try {
                result.per_realization[i] = observable(spec.chain, sample_disorder(spec, i));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < n; ++i) {
        if (failures[i]) {
            try {
                std::rethrow_exception(failures[i]);
            } catch (const std::exception& e) {
                throw EnsembleError(i, e.what());
            }
        }
    }

    const std::size_t width = result.per_realization.front().size();
    for (const auto& row : result.per_realization)
        if (row.size() != width)
            throw std::invalid_argument("observable: inconsistent result lengths across realizations");

    result.mean.resize(width);
    result.std_error.resize(width);
    std::vector<double> column(n);
    for (std::size_t c = 0; c < width; ++c) {
        for (int i = 0; i < n; ++i) column[i] = result.per_realization[i][c];
        const MeanStdError ms = mean_and_std_error(column);
        result.mean[c] = ms.mean;
        result.std_error[c] = ms.std_error;
    }
    return result;
}

} // namespace pstchain
