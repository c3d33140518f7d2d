#include "dqc/trajectories.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace dqc {

UnravelingOps prepare_unraveling(const ModelSpec& model, bool second_order) {
    model.validate();
    UnravelingOps ops;
    ops.h_nh = model.hamiltonian.dense();
    for (const auto& jump : model.jumps) {
        if (jump.rate == 0.0) continue;
        DenseMatrix l = jump.op.dense();
        DenseMatrix ldl = jump.rate * (l.adjoint() * l);
        ops.h_nh -= 0.5 * IM * ldl;
        ops.jumps.push_back(std::move(l));
        ops.weighted_ldl.push_back(std::move(ldl));
        ops.rates.push_back(jump.rate);
    }
    if (second_order) ops.h_nh_sq = ops.h_nh * ops.h_nh;
    return ops;
}

void step(TrajectoryState& state, const UnravelingOps& ops, const TrajectoryConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const size_t n_channels = ops.jumps.size();

    double dp = 0.0;
    // p_mu dp accumulated channel by channel; weights gamma_mu <psi|L^dag L|psi>.
    static thread_local std::vector<double> channel_weight;
    channel_weight.assign(n_channels, 0.0);
    for (size_t mu = 0; mu < n_channels; ++mu) {
        const double w = state.psi.dot(ops.weighted_ldl[mu] * state.psi).real();
        channel_weight[mu] = std::max(w, 0.0);
        dp += channel_weight[mu] * cfg.dt;
    }
    if (dp >= cfg.dp_max)
        throw StepSizeError("step: jump probability " + std::to_string(dp) +
                            " exceeds dp_max; decrease dt below " +
                            std::to_string(cfg.dt * cfg.dp_max / dp));

    if (n_channels > 0 && state.rng.uniform() < dp) {
        // Jump: channel mu drawn from p_mu = weight_mu / sum(weights).
        double total = 0.0;
        for (double w : channel_weight) total += w;
        double u = state.rng.uniform() * total;
        size_t mu = 0;
        for (; mu + 1 < n_channels; ++mu) {
            u -= channel_weight[mu];
            if (u <= 0.0) break;
        }
        state.psi = (ops.jumps[mu] * state.psi).eval();
        const double norm = state.psi.norm();
        if (norm == 0.0) throw NumericalError("step: jump annihilated the state");
        state.psi /= norm;
        state.jump_log.push_back({state.t + cfg.dt, static_cast<int>(mu)});
    } else {
        DenseVector next = state.psi - (IM * cfg.dt) * (ops.h_nh * state.psi);
        if (cfg.second_order) next -= (0.5 * cfg.dt * cfg.dt) * (ops.h_nh_sq * state.psi);
        state.psi = std::move(next);
        state.psi.normalize();
    }
    state.t += cfg.dt;
}

TrajectoryResult run_trajectory(const ModelSpec& model, const DenseVector& psi0,
                                const std::vector<double>& t_grid, uint64_t seed,
                                const TrajectoryConfig& cfg) {
    if (psi0.size() != model.space.total_dim)
        throw std::invalid_argument("run_trajectory: initial state dimension mismatch");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1])
            throw std::invalid_argument("run_trajectory: time grid must be non-decreasing");

    const UnravelingOps ops = prepare_unraveling(model, cfg.second_order);
    TrajectoryState state(psi0, Rng(seed));
    TrajectoryResult result;
    result.seed = seed;

    // Population monitor for the two topmost Fock levels of each factor.
    const auto& dims = model.space.factor_dims;
    auto top_level_population = [&](const DenseVector& psi) {
        double pop = 0.0;
        int stride = 1;
        for (int f = model.space.n_factors() - 1; f >= 0; --f) {
            const int d = dims[static_cast<size_t>(f)];
            if (d >= 4) {
                for (long idx = 0; idx < psi.size(); ++idx) {
                    const int level = (idx / stride) % d;
                    if (level >= d - 2) pop += std::norm(psi(idx));
                }
            }
            stride *= d;
        }
        return pop;
    };

    for (double t_target : t_grid) {
        while (state.t < t_target - 0.5 * cfg.dt) step(state, ops, cfg);
        result.samples.push_back({state.t, state.psi});
        if (top_level_population(state.psi) > 1e-3) result.cutoff_warning = true;
    }
    result.jump_log = std::move(state.jump_log);
    return result;
}

void parallel_for(long n, const std::function<void(long)>& fn, int n_threads) {
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = static_cast<int>(std::max<long>(1, std::min<long>(n_threads, n)));
    if (n_threads == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(n_threads));
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < n_threads; ++w)
        workers.emplace_back([&] {
            for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                if (failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& worker : workers) worker.join();
    if (error) std::rethrow_exception(error);
}

EnsembleResult ensemble_average(const ModelSpec& model, const DenseVector& psi0,
                                const std::vector<double>& t_grid, int n_trajectories,
                                uint64_t base_seed, const TrajectoryConfig& cfg,
                                const std::vector<NamedObservable>& observables, int n_threads) {
    if (n_trajectories < 1) throw std::invalid_argument("ensemble_average: need M >= 1");
    const int d = model.space.total_dim;
    const size_t n_times = t_grid.size();
    const size_t n_obs = observables.size();

    EnsembleResult result;
    result.n_trajectories = n_trajectories;
    result.times = t_grid;
    result.base_seed = base_seed;
    result.seeds.resize(static_cast<size_t>(n_trajectories));

    // Per-trajectory states kept so the reduction happens in index order
    // (bit-reproducible for a fixed M regardless of thread count).
    std::vector<std::vector<DenseVector>> states(static_cast<size_t>(n_trajectories));
    const UnravelingOps ops = prepare_unraveling(model, cfg.second_order);

    parallel_for(
        n_trajectories,
        [&](long m) {
            uint64_t sm = base_seed ^ (0x9e3779b97f4a7c15ULL * (uint64_t(m) + 1));
            const uint64_t seed = splitmix64(sm);
            result.seeds[static_cast<size_t>(m)] = seed;
            TrajectoryState state(psi0, Rng(seed));
            auto& snapshots = states[static_cast<size_t>(m)];
            snapshots.reserve(n_times);
            for (double t_target : t_grid) {
                while (state.t < t_target - 0.5 * cfg.dt) step(state, ops, cfg);
                snapshots.push_back(state.psi);
            }
        },
        n_threads);

    result.rho_mean.assign(n_times, DenseMatrix::Zero(d, d));
    std::vector<std::vector<double>> obs_values(n_obs);  // flattened [time * M + m]
    for (auto& v : obs_values) v.resize(n_times * static_cast<size_t>(n_trajectories));

    for (int m = 0; m < n_trajectories; ++m)
        for (size_t ti = 0; ti < n_times; ++ti) {
            const DenseVector& psi = states[static_cast<size_t>(m)][ti];
            result.rho_mean[ti].noalias() += psi * psi.adjoint();
            for (size_t o = 0; o < n_obs; ++o)
                obs_values[o][ti * n_trajectories + static_cast<size_t>(m)] =
                    psi.dot(observables[o].matrix * psi).real();
        }
    for (auto& rho : result.rho_mean) rho /= double(n_trajectories);

    for (size_t o = 0; o < n_obs; ++o) {
        ObservableSeries series;
        series.name = observables[o].name;
        series.mean.resize(static_cast<long>(n_times));
        series.std_error.resize(static_cast<long>(n_times));
        for (size_t ti = 0; ti < n_times; ++ti) {
            double mean = 0.0;
            for (int m = 0; m < n_trajectories; ++m)
                mean += obs_values[o][ti * n_trajectories + static_cast<size_t>(m)];
            mean /= n_trajectories;
            double var = 0.0;
            for (int m = 0; m < n_trajectories; ++m) {
                const double dv =
                    obs_values[o][ti * n_trajectories + static_cast<size_t>(m)] - mean;
                var += dv * dv;
            }
            series.mean(static_cast<long>(ti)) = mean;
            series.std_error(static_cast<long>(ti)) =
                n_trajectories > 1 ? std::sqrt(var / (double(n_trajectories) *
                                                      double(n_trajectories - 1)))
                                   : 0.0;
        }
        result.observables.push_back(std::move(series));
    }
    return result;
}

}  // namespace dqc
