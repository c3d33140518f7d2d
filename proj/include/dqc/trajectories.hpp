// Photon-counting (quantum-jump) unraveling: the first-order stochastic step,
// single trajectories sampled on a time grid, and ensemble averages.
#pragma once

#include "dqc/models.hpp"
#include "dqc/operators.hpp"

#include <functional>
#include <vector>

namespace dqc {

struct TrajectoryConfig {
    double dt = 1e-3;
    double dp_max = 0.05;       // step rejected above this jump probability
    bool second_order = false;  // opt-in second-order no-jump propagator
};

struct JumpEvent {
    double t;
    int channel;
};

struct TrajectoryState {
    DenseVector psi;
    double t = 0.0;
    Rng rng;
    std::vector<JumpEvent> jump_log;

    TrajectoryState(DenseVector psi0, uint64_t seed) : psi(std::move(psi0)), rng(seed) {
        psi.normalize();
    }
    TrajectoryState(DenseVector psi0, Rng stream) : psi(std::move(psi0)), rng(stream) {
        psi.normalize();
    }
};

/// Dense operators precomputed once per model for the stochastic evolution.
struct UnravelingOps {
    DenseMatrix h_nh;                     // H - (i/2) sum_mu gamma_mu L_mu^dag L_mu
    std::vector<DenseMatrix> jumps;       // L_mu
    std::vector<DenseMatrix> weighted_ldl;  // gamma_mu L_mu^dag L_mu
    std::vector<double> rates;
    DenseMatrix h_nh_sq;  // filled when a second-order step is requested
};

UnravelingOps prepare_unraveling(const ModelSpec& model, bool second_order = false);

/// One step of the paper's discrete scheme: jump with probability
/// dp = sum_mu gamma_mu <L^dag L> dt (channel drawn from p_mu), otherwise
/// non-Hermitian Euler update; the state is renormalized either way.
void step(TrajectoryState& state, const UnravelingOps& ops, const TrajectoryConfig& cfg);

struct TrajectorySample {
    double t;
    DenseVector psi;
};

struct TrajectoryResult {
    std::vector<TrajectorySample> samples;  // one per requested grid time
    std::vector<JumpEvent> jump_log;
    uint64_t seed = 0;
    bool cutoff_warning = false;  // top two Fock levels exceeded 1e-3 population
};

TrajectoryResult run_trajectory(const ModelSpec& model, const DenseVector& psi0,
                                const std::vector<double>& t_grid, uint64_t seed,
                                const TrajectoryConfig& cfg);

struct ObservableSeries {
    std::string name;
    RealVector mean;
    RealVector std_error;
};

struct EnsembleResult {
    int n_trajectories = 0;
    std::vector<double> times;
    std::vector<DenseMatrix> rho_mean;  // (1/M) sum |psi><psi| per grid time
    std::vector<ObservableSeries> observables;
    std::vector<uint64_t> seeds;
    uint64_t base_seed = 0;
};

struct NamedObservable {
    std::string name;
    DenseMatrix matrix;
};

/// M independent trajectories with per-trajectory RNG streams derived from
/// (base_seed, index); reduction order is fixed so serial runs are
/// bit-reproducible.
EnsembleResult ensemble_average(const ModelSpec& model, const DenseVector& psi0,
                                const std::vector<double>& t_grid, int n_trajectories,
                                uint64_t base_seed, const TrajectoryConfig& cfg,
                                const std::vector<NamedObservable>& observables = {},
                                int n_threads = 0);

/// Shared thread-pool helper: invokes fn(i) for i in [0, n) on up to n_threads.
void parallel_for(long n, const std::function<void(long)>& fn, int n_threads = 0);

}  // namespace dqc
