// Spectral statistics of quantum trajectories: projection of trajectory
// snapshots onto the Liouvillian eigenbasis, weight-cutoff selection of the
// relevant eigenvalues, and level statistics on the selected sets.
#pragma once

#include "dqc/liouvillian.hpp"
#include "dqc/spectral_stats.hpp"
#include "dqc/trajectories.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace dqc {

struct WeightedSpectrum {
    int trajectory_id = 0;
    double t = 0.0;
    DenseVector weights;  // c_{m,j}, aligned with the spectrum's eigenvalue index
};

/// c_{m,j} = Tr[sigma_j^dag |psi><psi|].
WeightedSpectrum trajectory_weights(const LiouvillianSpectrum& spec, const DenseVector& psi,
                                    int trajectory_id = 0, double t = 0.0);

struct CminRule {
    int k = 3;
    double c_min = 0.0;
    double mean_c = 0.0;   // C = integral |c| p(|c|) d|c|
    double sigma_c = 0.0;  // second central moment of p(|c|), as the selection rule uses it
    Histogram weight_histogram;  // log10 |c| binned on [1e-12, 1]
};

/// c_min = max(C - k * sigma, 0) from the pooled distribution of |c_{m,j}|.
CminRule resolve_cmin(const std::vector<WeightedSpectrum>& weight_sets, int k = 3);

struct RelevantSet {
    std::vector<int> indices;
    std::vector<cplx> eigenvalues;
    int n_lambda = 0;
};

RelevantSet select_relevant(const WeightedSpectrum& ws, const DenseVector& spectrum_eigenvalues,
                            double c_min);

struct SsqtConfig {
    double t_snapshot = 0.0;
    int n_trajectories = 1;
    int k = 3;
    double dt = 1e-3;
    double dp_max = 0.05;
    uint64_t base_seed = 1;
    bool apply_bulk_filter = true;
    double bulk_epsilon = -1.0;  // < 0: per-set default (10 x median |Im| NN spacing)
    bool pooled = false;         // pool spacings across trajectories instead of averaging
    int min_set_for_cos = 100;   // below this N_lambda, -<cos theta> is reported as 0
    std::optional<double> fixed_c_min;  // bypass the C - k sigma rule
};

struct SsqtTrajectoryRecord {
    int trajectory_id = 0;
    int n_lambda = 0;
    double mean_r = std::numeric_limits<double>::quiet_NaN();
    double neg_mean_cos_theta = 0.0;
    bool indicator_valid = false;  // enough filtered eigenvalues for ratios
};

struct SsqtResult {
    double t = 0.0;
    double c_min = 0.0;
    int k = 3;
    double mean_n_lambda = 0.0, se_n_lambda = 0.0;
    double mean_r = 0.0, se_r = 0.0;
    double neg_mean_cos_theta = 0.0, se_neg_cos = 0.0;
    int n_indicator_trajectories = 0;  // trajectories entering the r average
    std::vector<SsqtTrajectoryRecord> per_trajectory;
    std::vector<uint64_t> seeds;
    Histogram pooled_spacing_histogram;  // unfolded spacings pooled over trajectories
    CminRule cmin_rule;
};

/// Evolves M trajectories from psi0 to t_snapshot, selects each trajectory's
/// relevant eigenvalues and reports the across-trajectory statistics of the
/// complex-spacing-ratio indicators and of N_lambda.
SsqtResult ssqt_statistics(const ModelSpec& model, const LiouvillianSpectrum& spec,
                           const DenseVector& psi0, const SsqtConfig& cfg, int n_threads = 0);

enum class InitialStateFamily { Coherent, Fock, Random };

/// Initial states per the phase-diagram conventions: identical coherent states
/// |alpha> x ... with alpha = 3 sqrt(F / (Delta - i gamma)); per-trajectory
/// random Fock levels in [0, 5]; or Haar-ish random vectors.
DenseVector make_initial_state(InitialStateFamily family, const HilbertSpace& space,
                               const BoseHubbardParams& params, Rng& rng);

struct NLambdaSeries {
    std::vector<double> times;
    RealVector mean_n_lambda;
    RealVector se_n_lambda;
    double c_min = 0.0;
};

/// N_lambda(t) averaged over trajectories on a time grid. c_min is resolved
/// from the weights at resolve_time (default: the final grid time) unless fixed.
NLambdaSeries n_lambda_series(const ModelSpec& model, const LiouvillianSpectrum& spec,
                              const std::vector<DenseVector>& initial_states,
                              const std::vector<double>& t_grid, const SsqtConfig& cfg,
                              int n_threads = 0);

}  // namespace dqc
