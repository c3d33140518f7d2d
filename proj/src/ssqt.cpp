#include "dqc/ssqt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dqc {

WeightedSpectrum trajectory_weights(const LiouvillianSpectrum& spec, const DenseVector& psi,
                                    int trajectory_id, double t) {
    if (psi.size() != spec.space().total_dim)
        throw std::invalid_argument("trajectory_weights: state dimension mismatch");
    return {trajectory_id, t, spec.weights_of_state(psi)};
}

CminRule resolve_cmin(const std::vector<WeightedSpectrum>& weight_sets, int k) {
    if (weight_sets.empty()) throw std::invalid_argument("resolve_cmin: no weight sets");
    if (k < 0) throw std::invalid_argument("resolve_cmin: k must be >= 0");

    std::vector<double> magnitudes;
    size_t total = 0;
    for (const auto& ws : weight_sets) total += static_cast<size_t>(ws.weights.size());
    magnitudes.reserve(total);
    std::vector<double> log_magnitudes;
    log_magnitudes.reserve(total);
    for (const auto& ws : weight_sets)
        for (long j = 0; j < ws.weights.size(); ++j) {
            const double c = std::abs(ws.weights(j));
            magnitudes.push_back(c);
            log_magnitudes.push_back(std::log10(std::max(c, 1e-300)));
        }

    CminRule rule;
    rule.k = k;
    const double n = double(magnitudes.size());
    rule.mean_c = std::accumulate(magnitudes.begin(), magnitudes.end(), 0.0) / n;
    double var = 0.0;
    for (double c : magnitudes) var += (c - rule.mean_c) * (c - rule.mean_c);
    // sigma here is the second central moment of p(|c|), matching the printed
    // selection rule c_min = C - k sigma (its square root would floor the rule
    // at zero for every broad distribution).
    rule.sigma_c = var / n;
    rule.c_min = std::max(rule.mean_c - double(k) * rule.sigma_c, 0.0);
    rule.weight_histogram = make_histogram(log_magnitudes, 48, -12.0, 0.0);
    return rule;
}

RelevantSet select_relevant(const WeightedSpectrum& ws, const DenseVector& spectrum_eigenvalues,
                            double c_min) {
    if (ws.weights.size() != spectrum_eigenvalues.size())
        throw std::invalid_argument("select_relevant: weight/eigenvalue size mismatch");
    RelevantSet set;
    for (long j = 0; j < ws.weights.size(); ++j)
        if (std::abs(ws.weights(j)) > c_min) {
            set.indices.push_back(static_cast<int>(j));
            set.eigenvalues.push_back(spectrum_eigenvalues(j));
        }
    set.n_lambda = static_cast<int>(set.indices.size());
    return set;
}

namespace {

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    const double n = double(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / (n * (n - 1.0)))};
}

struct SetIndicators {
    double mean_r = std::numeric_limits<double>::quiet_NaN();
    double neg_cos = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
    std::vector<double> unfolded;
};

/// Bulk filter + ratio statistics + unfolded spacings on one relevant set.
SetIndicators analyze_set(const std::vector<cplx>& eigenvalues, const SsqtConfig& cfg) {
    SetIndicators out;
    std::vector<cplx> pts(eigenvalues);
    if (cfg.apply_bulk_filter && pts.size() >= 3) {
        const double eps =
            cfg.bulk_epsilon >= 0.0 ? cfg.bulk_epsilon : default_bulk_epsilon(pts);
        auto filtered = bulk_filter(pts, eps);
        if (filtered.size() >= 3) pts = std::move(filtered);
    }
    if (pts.size() < 3) return out;
    const auto ratios = complex_spacing_ratios(pts);
    const auto summary = summarize(ratios);
    out.mean_r = summary.mean_r;
    out.neg_cos = summary.neg_mean_cos_theta;
    out.valid = true;
    if (pts.size() >= 3) {
        auto unfolded = unfold_complex(pts);
        out.unfolded = std::move(unfolded.unfolded);
    }
    return out;
}

}  // namespace

SsqtResult ssqt_statistics(const ModelSpec& model, const LiouvillianSpectrum& spec,
                           const DenseVector& psi0, const SsqtConfig& cfg, int n_threads) {
    if (cfg.n_trajectories < 1) throw std::invalid_argument("ssqt_statistics: need M >= 1");
    TrajectoryConfig tcfg;
    tcfg.dt = cfg.dt;
    tcfg.dp_max = cfg.dp_max;

    // Evolve all trajectories to the snapshot, then project in one batched solve.
    const int m_count = cfg.n_trajectories;
    const long d2 = spec.dim();
    DenseMatrix snapshot_rhos(d2, m_count);
    std::vector<uint64_t> seeds(static_cast<size_t>(m_count));
    const UnravelingOps ops = prepare_unraveling(model, tcfg.second_order);

    parallel_for(
        m_count,
        [&](long m) {
            uint64_t sm = cfg.base_seed ^ (0x9e3779b97f4a7c15ULL * (uint64_t(m) + 1));
            const uint64_t seed = splitmix64(sm);
            seeds[static_cast<size_t>(m)] = seed;
            TrajectoryState state(psi0, Rng(seed));
            while (state.t < cfg.t_snapshot - 0.5 * tcfg.dt) step(state, ops, tcfg);
            DenseMatrix rho = state.psi * state.psi.adjoint();
            snapshot_rhos.col(m) = Eigen::Map<const DenseVector>(rho.data(), rho.size());
        },
        n_threads);

    const DenseMatrix weight_matrix = spec.weights_batch(snapshot_rhos);
    std::vector<WeightedSpectrum> weight_sets;
    weight_sets.reserve(static_cast<size_t>(m_count));
    for (int m = 0; m < m_count; ++m)
        weight_sets.push_back({m, cfg.t_snapshot, weight_matrix.col(m)});

    SsqtResult result;
    result.t = cfg.t_snapshot;
    result.k = cfg.k;
    result.seeds = seeds;
    result.cmin_rule = resolve_cmin(weight_sets, cfg.k);
    result.c_min = cfg.fixed_c_min.value_or(result.cmin_rule.c_min);

    std::vector<double> n_lambdas, rs, coss;
    std::vector<double> pooled_unfolded;
    std::vector<cplx> pooled_eigenvalues;
    for (const auto& ws : weight_sets) {
        auto set = select_relevant(ws, spec.eigenvalues(), result.c_min);
        SsqtTrajectoryRecord record;
        record.trajectory_id = ws.trajectory_id;
        record.n_lambda = set.n_lambda;
        n_lambdas.push_back(double(set.n_lambda));
        if (cfg.pooled) {
            pooled_eigenvalues.insert(pooled_eigenvalues.end(), set.eigenvalues.begin(),
                                      set.eigenvalues.end());
        }
        auto indicators = analyze_set(set.eigenvalues, cfg);
        if (indicators.valid) {
            record.mean_r = indicators.mean_r;
            record.indicator_valid = true;
            rs.push_back(indicators.mean_r);
            // Small-set rule: below min_set_for_cos the angular indicator is 0.
            record.neg_mean_cos_theta = set.n_lambda < cfg.min_set_for_cos ? 0.0 : indicators.neg_cos;
            pooled_unfolded.insert(pooled_unfolded.end(), indicators.unfolded.begin(),
                                   indicators.unfolded.end());
        } else {
            record.neg_mean_cos_theta = 0.0;
        }
        coss.push_back(record.neg_mean_cos_theta);
        result.per_trajectory.push_back(record);
    }

    if (cfg.pooled && pooled_eigenvalues.size() >= 3) {
        // Pooled-union statistics across trajectories (comparison mode).
        auto indicators = analyze_set(pooled_eigenvalues, cfg);
        if (indicators.valid) {
            rs.assign(1, indicators.mean_r);
            coss.assign(1, pooled_eigenvalues.size() <
                                   static_cast<size_t>(cfg.min_set_for_cos)
                               ? 0.0
                               : indicators.neg_cos);
            pooled_unfolded = std::move(indicators.unfolded);
        }
    }

    const auto n_stat = mean_and_se(n_lambdas);
    result.mean_n_lambda = n_stat.mean;
    result.se_n_lambda = n_stat.se;
    const auto r_stat = mean_and_se(rs);
    result.mean_r = r_stat.mean;
    result.se_r = r_stat.se;
    result.n_indicator_trajectories = static_cast<int>(rs.size());
    const auto cos_stat = mean_and_se(coss);
    result.neg_mean_cos_theta = cos_stat.mean;
    result.se_neg_cos = cos_stat.se;
    if (!pooled_unfolded.empty())
        result.pooled_spacing_histogram = make_histogram(pooled_unfolded, 50, 0.0, 4.0);
    return result;
}

DenseVector make_initial_state(InitialStateFamily family, const HilbertSpace& space,
                               const BoseHubbardParams& params, Rng& rng) {
    switch (family) {
        case InitialStateFamily::Coherent: {
            const cplx alpha =
                3.0 * std::sqrt(cplx(params.f) / cplx(params.delta, -params.gamma));
            DenseVector state = coherent_state(space.factor_dims[0], alpha);
            for (int f = 1; f < space.n_factors(); ++f) {
                DenseVector local = coherent_state(space.factor_dims[static_cast<size_t>(f)], alpha);
                DenseVector combined(state.size() * local.size());
                for (long i = 0; i < state.size(); ++i)
                    combined.segment(i * local.size(), local.size()) = state(i) * local;
                state = std::move(combined);
            }
            return state;
        }
        case InitialStateFamily::Fock: {
            // |n> x ... x |n> with one random n in [0, 5] per trajectory.
            const int level = static_cast<int>(rng.uniform() * 6.0);
            DenseVector state(1);
            state(0) = 1.0;
            for (int f = 0; f < space.n_factors(); ++f) {
                const int d = space.factor_dims[static_cast<size_t>(f)];
                DenseVector local = fock_state(d, std::min(d - 1, level));
                DenseVector combined(state.size() * local.size());
                for (long i = 0; i < state.size(); ++i)
                    combined.segment(i * local.size(), local.size()) = state(i) * local;
                state = std::move(combined);
            }
            return state;
        }
        case InitialStateFamily::Random:
            return random_state(space.total_dim, rng);
    }
    throw std::invalid_argument("make_initial_state: unknown family");
}

NLambdaSeries n_lambda_series(const ModelSpec& model, const LiouvillianSpectrum& spec,
                              const std::vector<DenseVector>& initial_states,
                              const std::vector<double>& t_grid, const SsqtConfig& cfg,
                              int n_threads) {
    if (initial_states.empty()) throw std::invalid_argument("n_lambda_series: no initial states");
    const int m_count = static_cast<int>(initial_states.size());
    const long d2 = spec.dim();
    const size_t n_times = t_grid.size();
    TrajectoryConfig tcfg;
    tcfg.dt = cfg.dt;
    tcfg.dp_max = cfg.dp_max;

    // snapshots[t] holds vec(|psi_m><psi_m|) for all m.
    std::vector<DenseMatrix> snapshots(n_times, DenseMatrix(d2, m_count));
    parallel_for(
        m_count,
        [&](long m) {
            uint64_t sm = cfg.base_seed ^ (0x9e3779b97f4a7c15ULL * (uint64_t(m) + 1));
            auto result = run_trajectory(model, initial_states[static_cast<size_t>(m)], t_grid,
                                         splitmix64(sm), tcfg);
            for (size_t ti = 0; ti < n_times; ++ti) {
                DenseMatrix rho = result.samples[ti].psi * result.samples[ti].psi.adjoint();
                snapshots[ti].col(m) = Eigen::Map<const DenseVector>(rho.data(), rho.size());
            }
        },
        n_threads);

    std::vector<std::vector<WeightedSpectrum>> weights_per_time(n_times);
    for (size_t ti = 0; ti < n_times; ++ti) {
        const DenseMatrix wm = spec.weights_batch(snapshots[ti]);
        for (int m = 0; m < m_count; ++m)
            weights_per_time[ti].push_back({m, t_grid[ti], wm.col(m)});
    }

    NLambdaSeries series;
    series.times = t_grid;
    if (cfg.fixed_c_min) {
        series.c_min = *cfg.fixed_c_min;
    } else {
        series.c_min = resolve_cmin(weights_per_time.back(), cfg.k).c_min;
    }

    series.mean_n_lambda.resize(static_cast<long>(n_times));
    series.se_n_lambda.resize(static_cast<long>(n_times));
    for (size_t ti = 0; ti < n_times; ++ti) {
        std::vector<double> counts;
        counts.reserve(static_cast<size_t>(m_count));
        for (const auto& ws : weights_per_time[ti])
            counts.push_back(
                double(select_relevant(ws, spec.eigenvalues(), series.c_min).n_lambda));
        const auto stat = mean_and_se(counts);
        series.mean_n_lambda(static_cast<long>(ti)) = stat.mean;
        series.se_n_lambda(static_cast<long>(ti)) = stat.se;
    }
    return series;
}

}  // namespace dqc
