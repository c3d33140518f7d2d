#include "dqc/classical.hpp"

#include "dqc/trajectories.hpp"  // parallel_for

#include <cmath>
#include <string>

namespace dqc {

DenseVector gp_rhs(const DenseVector& alphas, const MeanFieldParams& p) {
    const long n = alphas.size();
    DenseVector d(n);
    for (long j = 0; j < n; ++j) {
        cplx acc = (cplx(0.0, p.delta) - 0.5 * p.gamma) * alphas(j) -
                   IM * p.u * std::norm(alphas(j)) * alphas(j);
        if (j > 0) acc += IM * p.j * alphas(j - 1);
        if (j + 1 < n) acc += IM * p.j * alphas(j + 1);
        if (j == 0) acc -= IM * p.f;
        d(j) = acc;
    }
    return d;
}

namespace {

void rk4_step(DenseVector& alphas, const MeanFieldParams& p, double dt) {
    const DenseVector k1 = gp_rhs(alphas, p);
    const DenseVector k2 = gp_rhs(alphas + 0.5 * dt * k1, p);
    const DenseVector k3 = gp_rhs(alphas + 0.5 * dt * k2, p);
    const DenseVector k4 = gp_rhs(alphas + dt * k3, p);
    alphas += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool finite(const DenseVector& v) {
    for (long j = 0; j < v.size(); ++j)
        if (!std::isfinite(v(j).real()) || !std::isfinite(v(j).imag())) return false;
    return true;
}

}  // namespace

std::vector<ClassicalSample> integrate_classical(const DenseVector& alpha0,
                                                 const MeanFieldParams& p, double t_final,
                                                 double dt, int sample_every) {
    if (!(dt > 0.0) || !(t_final >= 0.0))
        throw std::invalid_argument("integrate_classical: bad time parameters");
    std::vector<ClassicalSample> out;
    DenseVector alphas = alpha0;
    double t = 0.0;
    out.push_back({t, alphas});
    long step_count = 0;
    while (t < t_final - 0.5 * dt) {
        rk4_step(alphas, p, dt);
        t += dt;
        ++step_count;
        if (!finite(alphas) || alphas.cwiseAbs().maxCoeff() > 1e9)
            throw NumericalError("integrate_classical: trajectory blew up at t = " +
                                 std::to_string(t));
        if (step_count % sample_every == 0) out.push_back({t, alphas});
    }
    return out;
}

LyapunovResult lyapunov_max(const DenseVector& alpha0, const MeanFieldParams& p,
                            const LyapunovConfig& cfg) {
    if (!(cfg.epsilon > 0.0) || !(cfg.dt > 0.0) || cfg.n_transient < 0 || cfg.n_sample < 1 ||
        cfg.n_blocks < 2)
        throw std::invalid_argument("lyapunov_max: invalid configuration");

    const long n = alpha0.size();
    DenseVector reference = alpha0;
    // Uniform perturbation epsilon/sqrt(2n) on each quadrature keeps |y2-y1| = epsilon.
    const double component = cfg.epsilon / std::sqrt(2.0 * double(n));
    DenseVector perturbed = alpha0;
    for (long j = 0; j < n; ++j) perturbed(j) += cplx(component, component);

    LyapunovResult result;
    auto advance_both = [&]() {
        rk4_step(reference, p, cfg.dt);
        rk4_step(perturbed, p, cfg.dt);
        if (!finite(reference) || !finite(perturbed))
            throw NumericalError("lyapunov_max: orbit blew up");
    };
    auto renormalize = [&](double distance) {
        // Conventional pull-back along the current separation.
        perturbed = reference + (cfg.epsilon / distance) * (perturbed - reference);
    };

    Rng reperturb_rng(12345);
    auto separation_or_reperturb = [&]() {
        double d = (perturbed - reference).norm();
        while (d == 0.0) {
            ++result.zero_separation_events;
            for (long j = 0; j < n; ++j)
                perturbed(j) = reference(j) +
                               cfg.epsilon * M_SQRT1_2 *
                                   cplx(reperturb_rng.gaussian(), reperturb_rng.gaussian()) /
                                   std::sqrt(double(n));
            d = (perturbed - reference).norm();
        }
        return d;
    };

    for (long k = 0; k < cfg.n_transient; ++k) {
        advance_both();
        renormalize(separation_or_reperturb());
    }

    const long block_len = cfg.n_sample / cfg.n_blocks;
    std::vector<double> block_means;
    block_means.reserve(static_cast<size_t>(cfg.n_blocks));
    for (int b = 0; b < cfg.n_blocks; ++b) {
        double acc = 0.0;
        for (long k = 0; k < block_len; ++k) {
            advance_both();
            const double d = separation_or_reperturb();
            acc += std::log(d / cfg.epsilon);
            renormalize(d);
        }
        block_means.push_back(acc / (double(block_len) * cfg.dt));
    }

    double mean = 0.0;
    for (double b : block_means) mean += b;
    mean /= double(cfg.n_blocks);
    double var = 0.0;
    for (double b : block_means) var += (b - mean) * (b - mean);
    result.lambda = mean;
    result.std_error = std::sqrt(var / (double(cfg.n_blocks) * double(cfg.n_blocks - 1)));
    result.zero_within_3se = std::abs(result.lambda) < 3.0 * result.std_error;
    return result;
}

void twa_step(DenseVector& alphas, const MeanFieldParams& p, double dt, Rng& rng) {
    const long n = alphas.size();
    DenseVector drift(n);
    for (long j = 0; j < n; ++j) {
        cplx acc = (cplx(0.0, p.delta) - 0.5 * p.gamma) * alphas(j) -
                   IM * p.u * (std::norm(alphas(j)) - 1.0) * alphas(j);
        if (j > 0) acc += IM * p.j * alphas(j - 1);
        if (j + 1 < n) acc += IM * p.j * alphas(j + 1);
        if (j == 0) acc -= IM * p.f;
        drift(j) = acc;
    }
    const double quadrature_sd = std::sqrt(0.5 * dt);
    const double noise_scale = std::sqrt(0.5 * p.gamma);
    for (long j = 0; j < n; ++j) {
        const cplx dw{quadrature_sd * rng.gaussian(), quadrature_sd * rng.gaussian()};
        alphas(j) += dt * drift(j) + noise_scale * dw;
    }
}

SemiclassicalOtocResult semiclassical_otoc(const MeanFieldParams& p, const DenseVector& alpha0,
                                           const SemiclassicalOtocConfig& cfg, int n_threads) {
    if (cfg.n_trajectories < 1) throw std::invalid_argument("semiclassical_otoc: need M >= 1");
    if (p.gamma <= 0.0 && (cfg.t_relax <= 0.0 || cfg.t_measure <= 0.0))
        throw std::invalid_argument(
            "semiclassical_otoc: explicit times required when gamma = 0");
    const double t_relax = cfg.t_relax > 0.0 ? cfg.t_relax : 50.0 / p.gamma;
    const double t_measure = cfg.t_measure > 0.0 ? cfg.t_measure : 10.0 / p.gamma;
    const long n_steps = static_cast<long>(std::ceil((t_relax + t_measure) / cfg.dt));
    const long n = alpha0.size();

    std::vector<double> d_first(static_cast<size_t>(cfg.n_trajectories));
    std::vector<double> d_total(static_cast<size_t>(cfg.n_trajectories));

    parallel_for(
        cfg.n_trajectories,
        [&](long m) {
            Rng rng = Rng::stream(cfg.base_seed, static_cast<uint64_t>(m));
            DenseVector a = alpha0;
            DenseVector b = alpha0;
            for (long j = 0; j < n; ++j) b(j) += cfg.epsilon;

            const double quadrature_sd = std::sqrt(0.5 * cfg.dt);
            const double noise_scale = std::sqrt(0.5 * p.gamma);
            DenseVector noise(n);
            for (long k = 0; k < n_steps; ++k) {
                // One shared Wiener increment per step, applied to both replicas.
                for (long j = 0; j < n; ++j)
                    noise(j) = noise_scale * cplx{quadrature_sd * rng.gaussian(),
                                                  quadrature_sd * rng.gaussian()};
                auto drift_step = [&](DenseVector& state) {
                    DenseVector drift(n);
                    for (long j = 0; j < n; ++j) {
                        cplx acc = (cplx(0.0, p.delta) - 0.5 * p.gamma) * state(j) -
                                   IM * p.u * (std::norm(state(j)) - 1.0) * state(j);
                        if (j > 0) acc += IM * p.j * state(j - 1);
                        if (j + 1 < n) acc += IM * p.j * state(j + 1);
                        if (j == 0) acc -= IM * p.f;
                        drift(j) = acc;
                    }
                    state += cfg.dt * drift + noise;
                };
                drift_step(a);
                drift_step(b);
                if (!finite(a) || !finite(b))
                    throw NumericalError("semiclassical_otoc: replica blew up at step " +
                                         std::to_string(k));
            }
            d_first[static_cast<size_t>(m)] = std::abs(b(0) - a(0));
            double total = 0.0;
            for (long j = 0; j < n; ++j) total += std::abs(b(j) - a(j));
            d_total[static_cast<size_t>(m)] = total;
        },
        n_threads);

    auto reduce = [&](const std::vector<double>& ds, double& d_ss, double& se) {
        const double m_count = double(ds.size());
        double mean = 0.0;
        for (double d : ds) mean += std::exp(-d);
        mean /= m_count;
        double var = 0.0;
        for (double d : ds) var += (std::exp(-d) - mean) * (std::exp(-d) - mean);
        d_ss = 1.0 - mean;
        se = ds.size() > 1 ? std::sqrt(var / (m_count * (m_count - 1.0))) : 0.0;
    };
    SemiclassicalOtocResult result;
    reduce(d_first, result.d_ss_first_mode, result.se_first_mode);
    reduce(d_total, result.d_ss_total, result.se_total);
    double mean_d = 0.0;
    for (double d : d_first) mean_d += d;
    result.mean_distance_first_mode = mean_d / double(cfg.n_trajectories);
    return result;
}

}  // namespace dqc
