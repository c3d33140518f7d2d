// Mean-field (Gross-Pitaevskii) dynamics with Lyapunov diagnostics, and
// truncated-Wigner stochastic dynamics with the replica OTOC.
#pragma once

#include "dqc/models.hpp"
#include "dqc/types.hpp"

#include <vector>

namespace dqc {

struct MeanFieldParams {
    double delta = 0.0;
    double u = 1.0;
    double j = 0.0;
    double f = 0.0;
    double gamma = 0.0;
    int n_modes = 2;

    static MeanFieldParams from(const BoseHubbardParams& p) {
        return {p.delta, p.u, p.j, p.f, p.gamma, p.n_sites};
    }
};

/// d alpha_j/dt = (i Delta - gamma/2) alpha_j - i U |alpha_j|^2 alpha_j
///              + i J (alpha_{j-1} + alpha_{j+1}) - i F delta_{j,1}.
DenseVector gp_rhs(const DenseVector& alphas, const MeanFieldParams& p);

struct ClassicalSample {
    double t;
    DenseVector alphas;
};

/// Fixed-step RK4; throws on blow-up with the failure time in the message.
std::vector<ClassicalSample> integrate_classical(const DenseVector& alpha0,
                                                 const MeanFieldParams& p, double t_final,
                                                 double dt, int sample_every = 1);

struct LyapunovConfig {
    double epsilon = 1e-8;  // orbit separation, field units
    double dt = 1e-3;
    long n_transient = 10000;
    long n_sample = 1000000;
    int n_blocks = 20;
};

struct LyapunovResult {
    double lambda = 0.0;     // inverse-time units
    double std_error = 0.0;  // from block averaging
    bool zero_within_3se = false;
    int zero_separation_events = 0;
};

/// Largest Lyapunov exponent by the orbit-separation method: the perturbed
/// orbit is pulled back to distance epsilon along the current separation after
/// each step and the per-step log stretching is averaged.
LyapunovResult lyapunov_max(const DenseVector& alpha0, const MeanFieldParams& p,
                            const LyapunovConfig& cfg);

/// Euler-Maruyama TWA step: drift with the Wigner correction
/// -i U (|alpha|^2 - 1) alpha and additive noise sqrt(gamma/2) dW with
/// independent complex increments of quadrature variance dt/2 per mode.
void twa_step(DenseVector& alphas, const MeanFieldParams& p, double dt, Rng& rng);

struct SemiclassicalOtocConfig {
    int n_trajectories = 1000;
    double t_relax = 0.0;    // defaults to 50 / gamma when <= 0
    double t_measure = 0.0;  // defaults to 10 / gamma when <= 0
    double dt = 1e-4;
    cplx epsilon{0.01 * M_SQRT1_2, 0.01 * M_SQRT1_2};
    uint64_t base_seed = 1;
};

struct SemiclassicalOtocResult {
    double d_ss_first_mode = 0.0;  // 1 - <exp(-d)> for mode 1 (reported quantity)
    double se_first_mode = 0.0;
    double d_ss_total = 0.0;  // distance summed over modes
    double se_total = 0.0;
    double mean_distance_first_mode = 0.0;
};

/// Replica OTOC: both replicas share each Wiener path exactly; replica b is
/// offset by epsilon in every mode at t = 0.
SemiclassicalOtocResult semiclassical_otoc(const MeanFieldParams& p, const DenseVector& alpha0,
                                           const SemiclassicalOtocConfig& cfg, int n_threads = 0);

}  // namespace dqc
