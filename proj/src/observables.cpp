#include "dqc/observables.hpp"

#include "dqc/linalg.hpp"
#include "dqc/spectral_stats.hpp"

#include <algorithm>
#include <cmath>

namespace dqc {

cplx expectation(const DenseMatrix& rho, const DenseMatrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols())
        throw std::invalid_argument("expectation: dimension mismatch");
    return (rho * op).trace();
}

double expectation_real(const DenseMatrix& rho, const DenseMatrix& op) {
    return expectation(rho, op).real();
}

double poisson_deviation(const DenseMatrix& rho, const HilbertSpace& space, int site) {
    const Operator a_local = annihilation(space.factor_dims.at(static_cast<size_t>(site)));
    const DenseMatrix a = embed(a_local, site, space).dense();
    const DenseMatrix n = a.adjoint() * a;
    const DenseMatrix pair_corr = a.adjoint() * a.adjoint() * a * a;
    const double mean_n = expectation_real(rho, n);
    return expectation_real(rho, pair_corr) - mean_n * mean_n;
}

double purity(const DenseMatrix& rho) { return (rho * rho).trace().real(); }

double fidelity(const DenseMatrix& rho, const DenseMatrix& sigma) {
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("fidelity: dimension mismatch");
    auto eig_rho = linalg::eig_hermitian(0.5 * (rho + rho.adjoint()), true);
    RealVector clipped = eig_rho.values.cwiseMax(0.0);
    for (long j = 0; j < clipped.size(); ++j)
        if (clipped(j) < 1e-14) clipped(j) = 0.0;
    const DenseVector sqrt_vals = clipped.cwiseSqrt().cast<cplx>();
    const DenseMatrix sqrt_rho =
        eig_rho.vectors * sqrt_vals.asDiagonal() * eig_rho.vectors.adjoint();

    DenseMatrix inner = sqrt_rho * sigma * sqrt_rho;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    auto eig_inner = linalg::eig_hermitian(std::move(inner), false);
    double acc = 0.0;
    for (long j = 0; j < eig_inner.values.size(); ++j)
        acc += std::sqrt(std::max(eig_inner.values(j), 0.0));
    return acc * acc;
}

EntanglementRResult entanglement_r(const DenseMatrix& rho, double support_tol) {
    auto eig = linalg::eig_hermitian(0.5 * (rho + rho.adjoint()), false);
    std::vector<double> log_spectrum;
    int excluded = 0;
    for (long j = 0; j < eig.values.size(); ++j) {
        if (eig.values(j) <= support_tol) {
            ++excluded;
            continue;
        }
        log_spectrum.push_back(-std::log(eig.values(j)));
    }
    if (log_spectrum.size() < 3)
        throw DegenerateSpectrumError("entanglement_r: fewer than 3 levels on the support");
    std::sort(log_spectrum.begin(), log_spectrum.end());
    const double span = log_spectrum.back() - log_spectrum.front();
    if (span < 1e-12)
        throw DegenerateSpectrumError("entanglement_r: fully degenerate spectrum, ratio undefined");
    RealVector sorted = Eigen::Map<const RealVector>(log_spectrum.data(),
                                                     static_cast<long>(log_spectrum.size()));
    return {real_r_statistic(sorted), excluded};
}

namespace {

cplx vec_trace(const DenseVector& v, int d) {
    cplx acc = 0.0;
    for (int i = 0; i < d; ++i) acc += v(static_cast<long>(i) * d + i);
    return acc;
}

/// exp(lambda tau)-weighted reconstruction from precomputed weights.
DenseVector evolve_from_weights(const LiouvillianSpectrum& spec, const DenseVector& weights,
                                double tau) {
    DenseVector scaled = weights;
    for (long j = 0; j < scaled.size(); ++j)
        scaled(j) *= std::exp(spec.eigenvalue(static_cast<int>(j)) * tau);
    return spec.right_matrix() * scaled;
}

}  // namespace

OtocSeries quantum_otoc(const ModelSpec& model, const DenseMatrix& rho_in, double t,
                        std::span<const double> tau_grid, int site, bool force_large) {
    const int d = model.space.total_dim;
    if (rho_in.rows() != d || rho_in.cols() != d)
        throw std::invalid_argument("quantum_otoc: input state dimension mismatch");

    // Forward generator and the backward one (-H, same jump operators).
    const LiouvillianSpectrum forward = diagonalize(model, force_large);
    ModelSpec backward_model = model;
    backward_model.hamiltonian = cplx(-1.0) * model.hamiltonian;
    backward_model.name = model.name + "_backward";
    const LiouvillianSpectrum backward = diagonalize(backward_model, force_large);

    const Operator a_local = annihilation(model.space.factor_dims.at(static_cast<size_t>(site)));
    const Operator a = embed(a_local, site, model.space);
    const Operator q = cplx(M_SQRT1_2) * (a + a.adjoint());
    const Operator p = cplx(0.0, M_SQRT1_2) * (a.adjoint() - a);

    const SparseCMatrix f_q = sandwich_superop(q, q).sparse();   // rho -> Q rho Q
    const SparseCMatrix f_p = sandwich_superop(p, p).sparse();   // rho -> P rho P
    const SparseCMatrix f_p_r = left_mult_superop(p).sparse();   // rho -> P rho
    const SparseCMatrix f_p_l = right_mult_superop(p).sparse();  // rho -> rho P

    // rho(t), then the three P-dressed branches with their forward weights.
    const DenseVector w_in = forward.weights(rho_in);
    const DenseVector rho_t = evolve_from_weights(forward, w_in, t);
    const DenseVector w_pr = forward.weights(devectorize(DenseVector(f_p_r * rho_t)));
    const DenseVector w_pl = forward.weights(devectorize(DenseVector(f_p_l * rho_t)));
    const DenseVector w_pp = forward.weights(devectorize(DenseVector(f_p * rho_t)));

    OtocSeries series;
    series.t = t;
    series.tau.assign(tau_grid.begin(), tau_grid.end());
    series.value.reserve(tau_grid.size());

    for (double tau : tau_grid) {
        if (tau < 0.0) throw std::invalid_argument("quantum_otoc: tau must be >= 0");
        // T1 = Tr{F_P^R V_b(tau) F_Q V_f(tau) F_P^R rho_t}
        DenseVector branch = f_q * evolve_from_weights(forward, w_pr, tau);
        branch = evolve_from_weights(backward, backward.weights(devectorize(branch)), tau);
        const cplx t1 = vec_trace(DenseVector(f_p_r * branch), d);

        // T2 = Tr{F_P^R V_b(tau) F_Q V_f(tau) F_P^L rho_t}
        branch = f_q * evolve_from_weights(forward, w_pl, tau);
        branch = evolve_from_weights(backward, backward.weights(devectorize(branch)), tau);
        const cplx t2 = vec_trace(DenseVector(f_p_r * branch), d);

        // T3 = Tr{F_P V_b(tau) F_Q V_f(t + tau) rho_in}
        branch = f_q * evolve_from_weights(forward, w_in, t + tau);
        branch = evolve_from_weights(backward, backward.weights(devectorize(branch)), tau);
        const cplx t3 = vec_trace(DenseVector(f_p * branch), d);

        // T4 = Tr{F_Q V_f(tau) F_P rho_t}
        branch = f_q * evolve_from_weights(forward, w_pp, tau);
        const cplx t4 = vec_trace(branch, d);

        const cplx value = -(t1 + t2 - t3 - t4);
        series.value.push_back(value.real());
        series.max_imag_residue = std::max(series.max_imag_residue, std::abs(value.imag()));
    }
    return series;
}

}  // namespace dqc
