// Steady-state diagnostics: expectation values, photon-number fluctuations,
// purity, fidelity, the entanglement-Hamiltonian ratio statistic, and the
// superoperator-propagated OTOC.
#pragma once

#include "dqc/liouvillian.hpp"
#include "dqc/models.hpp"

#include <span>
#include <vector>

namespace dqc {

/// Tr[rho O].
cplx expectation(const DenseMatrix& rho, const DenseMatrix& op);
double expectation_real(const DenseMatrix& rho, const DenseMatrix& op);

/// delta n_j = <a_j^dag a_j^dag a_j a_j> - <a_j^dag a_j>^2; positive for
/// super-Poissonian, negative for sub-Poissonian photon statistics.
double poisson_deviation(const DenseMatrix& rho, const HilbertSpace& space, int site);

/// Tr[rho^2].
double purity(const DenseMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; Hermitian
/// eigendecompositions with eigenvalue clipping at 1e-14.
double fidelity(const DenseMatrix& rho, const DenseMatrix& sigma);

struct EntanglementRResult {
    double mean_r = 0.0;
    int excluded_levels = 0;  // eigenvalues below the support cutoff
};

/// Ratio statistic of the entanglement Hamiltonian -log(rho); errors when the
/// spectrum is fully degenerate.
EntanglementRResult entanglement_r(const DenseMatrix& rho, double support_tol = 1e-14);

struct OtocSeries {
    double t = 0.0;
    std::vector<double> tau;
    std::vector<double> value;          // Re O_t(tau)
    double max_imag_residue = 0.0;      // |Im| across the series, reported not silently dropped
};

/// O_t(tau) = -<[Q(t+tau), P(t)]^2> for the quadratures of the given site,
/// evaluated through the four-term superoperator chains; backward segments use
/// -H with the same jump operators. No extra normalization is applied (the
/// closed-oscillator value at tau = 0 is 1).
OtocSeries quantum_otoc(const ModelSpec& model, const DenseMatrix& rho_in, double t,
                        std::span<const double> tau_grid, int site = 0,
                        bool force_large = false);

}  // namespace dqc
