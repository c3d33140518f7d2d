// Benchmark model builders: driven-dissipative Bose-Hubbard chains, the Kerr
// resonator, the boundary-driven open spin chain, random Liouvillians and the
// pure-sink extension.
#pragma once

#include "dqc/operators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dqc {

struct JumpTerm {
    Operator op;
    double rate;  // inverse time
};

struct ModelSpec {
    HilbertSpace space;
    Operator hamiltonian;
    std::vector<JumpTerm> jumps;
    std::string name;

    /// Hermiticity of H, non-negative rates, matching spaces.
    void validate(double herm_tol = 1e-10) const;

    /// All rates and H multiplied by s > 0 (time-unit rescaling).
    ModelSpec scaled(double s) const;

    /// FNV-1a over a canonical serialization; keys the eigenbasis cache.
    uint64_t hash() const;
};

struct BoseHubbardParams {
    double delta = 0.0;   // detuning, units of U
    double u = 1.0;       // Kerr nonlinearity, energy scale
    double j = 0.0;       // hopping
    double f = 0.0;       // drive amplitude (site 1)
    double gamma = 0.0;   // per-site loss rate
    int n_sites = 2;
    int n_c = 5;          // Fock cutoff per cavity; local dimension n_c + 1

    void validate() const;
};

struct SpinChainParams {
    double j = 1.0;        // exchange
    double delta = 0.0;    // ZZ anisotropy (dimensionless, multiplies J)
    double f = 0.0;        // transverse drive on all sites
    double gamma = 0.0;    // bulk dephasing rate
    double gamma1_plus = 0.0, gamma1_minus = 0.0;  // site-1 gain / loss
    double gammaL_plus = 0.0, gammaL_minus = 0.0;  // site-L gain / loss
    int length = 2;

    void validate() const;
};

struct RandomLiouvillianParams {
    int n = 2;        // Hilbert dimension
    int r = 1;        // number of jump operators
    double g = 1.0;   // jump strength relative to the unit GUE variance
    uint64_t seed = 0;

    void validate() const;
};

ModelSpec build_bose_hubbard(const BoseHubbardParams& p);
ModelSpec build_kerr_resonator(double delta, double u, double f, double gamma, int n_c);
ModelSpec build_spin_chain(const SpinChainParams& p);

/// Hermitian orthonormal operator basis {G_i}, G_0 = 1/sqrt(N), Tr[Gi^dag Gj] = delta_ij,
/// G_i traceless for i >= 1 (generalized Gell-Mann matrices).
std::vector<DenseMatrix> gell_mann_basis(int n);

/// Random H from the GUE (off-diagonal variance 1) and r traceless jump operators
/// L_mu = g sum_j G_j w_{j mu} with w complex Ginibre. Reproducible from the seed.
ModelSpec build_random_liouvillian(const RandomLiouvillianParams& p);

/// Appends a sink level |N> and the absorbing jump |N><Psi0|; the extended model's
/// unique steady state is |N><N|. `target_state` is the most-probable eigenvector
/// of the original model's steady state.
ModelSpec extend_with_pure_sink(const ModelSpec& model, const DenseVector& target_state);

/// Most-probable eigenvector of a density matrix; errors if the leading
/// eigenvalue is degenerate within tie_tol.
DenseVector most_probable_eigenvector(const DenseMatrix& rho, double tie_tol = 1e-9);

/// Thermodynamic scale transformation: U -> U/L, F -> F sqrt(L); U F^2 invariant.
BoseHubbardParams apply_thermodynamic_scaling(const BoseHubbardParams& p, double scale);

}  // namespace dqc
