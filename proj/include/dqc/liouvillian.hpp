// Liouvillian assembly, full non-Hermitian eigendecomposition with a
// biorthonormal left basis, steady-state extraction, spectral weights and
// spectral propagation.
#pragma once

#include "dqc/linalg.hpp"
#include "dqc/models.hpp"
#include "dqc/operators.hpp"

#include <memory>
#include <optional>
#include <string>

namespace dqc {

/// Matrix form of d rho/dt = -i[H, rho] + sum_mu gamma_mu D[L_mu] rho acting on
/// column-stacked density matrices.
SuperOperator assemble(const ModelSpec& model);

/// Dense diagonalizations above this superoperator dimension require force_large.
inline constexpr int kMaxLiouvillianDim = 5000;

class LiouvillianSpectrum {
public:
    LiouvillianSpectrum(HilbertSpace space, DenseVector eigenvalues, DenseMatrix right_vectors,
                        uint64_t model_hash = 0);

    const HilbertSpace& space() const { return space_; }
    int dim() const { return static_cast<int>(eigenvalues_.size()); }
    const DenseVector& eigenvalues() const { return eigenvalues_; }
    cplx eigenvalue(int j) const { return eigenvalues_(j); }
    int steady_index() const { return steady_index_; }
    bool steady_degenerate() const { return n_zero_modes_ > 1; }
    int n_zero_modes() const { return n_zero_modes_; }
    double spectral_radius() const { return spectral_radius_; }
    double tol_zero() const { return 1e-9 * spectral_radius_; }
    double basis_rcond() const { return rcond_; }
    uint64_t model_hash() const { return model_hash_; }

    /// Column j is the vectorized right eigenoperator eta_j.
    const DenseMatrix& right_matrix() const { return right_; }
    Operator right_op(int j) const;

    /// Left eigenoperator sigma_j, biorthonormal to the right basis:
    /// Tr[sigma_j^dag eta_l] = delta_jl by construction.
    Operator left_op(int j) const;
    /// All left eigenoperators as columns (O(dim^3); prefer weight solves).
    DenseMatrix left_matrix() const;

    /// Spectral weights c_j = Tr[sigma_j^dag rho], one column per input column.
    DenseVector weights(const DenseMatrix& rho) const;
    DenseVector weights_of_state(const DenseVector& psi) const;
    DenseMatrix weights_batch(const DenseMatrix& vectorized_rhos) const;

    /// Sum_j c_j eta_j as a matrix.
    DenseMatrix reconstruct(const DenseVector& weights) const;

private:
    std::string diagnose_defective_message() const;

    HilbertSpace space_;
    DenseVector eigenvalues_;
    DenseMatrix right_;
    std::shared_ptr<const linalg::LuFactorization> lu_;
    int steady_index_ = 0;
    int n_zero_modes_ = 0;
    double spectral_radius_ = 0.0;
    double rcond_ = 0.0;
    uint64_t model_hash_ = 0;
};

LiouvillianSpectrum diagonalize(const SuperOperator& liouvillian, const HilbertSpace& space,
                                bool force_large = false);
LiouvillianSpectrum diagonalize(const ModelSpec& model, bool force_large = false);

/// Hermitian-symmetrized, positivity-repaired, unit-trace steady state.
/// Errors when the zero eigenvalue is degenerate.
Operator steady_state(const LiouvillianSpectrum& spec);

DenseVector spectral_weights(const LiouvillianSpectrum& spec, const Operator& rho);

/// exp(L t) rho via the spectral decomposition.
DenseMatrix propagate(const LiouvillianSpectrum& spec, const DenseMatrix& rho, double t);
/// Same map through dense scaling-and-squaring, independent of the eigenbasis.
DenseMatrix propagate_expm(const SuperOperator& liouvillian, const DenseMatrix& rho, double t);

/// Binary eigenbasis cache (magic, version, model hash, checksum). Returns
/// nullopt on missing file or any mismatch/corruption.
void save_spectrum_cache(const std::string& path, const LiouvillianSpectrum& spec);
std::optional<LiouvillianSpectrum> load_spectrum_cache(const std::string& path,
                                                       const HilbertSpace& space,
                                                       uint64_t expected_hash);

/// Diagonalize with transparent caching keyed by the model hash; cache_dir may
/// be empty (no caching).
LiouvillianSpectrum diagonalize_cached(const ModelSpec& model, const std::string& cache_dir,
                                       bool force_large = false, bool* cache_hit = nullptr);

}  // namespace dqc
