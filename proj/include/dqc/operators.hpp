// Finite-dimensional operator algebra: tensor-product spaces, sparse operators,
// column-stacking vectorization and the multiplication superoperators.
#pragma once

#include "dqc/types.hpp"

#include <initializer_list>
#include <vector>

namespace dqc {

struct HilbertSpace {
    std::vector<int> factor_dims;
    int total_dim = 0;

    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<int> dims);
    HilbertSpace(std::initializer_list<int> dims) : HilbertSpace(std::vector<int>(dims)) {}

    int n_factors() const { return static_cast<int>(factor_dims.size()); }
    bool operator==(const HilbertSpace& other) const { return factor_dims == other.factor_dims; }
};

/// Operator on a HilbertSpace. Builders produce sparse storage; dense views are
/// materialized where the eigensolvers need them.
class Operator {
public:
    Operator() = default;
    Operator(HilbertSpace space, SparseCMatrix matrix);
    Operator(HilbertSpace space, const DenseMatrix& matrix);

    const HilbertSpace& space() const { return space_; }
    int dim() const { return space_.total_dim; }
    const SparseCMatrix& sparse() const { return mat_; }
    DenseMatrix dense() const { return DenseMatrix(mat_); }

    Operator adjoint() const { return Operator(space_, SparseCMatrix(mat_.adjoint())); }
    cplx trace() const;
    bool is_hermitian(double tol = 1e-10) const;

    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(const Operator& rhs) const;
    friend Operator operator*(cplx scalar, const Operator& op) {
        return Operator(op.space_, SparseCMatrix(scalar * op.mat_));
    }

private:
    HilbertSpace space_;
    SparseCMatrix mat_;
};

/// Linear map on vectorized density matrices; dim is the square of the
/// underlying Hilbert-space dimension.
class SuperOperator {
public:
    SuperOperator() = default;
    SuperOperator(int hilbert_dim, SparseCMatrix matrix);

    int hilbert_dim() const { return hilbert_dim_; }
    int dim() const { return hilbert_dim_ * hilbert_dim_; }
    const SparseCMatrix& sparse() const { return mat_; }
    DenseMatrix dense() const { return DenseMatrix(mat_); }

    DenseVector apply(const DenseVector& v) const { return mat_ * v; }

    SuperOperator operator+(const SuperOperator& rhs) const;
    SuperOperator operator*(const SuperOperator& rhs) const;
    friend SuperOperator operator*(cplx scalar, const SuperOperator& s) {
        return SuperOperator(s.hilbert_dim_, SparseCMatrix(scalar * s.mat_));
    }

private:
    int hilbert_dim_ = 0;
    SparseCMatrix mat_;
};

SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b);
SparseCMatrix sparse_identity(int dim);

/// Bosonic lowering operator: entry sqrt(k+1) at (k, k+1).
Operator annihilation(int dim);
/// a^dagger a on a single mode.
Operator number_operator(int dim);
Operator identity(const HilbertSpace& space);

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator pauli_plus();
Operator pauli_minus();

/// I x ... x op x ... x I with `op` acting on tensor factor `site`.
Operator embed(const Operator& op, int site, const HilbertSpace& space);

/// Column-stacking vectorization: vec(rho)[i + d*j] = rho(i, j).
DenseVector vectorize(const DenseMatrix& rho);
DenseVector vectorize(const Operator& rho);
DenseMatrix devectorize(const DenseVector& v);
Operator devectorize(const DenseVector& v, const HilbertSpace& space);

/// Superoperator for rho -> A rho B.
SuperOperator sandwich_superop(const Operator& a, const Operator& b);
/// rho -> A rho  (the paper's F^R map).
SuperOperator left_mult_superop(const Operator& a);
/// rho -> rho B  (the paper's F^L map).
SuperOperator right_mult_superop(const Operator& b);

/// Truncated Fock basis state |n>.
DenseVector fock_state(int dim, int n);
/// Truncated coherent state, renormalized after truncation.
DenseVector coherent_state(int dim, cplx alpha);
/// Haar-ish random unit vector (iid complex Gaussian entries, normalized).
DenseVector random_state(int dim, Rng& rng);

}  // namespace dqc
