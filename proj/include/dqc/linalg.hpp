// Thin LAPACK wrappers for the dense eigenproblems and factorizations the
// library needs; Eigen handles everything small.
#pragma once

#include "dqc/types.hpp"

#include <vector>

namespace dqc::linalg {

struct EigNonHermitian {
    DenseVector values;
    DenseMatrix right;  // empty unless requested; column j solves A v = values[j] v
};

/// Full non-Hermitian eigendecomposition via zgeev. A is consumed (overwritten).
EigNonHermitian eig_nonhermitian(DenseMatrix a, bool with_right_vectors);

struct EigHermitian {
    RealVector values;  // ascending
    DenseMatrix vectors;
};

/// zheev; A consumed.
EigHermitian eig_hermitian(DenseMatrix a, bool with_vectors = true);

/// dsyev for real symmetric input; A consumed. Returns ascending eigenvalues.
RealVector eig_real_symmetric_values(RealMatrix a);

/// Column-pivoted LU of a square complex matrix (zgetrf), reusable for solves
/// with the matrix, its transpose or adjoint.
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix a);

    long dim() const { return lu_.rows(); }

    /// Solve op(A) X = B in place; trans in {'N','T','C'}.
    void solve_in_place(DenseMatrix& b, char trans = 'N') const;
    DenseMatrix solve(DenseMatrix b, char trans = 'N') const;
    DenseVector solve(DenseVector b, char trans = 'N') const;

    /// Explicit inverse (zgetri); O(n^3), use the solves where possible.
    DenseMatrix inverse() const;

    /// Reciprocal condition number estimate in the 1-norm (zgecon).
    double rcond() const;

private:
    DenseMatrix lu_;
    std::vector<int> ipiv_;
    double anorm_ = 0.0;
};

}  // namespace dqc::linalg
