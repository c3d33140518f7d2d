#include "dqc/linalg.hpp"

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <string>

namespace dqc::linalg {

namespace {
lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }
}  // namespace

EigNonHermitian eig_nonhermitian(DenseMatrix a, bool with_right_vectors) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eig_nonhermitian: matrix must be square");
    const auto n = static_cast<lapack_int>(a.rows());
    EigNonHermitian out;
    out.values.resize(n);
    if (with_right_vectors) out.right.resize(n, n);
    const char jobvr = with_right_vectors ? 'V' : 'N';
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', jobvr, n, lp(a.data()), n, lp(out.values.data()), nullptr, n,
        with_right_vectors ? lp(out.right.data()) : nullptr, n);
    if (info != 0)
        throw NumericalError("zgeev failed with info=" + std::to_string(info));
    return out;
}

EigHermitian eig_hermitian(DenseMatrix a, bool with_vectors) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eig_hermitian: matrix must be square");
    const auto n = static_cast<lapack_int>(a.rows());
    EigHermitian out;
    out.values.resize(n);
    const lapack_int info = LAPACKE_zheev(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'U', n,
                                          lp(a.data()), n, out.values.data());
    if (info != 0)
        throw NumericalError("zheev failed with info=" + std::to_string(info));
    if (with_vectors) out.vectors = std::move(a);
    return out;
}

RealVector eig_real_symmetric_values(RealMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eig_real_symmetric: matrix must be square");
    const auto n = static_cast<lapack_int>(a.rows());
    RealVector values(n);
    const lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, values.data());
    if (info != 0)
        throw NumericalError("dsyev failed with info=" + std::to_string(info));
    return values;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols()) throw std::invalid_argument("LuFactorization: matrix must be square");
    anorm_ = lu_.cwiseAbs().colwise().sum().maxCoeff();
    const auto n = static_cast<lapack_int>(lu_.rows());
    ipiv_.resize(static_cast<size_t>(n));
    const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lp(lu_.data()), n, ipiv_.data());
    if (info != 0)
        throw NumericalError("zgetrf failed with info=" + std::to_string(info) +
                             (info > 0 ? " (matrix is singular)" : ""));
}

void LuFactorization::solve_in_place(DenseMatrix& b, char trans) const {
    const auto n = static_cast<lapack_int>(lu_.rows());
    if (b.rows() != n) throw std::invalid_argument("LuFactorization::solve: dimension mismatch");
    const lapack_int info =
        LAPACKE_zgetrs(LAPACK_COL_MAJOR, trans, n, static_cast<lapack_int>(b.cols()),
                       lp(const_cast<cplx*>(lu_.data())), n, ipiv_.data(), lp(b.data()), n);
    if (info != 0)
        throw NumericalError("zgetrs failed with info=" + std::to_string(info));
}

DenseMatrix LuFactorization::solve(DenseMatrix b, char trans) const {
    solve_in_place(b, trans);
    return b;
}

DenseVector LuFactorization::solve(DenseVector b, char trans) const {
    DenseMatrix m = b;
    solve_in_place(m, trans);
    return m.col(0);
}

DenseMatrix LuFactorization::inverse() const {
    DenseMatrix inv = lu_;
    const auto n = static_cast<lapack_int>(lu_.rows());
    const lapack_int info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, lp(inv.data()), n, ipiv_.data());
    if (info != 0)
        throw NumericalError("zgetri failed with info=" + std::to_string(info));
    return inv;
}

double LuFactorization::rcond() const {
    const auto n = static_cast<lapack_int>(lu_.rows());
    double rc = 0.0;
    const lapack_int info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n,
                                           lp(const_cast<cplx*>(lu_.data())), n, anorm_, &rc);
    if (info != 0)
        throw NumericalError("zgecon failed with info=" + std::to_string(info));
    return rc;
}

}  // namespace dqc::linalg
