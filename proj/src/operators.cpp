#include "dqc/operators.hpp"

#include <cmath>

namespace dqc {

HilbertSpace::HilbertSpace(std::vector<int> dims) : factor_dims(std::move(dims)) {
    if (factor_dims.empty()) throw std::invalid_argument("HilbertSpace: factor_dims must be non-empty");
    total_dim = 1;
    for (int d : factor_dims) {
        if (d < 1) throw std::invalid_argument("HilbertSpace: factor dimensions must be positive");
        total_dim *= d;
    }
}

Operator::Operator(HilbertSpace space, SparseCMatrix matrix)
    : space_(std::move(space)), mat_(std::move(matrix)) {
    if (mat_.rows() != space_.total_dim || mat_.cols() != space_.total_dim)
        throw std::invalid_argument("Operator: matrix dimensions do not match the space");
    mat_.makeCompressed();
}

Operator::Operator(HilbertSpace space, const DenseMatrix& matrix)
    : Operator(std::move(space), SparseCMatrix(matrix.sparseView())) {}

cplx Operator::trace() const {
    cplx t = 0.0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(mat_, k); it; ++it)
            if (it.row() == it.col()) t += it.value();
    return t;
}

bool Operator::is_hermitian(double tol) const {
    SparseCMatrix diff = mat_ - SparseCMatrix(mat_.adjoint());
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(diff, k); it; ++it)
            if (std::abs(it.value()) > tol) return false;
    return true;
}

namespace {
void require_same_space(const Operator& a, const Operator& b) {
    if (!(a.space() == b.space()))
        throw std::invalid_argument("Operator arithmetic: operands on different spaces");
}
}  // namespace

Operator Operator::operator+(const Operator& rhs) const {
    require_same_space(*this, rhs);
    return Operator(space_, SparseCMatrix(mat_ + rhs.mat_));
}

Operator Operator::operator-(const Operator& rhs) const {
    require_same_space(*this, rhs);
    return Operator(space_, SparseCMatrix(mat_ - rhs.mat_));
}

Operator Operator::operator*(const Operator& rhs) const {
    require_same_space(*this, rhs);
    return Operator(space_, SparseCMatrix(mat_ * rhs.mat_));
}

SuperOperator::SuperOperator(int hilbert_dim, SparseCMatrix matrix)
    : hilbert_dim_(hilbert_dim), mat_(std::move(matrix)) {
    const long d2 = static_cast<long>(hilbert_dim) * hilbert_dim;
    if (mat_.rows() != d2 || mat_.cols() != d2)
        throw std::invalid_argument("SuperOperator: matrix must be total_dim^2 square");
    mat_.makeCompressed();
}

SuperOperator SuperOperator::operator+(const SuperOperator& rhs) const {
    if (hilbert_dim_ != rhs.hilbert_dim_)
        throw std::invalid_argument("SuperOperator: dimension mismatch");
    return SuperOperator(hilbert_dim_, SparseCMatrix(mat_ + rhs.mat_));
}

SuperOperator SuperOperator::operator*(const SuperOperator& rhs) const {
    if (hilbert_dim_ != rhs.hilbert_dim_)
        throw std::invalid_argument("SuperOperator: dimension mismatch");
    return SuperOperator(hilbert_dim_, SparseCMatrix(mat_ * rhs.mat_));
}

SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b) {
    SparseCMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<size_t>(a.nonZeros()) * static_cast<size_t>(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseCMatrix::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseCMatrix::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(),
                                       ia.col() * b.cols() + ib.col(),
                                       ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseCMatrix sparse_identity(int dim) {
    SparseCMatrix id(dim, dim);
    id.setIdentity();
    return id;
}

Operator annihilation(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
    SparseCMatrix a(dim, dim);
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int k = 0; k + 1 < dim; ++k) trips.emplace_back(k, k + 1, std::sqrt(double(k + 1)));
    a.setFromTriplets(trips.begin(), trips.end());
    return Operator(HilbertSpace{{dim}}, std::move(a));
}

Operator number_operator(int dim) {
    SparseCMatrix n(dim, dim);
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int k = 1; k < dim; ++k) trips.emplace_back(k, k, double(k));
    n.setFromTriplets(trips.begin(), trips.end());
    return Operator(HilbertSpace{{dim}}, std::move(n));
}

Operator identity(const HilbertSpace& space) {
    return Operator(space, sparse_identity(space.total_dim));
}

namespace {
Operator qubit_op(std::initializer_list<Eigen::Triplet<cplx>> entries) {
    SparseCMatrix m(2, 2);
    m.setFromTriplets(entries.begin(), entries.end());
    return Operator(HilbertSpace{{2}}, std::move(m));
}
}  // namespace

// Basis convention: index 0 = ground, index 1 = excited; sigma^- lowers.
Operator pauli_x() { return qubit_op({{0, 1, 1.0}, {1, 0, 1.0}}); }
Operator pauli_y() { return qubit_op({{0, 1, -IM}, {1, 0, IM}}); }
Operator pauli_z() { return qubit_op({{0, 0, -1.0}, {1, 1, 1.0}}); }
Operator pauli_plus() { return qubit_op({{1, 0, 1.0}}); }
Operator pauli_minus() { return qubit_op({{0, 1, 1.0}}); }

Operator embed(const Operator& op, int site, const HilbertSpace& space) {
    if (site < 0 || site >= space.n_factors())
        throw std::invalid_argument("embed: site index out of range");
    if (op.dim() != space.factor_dims[static_cast<size_t>(site)])
        throw std::invalid_argument("embed: operator dimension does not match the local factor");
    SparseCMatrix acc = (site == 0) ? op.sparse() : sparse_identity(space.factor_dims[0]);
    for (int f = 1; f < space.n_factors(); ++f)
        acc = kron(acc, f == site ? op.sparse() : sparse_identity(space.factor_dims[static_cast<size_t>(f)]));
    return Operator(space, std::move(acc));
}

DenseVector vectorize(const DenseMatrix& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("vectorize: matrix must be square");
    return Eigen::Map<const DenseVector>(rho.data(), rho.size());
}

DenseVector vectorize(const Operator& rho) { return vectorize(rho.dense()); }

DenseMatrix devectorize(const DenseVector& v) {
    const auto d = static_cast<long>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != v.size()) throw std::invalid_argument("devectorize: length is not a perfect square");
    return Eigen::Map<const DenseMatrix>(v.data(), d, d);
}

Operator devectorize(const DenseVector& v, const HilbertSpace& space) {
    DenseMatrix m = devectorize(v);
    if (m.rows() != space.total_dim)
        throw std::invalid_argument("devectorize: vector length does not match the space");
    return Operator(space, m);
}

// Column stacking turns A rho B into (B^T kron A) vec(rho).
SuperOperator sandwich_superop(const Operator& a, const Operator& b) {
    require_same_space(a, b);
    return SuperOperator(a.dim(), kron(SparseCMatrix(b.sparse().transpose()), a.sparse()));
}

SuperOperator left_mult_superop(const Operator& a) {
    return SuperOperator(a.dim(), kron(sparse_identity(a.dim()), a.sparse()));
}

SuperOperator right_mult_superop(const Operator& b) {
    return SuperOperator(b.dim(), kron(SparseCMatrix(b.sparse().transpose()), sparse_identity(b.dim())));
}

DenseVector fock_state(int dim, int n) {
    if (n < 0 || n >= dim) throw std::invalid_argument("fock_state: level outside the truncated space");
    DenseVector v = DenseVector::Zero(dim);
    v(n) = 1.0;
    return v;
}

DenseVector coherent_state(int dim, cplx alpha) {
    DenseVector v(dim);
    cplx amp = 1.0;
    v(0) = amp;
    for (int n = 1; n < dim; ++n) {
        amp *= alpha / std::sqrt(double(n));
        v(n) = amp;
    }
    v *= std::exp(-0.5 * std::norm(alpha));
    v.normalize();
    return v;
}

DenseVector random_state(int dim, Rng& rng) {
    DenseVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
    v.normalize();
    return v;
}

}  // namespace dqc
