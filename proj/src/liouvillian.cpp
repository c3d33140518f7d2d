#include "dqc/liouvillian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace dqc {

SuperOperator assemble(const ModelSpec& model) {
    model.validate();
    const int d = model.space.total_dim;
    const SparseCMatrix id = sparse_identity(d);
    const SparseCMatrix& h = model.hamiltonian.sparse();

    SparseCMatrix liou = cplx(0, -1) * SparseCMatrix(kron(id, h) - kron(SparseCMatrix(h.transpose()), id));
    for (const auto& jump : model.jumps) {
        if (jump.rate == 0.0) continue;
        const SparseCMatrix& l = jump.op.sparse();
        const SparseCMatrix ldl = SparseCMatrix(l.adjoint()) * l;
        SparseCMatrix term = kron(SparseCMatrix(l.conjugate()), l);
        term -= cplx(0.5) * SparseCMatrix(kron(id, ldl) + kron(SparseCMatrix(ldl.transpose()), id));
        liou += cplx(jump.rate) * term;
    }
    return SuperOperator(d, std::move(liou));
}

LiouvillianSpectrum::LiouvillianSpectrum(HilbertSpace space, DenseVector eigenvalues,
                                         DenseMatrix right_vectors, uint64_t model_hash)
    : space_(std::move(space)),
      eigenvalues_(std::move(eigenvalues)),
      right_(std::move(right_vectors)),
      model_hash_(model_hash) {
    const long n = eigenvalues_.size();
    if (right_.rows() != n || right_.cols() != n)
        throw std::invalid_argument("LiouvillianSpectrum: eigenvector matrix shape mismatch");
    if (static_cast<long>(space_.total_dim) * space_.total_dim != n)
        throw std::invalid_argument("LiouvillianSpectrum: dimension is not total_dim^2");

    // Sort lexicographically by (Re, Im).
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (eigenvalues_(a).real() != eigenvalues_(b).real())
            return eigenvalues_(a).real() < eigenvalues_(b).real();
        return eigenvalues_(a).imag() < eigenvalues_(b).imag();
    });
    DenseVector sorted_vals(n);
    DenseMatrix sorted_vecs(n, n);
    for (long j = 0; j < n; ++j) {
        sorted_vals(j) = eigenvalues_(order[static_cast<size_t>(j)]);
        sorted_vecs.col(j) = right_.col(order[static_cast<size_t>(j)]);
    }
    eigenvalues_ = std::move(sorted_vals);
    right_ = std::move(sorted_vecs);

    spectral_radius_ = eigenvalues_.cwiseAbs().maxCoeff();
    int steady = 0;
    for (long j = 1; j < n; ++j)
        if (std::abs(eigenvalues_(j)) < std::abs(eigenvalues_(steady))) steady = static_cast<int>(j);
    steady_index_ = steady;
    n_zero_modes_ = 0;
    for (long j = 0; j < n; ++j)
        if (std::abs(eigenvalues_(j)) < tol_zero()) ++n_zero_modes_;

    // Trace gauge: eta_0 unit trace, so that the matching sigma_0 obeys
    // Tr[sigma_0^dag rho] = Tr[rho] and the steady weight of any state is 1.
    if (n_zero_modes_ <= 1) {
        const cplx tr = devectorize(DenseVector(right_.col(steady_index_))).trace();
        if (std::abs(tr) > 1e-12) right_.col(steady_index_) /= tr;
    }

    try {
        lu_ = std::make_shared<linalg::LuFactorization>(right_);
    } catch (const NumericalError&) {
        throw NumericalError(diagnose_defective_message());
    }
    rcond_ = lu_->rcond();
    if (rcond_ < 1e-15) throw NumericalError(diagnose_defective_message());
}

std::string LiouvillianSpectrum::diagnose_defective_message() const {
    // Nearest eigenvalue pair is the likeliest defective cluster.
    const long n = eigenvalues_.size();
    double best = std::numeric_limits<double>::infinity();
    long bi = 0, bj = 1;
    for (long i = 0; i + 1 < n; ++i) {
        // Sorted by Re; only nearby indices can be close.
        for (long j = i + 1; j < std::min(n, i + 64); ++j) {
            const double d = std::abs(eigenvalues_(i) - eigenvalues_(j));
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    std::ostringstream msg;
    msg << "biorthonormalization failed: eigenvector basis is numerically singular; "
        << "closest eigenvalue cluster: (" << eigenvalues_(bi).real() << ","
        << eigenvalues_(bi).imag() << ") and (" << eigenvalues_(bj).real() << ","
        << eigenvalues_(bj).imag() << "), separation " << best;
    return msg.str();
}

Operator LiouvillianSpectrum::right_op(int j) const {
    return devectorize(DenseVector(right_.col(j)), space_);
}

Operator LiouvillianSpectrum::left_op(int j) const {
    DenseVector e = DenseVector::Zero(dim());
    e(j) = 1.0;
    return devectorize(lu_->solve(std::move(e), 'C'), space_);
}

DenseMatrix LiouvillianSpectrum::left_matrix() const {
    return lu_->solve(DenseMatrix(DenseMatrix::Identity(dim(), dim())), 'C');
}

DenseVector LiouvillianSpectrum::weights(const DenseMatrix& rho) const {
    return lu_->solve(vectorize(rho));
}

DenseVector LiouvillianSpectrum::weights_of_state(const DenseVector& psi) const {
    DenseMatrix rho = psi * psi.adjoint();
    return weights(rho);
}

DenseMatrix LiouvillianSpectrum::weights_batch(const DenseMatrix& vectorized_rhos) const {
    return lu_->solve(vectorized_rhos);
}

DenseMatrix LiouvillianSpectrum::reconstruct(const DenseVector& w) const {
    return devectorize(DenseVector(right_ * w));
}

namespace {
void check_dimension_guard(long superop_dim, bool force_large) {
    if (superop_dim > kMaxLiouvillianDim && !force_large)
        throw ResourceGuardError("dense diagonalization of a " + std::to_string(superop_dim) +
                                 "-dimensional superoperator exceeds the memory guard (" +
                                 std::to_string(kMaxLiouvillianDim) + "); pass force_large to override");
}
}  // namespace

namespace {
bool sparse_all_finite(const SparseCMatrix& m) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(m, k); it; ++it)
            if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
                return false;
    return true;
}
}  // namespace

LiouvillianSpectrum diagonalize(const SuperOperator& liouvillian, const HilbertSpace& space,
                                bool force_large) {
    check_dimension_guard(liouvillian.dim(), force_large);
    if (!sparse_all_finite(liouvillian.sparse()))
        throw NumericalError("diagonalize: Liouvillian has non-finite entries");
    auto eig = linalg::eig_nonhermitian(liouvillian.dense(), true);
    return LiouvillianSpectrum(space, std::move(eig.values), std::move(eig.right));
}

LiouvillianSpectrum diagonalize(const ModelSpec& model, bool force_large) {
    const SuperOperator liou = assemble(model);
    check_dimension_guard(liou.dim(), force_large);
    auto eig = linalg::eig_nonhermitian(liou.dense(), true);
    return LiouvillianSpectrum(model.space, std::move(eig.values), std::move(eig.right),
                               model.hash());
}

Operator steady_state(const LiouvillianSpectrum& spec) {
    if (spec.steady_degenerate())
        throw MultipleSteadyStatesError(
            "steady_state: " + std::to_string(spec.n_zero_modes()) +
            " eigenvalues within tol_zero of 0; steady state is not unique");
    DenseMatrix rho = devectorize(DenseVector(spec.right_matrix().col(spec.steady_index())));
    rho = 0.5 * (rho + rho.adjoint()).eval();

    auto eig = linalg::eig_hermitian(rho, true);
    RealVector vals = eig.values;
    for (long j = 0; j < vals.size(); ++j) {
        if (vals(j) < -1e-9)
            throw NumericalError("steady_state: eigenvalue " + std::to_string(vals(j)) +
                                 " below the positivity repair threshold");
        if (vals(j) < 0.0) vals(j) = 0.0;
    }
    const double trace = vals.sum();
    if (trace <= 0.0) throw NumericalError("steady_state: vanishing trace after positivity repair");
    const DenseVector scaled = (vals / trace).cast<cplx>();
    rho = eig.vectors * scaled.asDiagonal() * eig.vectors.adjoint();
    return Operator(spec.space(), rho);
}

DenseVector spectral_weights(const LiouvillianSpectrum& spec, const Operator& rho) {
    if (!(rho.space() == spec.space()))
        throw std::invalid_argument("spectral_weights: operator on a different space");
    return spec.weights(rho.dense());
}

DenseMatrix propagate(const LiouvillianSpectrum& spec, const DenseMatrix& rho, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("propagate: non-finite time");
    DenseVector c = spec.weights(rho);
    for (long j = 0; j < c.size(); ++j) c(j) *= std::exp(spec.eigenvalue(static_cast<int>(j)) * t);
    return spec.reconstruct(c);
}

DenseMatrix propagate_expm(const SuperOperator& liouvillian, const DenseMatrix& rho, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("propagate_expm: non-finite time");
    DenseMatrix generator = t * liouvillian.dense();
    return devectorize(DenseVector(generator.exp() * vectorize(rho)));
}

// --- binary eigenbasis cache ------------------------------------------------

namespace {

constexpr char kMagic[4] = {'D', 'Q', 'E', 'B'};
constexpr uint32_t kVersion = 1;

uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

void save_spectrum_cache(const std::string& path, const LiouvillianSpectrum& spec) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_spectrum_cache: cannot open " + path);
    const uint64_t hash = spec.model_hash();
    const uint64_t dim = static_cast<uint64_t>(spec.dim());
    const uint64_t n_factors = static_cast<uint64_t>(spec.space().n_factors());

    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    out.write(reinterpret_cast<const char*>(&hash), sizeof hash);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&n_factors), sizeof n_factors);
    for (int d : spec.space().factor_dims) {
        const int64_t v = d;
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }

    uint64_t checksum = fnv1a(spec.eigenvalues().data(),
                              sizeof(cplx) * static_cast<size_t>(spec.dim()));
    checksum = fnv1a(spec.right_matrix().data(),
                     sizeof(cplx) * static_cast<size_t>(spec.dim()) * spec.dim(), checksum);
    out.write(reinterpret_cast<const char*>(spec.eigenvalues().data()),
              static_cast<std::streamsize>(sizeof(cplx)) * spec.dim());
    out.write(reinterpret_cast<const char*>(spec.right_matrix().data()),
              static_cast<std::streamsize>(sizeof(cplx)) * spec.dim() * spec.dim());
    out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
    if (!out) throw std::runtime_error("save_spectrum_cache: write failed for " + path);
}

std::optional<LiouvillianSpectrum> load_spectrum_cache(const std::string& path,
                                                       const HilbertSpace& space,
                                                       uint64_t expected_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;

    char magic[4];
    uint32_t version = 0;
    uint64_t hash = 0, dim = 0, n_factors = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&hash), sizeof hash);
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    in.read(reinterpret_cast<char*>(&n_factors), sizeof n_factors);
    if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion) return std::nullopt;
    if (hash != expected_hash) return std::nullopt;
    if (n_factors != static_cast<uint64_t>(space.n_factors())) return std::nullopt;
    for (int d : space.factor_dims) {
        int64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        if (!in || v != d) return std::nullopt;
    }
    const uint64_t expect_dim =
        static_cast<uint64_t>(space.total_dim) * static_cast<uint64_t>(space.total_dim);
    if (dim != expect_dim) return std::nullopt;

    DenseVector values(static_cast<long>(dim));
    DenseMatrix right(static_cast<long>(dim), static_cast<long>(dim));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(sizeof(cplx) * dim));
    in.read(reinterpret_cast<char*>(right.data()),
            static_cast<std::streamsize>(sizeof(cplx) * dim * dim));
    uint64_t checksum = 0;
    in.read(reinterpret_cast<char*>(&checksum), sizeof checksum);
    if (!in) return std::nullopt;

    uint64_t recomputed = fnv1a(values.data(), sizeof(cplx) * dim);
    recomputed = fnv1a(right.data(), sizeof(cplx) * dim * dim, recomputed);
    if (recomputed != checksum) return std::nullopt;

    try {
        return LiouvillianSpectrum(space, std::move(values), std::move(right), hash);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

LiouvillianSpectrum diagonalize_cached(const ModelSpec& model, const std::string& cache_dir,
                                       bool force_large, bool* cache_hit) {
    if (cache_hit) *cache_hit = false;
    if (cache_dir.empty()) return diagonalize(model, force_large);

    std::filesystem::create_directories(cache_dir);
    char name[64];
    std::snprintf(name, sizeof name, "%016llx.eigb",
                  static_cast<unsigned long long>(model.hash()));
    const std::string path = (std::filesystem::path(cache_dir) / name).string();

    if (auto cached = load_spectrum_cache(path, model.space, model.hash())) {
        if (cache_hit) *cache_hit = true;
        return std::move(*cached);
    }
    LiouvillianSpectrum spec = diagonalize(model, force_large);
    save_spectrum_cache(path, spec);
    return spec;
}

}  // namespace dqc
