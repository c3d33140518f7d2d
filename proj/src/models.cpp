#include "dqc/models.hpp"

#include "dqc/linalg.hpp"

#include <cmath>
#include <cstring>

namespace dqc {

void ModelSpec::validate(double herm_tol) const {
    if (!hamiltonian.is_hermitian(herm_tol))
        throw std::invalid_argument("ModelSpec: Hamiltonian is not Hermitian within tolerance");
    for (const auto& jump : jumps) {
        if (jump.rate < 0.0) throw std::invalid_argument("ModelSpec: negative jump rate");
        if (!(jump.op.space() == space))
            throw std::invalid_argument("ModelSpec: jump operator on a different space");
    }
    if (!(hamiltonian.space() == space))
        throw std::invalid_argument("ModelSpec: Hamiltonian on a different space");
}

ModelSpec ModelSpec::scaled(double s) const {
    if (s <= 0.0) throw std::invalid_argument("ModelSpec::scaled: factor must be positive");
    ModelSpec out{space, cplx(s) * hamiltonian, jumps, name + "_scaled"};
    for (auto& jump : out.jumps) jump.rate *= s;
    return out;
}

namespace {

void hash_bytes(uint64_t& h, const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

void hash_double(uint64_t& h, double x) {
    uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    hash_bytes(h, &bits, sizeof bits);
}

void hash_sparse(uint64_t& h, const SparseCMatrix& m) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(m, k); it; ++it) {
            int32_t rc[2] = {static_cast<int32_t>(it.row()), static_cast<int32_t>(it.col())};
            hash_bytes(h, rc, sizeof rc);
            hash_double(h, it.value().real());
            hash_double(h, it.value().imag());
        }
}

}  // namespace

uint64_t ModelSpec::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (int d : space.factor_dims) {
        int32_t v = d;
        hash_bytes(h, &v, sizeof v);
    }
    hash_sparse(h, hamiltonian.sparse());
    for (const auto& jump : jumps) {
        hash_double(h, jump.rate);
        hash_sparse(h, jump.op.sparse());
    }
    return h;
}

void BoseHubbardParams::validate() const {
    if (n_c < 2) throw std::invalid_argument("BoseHubbardParams: n_c must be >= 2");
    if (gamma < 0.0) throw std::invalid_argument("BoseHubbardParams: gamma must be >= 0");
    if (n_sites < 1) throw std::invalid_argument("BoseHubbardParams: n_sites must be >= 1");
}

ModelSpec build_bose_hubbard(const BoseHubbardParams& p) {
    p.validate();
    const int local = p.n_c + 1;
    HilbertSpace space(std::vector<int>(static_cast<size_t>(p.n_sites), local));

    const Operator a = annihilation(local);
    const Operator ad = a.adjoint();
    const Operator n_op = number_operator(local);
    const Operator kerr = ad * ad * a * a;

    SparseCMatrix h(space.total_dim, space.total_dim);
    for (int site = 0; site < p.n_sites; ++site) {
        h += cplx(-p.delta) * embed(n_op, site, space).sparse() +
             cplx(0.5 * p.u) * embed(kerr, site, space).sparse();
        if (site + 1 < p.n_sites) {
            SparseCMatrix hop =
                embed(ad, site + 1, space).sparse() * embed(a, site, space).sparse();
            h += cplx(-p.j) * SparseCMatrix(hop + SparseCMatrix(hop.adjoint()));
        }
    }
    SparseCMatrix a1 = embed(a, 0, space).sparse();
    h += cplx(p.f) * SparseCMatrix(SparseCMatrix(a1.adjoint()) + a1);

    ModelSpec model{space, Operator(space, std::move(h)), {}, "bose_hubbard"};
    for (int site = 0; site < p.n_sites; ++site)
        model.jumps.push_back({embed(a, site, space), p.gamma});
    return model;
}

ModelSpec build_kerr_resonator(double delta, double u, double f, double gamma, int n_c) {
    BoseHubbardParams p;
    p.delta = delta;
    p.u = u;
    p.f = f;
    p.gamma = gamma;
    p.n_sites = 1;
    p.n_c = n_c;
    ModelSpec model = build_bose_hubbard(p);
    model.name = "kerr_resonator";
    return model;
}

void SpinChainParams::validate() const {
    if (length < 2) throw std::invalid_argument("SpinChainParams: length must be >= 2");
    for (double rate : {gamma, gamma1_plus, gamma1_minus, gammaL_plus, gammaL_minus})
        if (rate < 0.0) throw std::invalid_argument("SpinChainParams: negative rate");
}

ModelSpec build_spin_chain(const SpinChainParams& p) {
    p.validate();
    HilbertSpace space(std::vector<int>(static_cast<size_t>(p.length), 2));

    const Operator sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
    SparseCMatrix h(space.total_dim, space.total_dim);
    for (int site = 0; site + 1 < p.length; ++site) {
        SparseCMatrix bond =
            embed(sx, site, space).sparse() * embed(sx, site + 1, space).sparse() +
            embed(sy, site, space).sparse() * embed(sy, site + 1, space).sparse();
        bond += cplx(p.delta) * SparseCMatrix(embed(sz, site, space).sparse() *
                                              embed(sz, site + 1, space).sparse());
        h += cplx(p.j) * bond;
    }
    for (int site = 0; site < p.length; ++site)
        h += cplx(p.f) * embed(sx, site, space).sparse();

    ModelSpec model{space, Operator(space, std::move(h)), {}, "spin_chain"};
    for (int site = 0; site < p.length; ++site)
        model.jumps.push_back({embed(sz, site, space), p.gamma});
    model.jumps.push_back({embed(pauli_plus(), 0, space), p.gamma1_plus});
    model.jumps.push_back({embed(pauli_minus(), 0, space), p.gamma1_minus});
    model.jumps.push_back({embed(pauli_plus(), p.length - 1, space), p.gammaL_plus});
    model.jumps.push_back({embed(pauli_minus(), p.length - 1, space), p.gammaL_minus});
    return model;
}

void RandomLiouvillianParams::validate() const {
    if (n < 2) throw std::invalid_argument("RandomLiouvillianParams: n must be >= 2");
    if (r < 1) throw std::invalid_argument("RandomLiouvillianParams: r must be >= 1");
    if (g < 0.0) throw std::invalid_argument("RandomLiouvillianParams: g must be >= 0");
}

std::vector<DenseMatrix> gell_mann_basis(int n) {
    std::vector<DenseMatrix> basis;
    basis.reserve(static_cast<size_t>(n) * n);
    basis.push_back(DenseMatrix::Identity(n, n) / std::sqrt(double(n)));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            DenseMatrix sym = DenseMatrix::Zero(n, n);
            sym(j, k) = sym(k, j) = M_SQRT1_2;
            basis.push_back(sym);
            DenseMatrix asym = DenseMatrix::Zero(n, n);
            asym(j, k) = -IM * M_SQRT1_2;
            asym(k, j) = IM * M_SQRT1_2;
            basis.push_back(asym);
        }
    for (int l = 1; l < n; ++l) {
        DenseMatrix diag = DenseMatrix::Zero(n, n);
        const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
        for (int j = 0; j < l; ++j) diag(j, j) = norm;
        diag(l, l) = -double(l) * norm;
        basis.push_back(diag);
    }
    return basis;
}

ModelSpec build_random_liouvillian(const RandomLiouvillianParams& p) {
    p.validate();
    Rng rng(p.seed);
    const int n = p.n;

    // GUE draw: diagonal N(0,1), off-diagonal complex with E|H_jk|^2 = 1.
    DenseMatrix h = DenseMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = rng.gaussian();
        for (int k = j + 1; k < n; ++k) {
            h(j, k) = rng.complex_gaussian();
            h(k, j) = std::conj(h(j, k));
        }
    }

    const auto basis = gell_mann_basis(n);
    HilbertSpace space{{n}};
    ModelSpec model{space, Operator(space, h), {}, "random_liouvillian"};
    for (int mu = 0; mu < p.r; ++mu) {
        DenseMatrix jump = DenseMatrix::Zero(n, n);
        for (size_t j = 1; j < basis.size(); ++j) jump += rng.complex_gaussian() * basis[j];
        model.jumps.push_back({Operator(space, DenseMatrix(p.g * jump)), 1.0});
    }
    return model;
}

DenseVector most_probable_eigenvector(const DenseMatrix& rho, double tie_tol) {
    auto eig = linalg::eig_hermitian(rho, true);
    const long n = eig.values.size();
    if (n < 2) return eig.vectors.col(n - 1);
    if (eig.values(n - 1) - eig.values(n - 2) < tie_tol)
        throw MultipleSteadyStatesError(
            "most_probable_eigenvector: leading steady-state eigenvalues tie within tolerance (" +
            std::to_string(eig.values(n - 1)) + " vs " + std::to_string(eig.values(n - 2)) + ")");
    return eig.vectors.col(n - 1);
}

ModelSpec extend_with_pure_sink(const ModelSpec& model, const DenseVector& target_state) {
    const int n = model.space.total_dim;
    if (target_state.size() != n)
        throw std::invalid_argument("extend_with_pure_sink: target state dimension mismatch");
    HilbertSpace big{{n + 1}};

    auto pad = [&](const SparseCMatrix& m) {
        SparseCMatrix out(n + 1, n + 1);
        std::vector<Eigen::Triplet<cplx>> trips;
        for (int k = 0; k < m.outerSize(); ++k)
            for (SparseCMatrix::InnerIterator it(m, k); it; ++it)
                trips.emplace_back(it.row(), it.col(), it.value());
        out.setFromTriplets(trips.begin(), trips.end());
        return out;
    };

    ModelSpec out{big, Operator(big, pad(model.hamiltonian.sparse())), {}, model.name + "_sink"};
    for (const auto& jump : model.jumps)
        out.jumps.push_back({Operator(big, pad(jump.op.sparse())), jump.rate});

    // Absorbing jump |N><Psi0| at unit rate.
    DenseMatrix sink = DenseMatrix::Zero(n + 1, n + 1);
    sink.row(n).head(n) = target_state.adjoint();
    out.jumps.push_back({Operator(big, sink), 1.0});
    return out;
}

BoseHubbardParams apply_thermodynamic_scaling(const BoseHubbardParams& p, double scale) {
    if (scale <= 0.0) throw std::invalid_argument("apply_thermodynamic_scaling: L must be positive");
    BoseHubbardParams out = p;
    out.u = p.u / scale;
    out.f = p.f * std::sqrt(scale);
    return out;
}

}  // namespace dqc
