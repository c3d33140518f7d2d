// Test-only independent oracles: direct master-equation arithmetic and RK4
// integration in matrix space (no vectorization, no eigendecomposition),
// exhaustive neighbor scans, and quadrature.
#pragma once

#include "dqc/models.hpp"
#include "dqc/types.hpp"

#include <functional>
#include <vector>

namespace dqc::testing {

/// Eq.-by-eq. Lindblad right-hand side: -i[H, rho] + sum gamma (L rho L^dag - 1/2 {L^dag L, rho}).
inline DenseMatrix lindblad_rhs(const ModelSpec& model, const DenseMatrix& rho) {
    const DenseMatrix h = model.hamiltonian.dense();
    DenseMatrix out = -IM * (h * rho - rho * h);
    for (const auto& jump : model.jumps) {
        if (jump.rate == 0.0) continue;
        const DenseMatrix l = jump.op.dense();
        const DenseMatrix ld = l.adjoint();
        const DenseMatrix ldl = ld * l;
        out += jump.rate * (l * rho * ld - 0.5 * (ldl * rho + rho * ldl));
    }
    return out;
}

/// Fixed-step RK4 integration of the master equation in matrix space.
inline DenseMatrix rk4_master(const ModelSpec& model, DenseMatrix rho, double t_final,
                              double dt) {
    double t = 0.0;
    while (t < t_final - 0.5 * dt) {
        const DenseMatrix k1 = lindblad_rhs(model, rho);
        const DenseMatrix k2 = lindblad_rhs(model, rho + 0.5 * dt * k1);
        const DenseMatrix k3 = lindblad_rhs(model, rho + 0.5 * dt * k2);
        const DenseMatrix k4 = lindblad_rhs(model, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    return rho;
}

/// RK4 Schroedinger integration (closed system).
inline DenseVector rk4_schroedinger(const DenseMatrix& h, DenseVector psi, double t_final,
                                    double dt) {
    auto rhs = [&](const DenseVector& v) { return DenseVector(-IM * (h * v)); };
    double t = 0.0;
    while (t < t_final - 0.5 * dt) {
        const DenseVector k1 = rhs(psi);
        const DenseVector k2 = rhs(psi + 0.5 * dt * k1);
        const DenseVector k3 = rhs(psi + 0.5 * dt * k2);
        const DenseVector k4 = rhs(psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    return psi;
}

struct BruteNearest {
    size_t nn = 0, nnn = 0;
    double d_nn = 0.0, d_nnn = 0.0;
};

/// Exhaustive O(N^2) two-nearest-neighbor scan.
inline BruteNearest brute_force_two_nearest(const std::vector<cplx>& pts, size_t i) {
    BruteNearest best;
    best.d_nn = best.d_nnn = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < pts.size(); ++k) {
        if (k == i) continue;
        const double d = std::abs(pts[k] - pts[i]);
        if (d < best.d_nn) {
            best.d_nnn = best.d_nn;
            best.nnn = best.nn;
            best.d_nn = d;
            best.nn = k;
        } else if (d < best.d_nnn) {
            best.d_nnn = d;
            best.nnn = k;
        }
    }
    return best;
}

/// Greedy nearest matching between two equal-size multisets of complex values;
/// returns the largest matched distance. Robust against the reordering that
/// floating-point jitter causes in strict lexicographic sorts.
inline double multiset_match_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const cplx za : a) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(za - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

/// Composite Simpson quadrature with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Random Hermitian unit-trace density matrix.
inline DenseMatrix random_density(int dim, Rng& rng) {
    DenseMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_gaussian();
    DenseMatrix rho = g * g.adjoint();
    return rho / rho.trace();
}

inline DenseMatrix random_matrix(int rows, int cols, Rng& rng) {
    DenseMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian();
    return m;
}

}  // namespace dqc::testing
