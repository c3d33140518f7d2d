#include "dqc/hamiltonian_stats.hpp"

#include "dqc/linalg.hpp"
#include "dqc/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dqc {

RealVector raw_hamiltonian_spectrum(const BoseHubbardParams& params, int n_sites, int n_c) {
    BoseHubbardParams p = params;
    p.n_sites = n_sites;
    p.n_c = n_c;
    p.gamma = 0.0;
    const ModelSpec model = build_bose_hubbard(p);
    // The chain Hamiltonian is real in the Fock basis; dsyev is the fast path.
    DenseMatrix h = model.hamiltonian.dense();
    if (h.imag().cwiseAbs().maxCoeff() > 1e-12)
        return linalg::eig_hermitian(std::move(h), false).values;
    return linalg::eig_real_symmetric_values(h.real());
}

ConvergedSpectrum hamiltonian_spectrum(const BoseHubbardParams& params, int n_sites, int m_max,
                                       int n_c_start, int n_c_budget, double rel_tol) {
    if (m_max < 3) throw std::invalid_argument("hamiltonian_spectrum: m_max must be >= 3");
    int n_c = std::max(n_c_start, 2);
    RealVector previous = raw_hamiltonian_spectrum(params, n_sites, n_c);
    while (n_c + 2 <= n_c_budget) {
        const int next_nc = n_c + 2;
        RealVector current = raw_hamiltonian_spectrum(params, n_sites, next_nc);
        if (previous.size() >= m_max && current.size() >= m_max) {
            double worst = 0.0;
            for (int j = 0; j < m_max; ++j) {
                const double scale = std::max(1.0, std::abs(current(j)));
                worst = std::max(worst, std::abs(current(j) - previous(j)) / scale);
            }
            if (worst < rel_tol) {
                ConvergedSpectrum out;
                out.energies = current.head(std::min<long>(current.size(), m_max));
                out.n_c_used = next_nc;
                out.m_max = m_max;
                return out;
            }
        }
        previous = std::move(current);
        n_c = next_nc;
    }
    throw NumericalError("hamiltonian_spectrum: lowest " + std::to_string(m_max) +
                         " levels did not converge within the N_c budget " +
                         std::to_string(n_c_budget));
}

double r_statistic(const RealVector& sorted_energies, int m_max, bool* noisy_warning) {
    if (m_max < 3) throw std::invalid_argument("r_statistic: m_max must be >= 3");
    if (sorted_energies.size() < m_max)
        throw std::invalid_argument("r_statistic: fewer converged levels than m_max");
    if (noisy_warning) *noisy_warning = m_max < kRStatisticFloor;
    return real_r_statistic(sorted_energies.head(m_max));
}

std::vector<RCurveRow> r_vs_cutoff_curve(const BoseHubbardParams& params, int n_sites,
                                         const std::vector<double>& l_values,
                                         const std::vector<int>& m_max_grid,
                                         int n_c_budget) {
    if (m_max_grid.empty()) throw std::invalid_argument("r_vs_cutoff_curve: empty m_max grid");
    const int m_top = *std::max_element(m_max_grid.begin(), m_max_grid.end());
    std::vector<RCurveRow> rows;
    for (double scale : l_values) {
        const BoseHubbardParams scaled = apply_thermodynamic_scaling(params, scale);
        const ConvergedSpectrum spectrum =
            hamiltonian_spectrum(scaled, n_sites, m_top, 4, n_c_budget);
        for (int m_max : m_max_grid) {
            if (spectrum.energies.size() < m_max) continue;  // undefined beyond convergence
            rows.push_back({scale, m_max, r_statistic(spectrum.energies, m_max), m_max});
        }
    }
    return rows;
}

}  // namespace dqc
