// Closed-system level statistics for the driven Bose-Hubbard chain: converged
// low-lying spectra, the r statistic with an energy cutoff, and cutoff curves
// under the thermodynamic scale transformation.
#pragma once

#include "dqc/models.hpp"

#include <vector>

namespace dqc {

struct ConvergedSpectrum {
    RealVector energies;  // ascending, first m_max levels converged
    int n_c_used = 0;
    int m_max = 0;
};

/// Diagonalizes the closed chain at increasing Fock cutoffs until the lowest
/// m_max levels are stable to rel_tol under N_c -> N_c + 2; errors when the
/// cutoff budget is exhausted.
ConvergedSpectrum hamiltonian_spectrum(const BoseHubbardParams& params, int n_sites, int m_max,
                                       int n_c_start = 4, int n_c_budget = 40,
                                       double rel_tol = 1e-8);

inline constexpr int kRStatisticFloor = 200;  // below this, warn: noisy statistics

/// <r>_H over the lowest m_max levels. Reference values: 0.386 (1D Poisson),
/// 0.53 (Wigner-Dyson). Sets *noisy_warning when m_max < kRStatisticFloor.
double r_statistic(const RealVector& sorted_energies, int m_max, bool* noisy_warning = nullptr);

struct RCurveRow {
    double scale_l;
    int m_max;
    double mean_r;
    int n_levels;
};

/// <r>_H as a function of M_max for each thermodynamic scale L.
std::vector<RCurveRow> r_vs_cutoff_curve(const BoseHubbardParams& params, int n_sites,
                                         const std::vector<double>& l_values,
                                         const std::vector<int>& m_max_grid,
                                         int n_c_budget = 40);

/// Spectrum of the closed chain at fixed cutoff (union of all symmetry sectors).
RealVector raw_hamiltonian_spectrum(const BoseHubbardParams& params, int n_sites, int n_c);

}  // namespace dqc
