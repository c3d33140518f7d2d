// Level-statistics machinery: nearest-neighbor spacings in the complex plane,
// Gaussian-broadened 2D unfolding, polynomial unfolding of real spectra,
// complex spacing ratios, reference distributions and histogram distances.
#pragma once

#include "dqc/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace dqc {

struct Histogram {
    RealVector edges;    // nbins + 1
    RealVector density;  // nbins, integrates to 1 over [edges.front, edges.back]
    int n_samples = 0;
};

Histogram make_histogram(std::span<const double> samples, int nbins, double lo, double hi);

struct SpacingSample {
    std::vector<double> raw;       // s_j = |lambda_j - lambda_j^NN|
    std::vector<double> unfolded;  // s'_j, unit mean (empty when not unfolded)
    std::vector<cplx> ratios;      // z_j = (NN - l_j)/(NNN - l_j) (empty for plain spacings)
    int source_size = 0;
    int merged_duplicates = 0;
};

struct StatsSummary {
    double mean_r = 0.0;
    double neg_mean_cos_theta = 0.0;
    Histogram histogram;
    int n_points = 0;
};

/// Near-duplicates (closer than tol_rel * spectral radius) merged before any
/// spacing computation; the count is reported in SpacingSample.
std::vector<cplx> merge_duplicates(std::span<const cplx> eigs, double tol_rel = 1e-12,
                                   int* merged = nullptr);

/// Nearest-neighbor distances via a cell grid; O(n) expected.
SpacingSample complex_nn_spacings(std::span<const cplx> eigs);

/// Gaussian-broadened density unfolding (bandwidth 4.5 x mean spacing), output
/// rescaled to unit mean.
SpacingSample unfold_complex(std::span<const cplx> eigs);

/// Polynomial fit of the cumulative level staircase; errors when the fitted
/// polynomial is non-monotone over the data range.
RealVector unfold_real(const RealVector& sorted_energies, int poly_degree = 6);

/// Removes eigenvalues with |Im| < epsilon_im.
std::vector<cplx> bulk_filter(std::span<const cplx> eigs, double epsilon_im,
                              int* removed = nullptr);

/// Default bulk cutoff: 10 x median |Im| component of the NN spacing vectors.
double default_bulk_epsilon(std::span<const cplx> eigs);

/// z_j = (lambda^NN - lambda_j) / (lambda^NNN - lambda_j).
SpacingSample complex_spacing_ratios(std::span<const cplx> eigs);

/// Same, but statistics collected only for the query subset while neighbors are
/// searched in the full set; removes the edge bias of hard spectral cuts.
SpacingSample complex_spacing_ratios(std::span<const cplx> eigs,
                                     const std::vector<int>& query_indices);

/// Spacings/unfolding restricted to a query subset with full-set neighbors.
SpacingSample unfold_complex(std::span<const cplx> eigs, const std::vector<int>& query_indices);

/// Indices with |lambda| <= keep_frac * max |lambda| (interior of a droplet).
std::vector<int> interior_indices(std::span<const cplx> eigs, double keep_frac);

/// <r> and -<cos theta> plus a spacing histogram (50 bins on [0,4] by default).
StatsSummary summarize(const SpacingSample& sample, int nbins = 50, double lo = 0.0,
                       double hi = 4.0);

/// r_j = min(s_j, s_{j-1}) / max(s_j, s_{j-1}) averaged over a sorted real spectrum.
double real_r_statistic(const RealVector& sorted_energies);

/// p_2D(s) = (pi/2) s exp(-pi s^2 / 4).
double reference_p2d(double s);
/// Ginibre unitary-ensemble nearest-neighbor law, product/sum truncated at K.
double reference_ginue(double s, int truncation = 100);
/// First moment of reference_ginue (quadrature, cached per truncation).
double ginue_mean(int truncation = 100);
/// reference_ginue rescaled to unit mean, comparable with unfolded spacings.
double reference_ginue_unit_mean(double s, int truncation = 100);

/// L1 distance between a binned empirical density and the bin-averaged reference.
double distribution_distance(const Histogram& histogram,
                             const std::function<double(double)>& reference_density);
double distribution_distance(const Histogram& a, const Histogram& b);

// Random-matrix reference samplers.
DenseVector sample_ginibre_eigenvalues(int n, Rng& rng);
/// Keeps |lambda| <= keep_frac * sqrt(n) (droplet bulk).
std::vector<cplx> ginibre_bulk(const DenseVector& eigs, double keep_frac = 0.85);
RealVector sample_gue_eigenvalues(int n, Rng& rng);
RealVector sample_goe_eigenvalues(int n, Rng& rng);
std::vector<cplx> sample_uniform_disk(int n, Rng& rng);

}  // namespace dqc
