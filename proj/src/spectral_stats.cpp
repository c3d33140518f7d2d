#include "dqc/spectral_stats.hpp"

#include "dqc/linalg.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace dqc {

Histogram make_histogram(std::span<const double> samples, int nbins, double lo, double hi) {
    if (nbins < 1 || !(hi > lo)) throw std::invalid_argument("make_histogram: bad bin layout");
    Histogram h;
    h.edges.resize(nbins + 1);
    for (int b = 0; b <= nbins; ++b) h.edges(b) = lo + (hi - lo) * b / nbins;
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(nbins);
    int in_range = 0;
    for (double s : samples) {
        if (s < lo || s >= hi) continue;
        const int b = std::min(nbins - 1, static_cast<int>((s - lo) / (hi - lo) * nbins));
        ++counts(b);
        ++in_range;
    }
    h.n_samples = in_range;
    h.density.resize(nbins);
    const double width = (hi - lo) / nbins;
    for (int b = 0; b < nbins; ++b)
        h.density(b) = in_range > 0 ? counts(b) / (in_range * width) : 0.0;
    return h;
}

std::vector<cplx> merge_duplicates(std::span<const cplx> eigs, double tol_rel, int* merged) {
    double radius = 0.0;
    for (cplx z : eigs) radius = std::max(radius, std::abs(z));
    const double tol = tol_rel * std::max(radius, 1e-300);

    std::vector<size_t> order(eigs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (eigs[a].real() != eigs[b].real()) return eigs[a].real() < eigs[b].real();
        return eigs[a].imag() < eigs[b].imag();
    });

    struct Cluster {
        cplx centroid;
        size_t first_index;
    };
    std::vector<Cluster> clusters;
    clusters.reserve(eigs.size());
    for (size_t i = 0; i < order.size();) {
        size_t j = i + 1;
        cplx acc = eigs[order[i]];
        size_t first = order[i];
        while (j < order.size() && std::abs(eigs[order[j]] - eigs[order[i]]) < tol) {
            acc += eigs[order[j]];
            first = std::min(first, order[j]);
            ++j;
        }
        clusters.push_back({acc / double(j - i), first});
        i = j;
    }
    // Emit in original first-occurrence order so indices stay meaningful.
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.first_index < b.first_index; });
    std::vector<cplx> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) out.push_back(c.centroid);
    if (merged) *merged = static_cast<int>(eigs.size() - out.size());
    return out;
}

namespace {

// Uniform cell grid for nearest / next-nearest neighbor queries in the plane.
class NeighborGrid {
public:
    explicit NeighborGrid(std::span<const cplx> pts) : pts_(pts) {
        double min_x = pts[0].real(), max_x = min_x, min_y = pts[0].imag(), max_y = min_y;
        for (cplx z : pts) {
            min_x = std::min(min_x, z.real());
            max_x = std::max(max_x, z.real());
            min_y = std::min(min_y, z.imag());
            max_y = std::max(max_y, z.imag());
        }
        const double span = std::max({max_x - min_x, max_y - min_y, 1e-300});
        cell_ = span / std::max(1.0, std::sqrt(double(pts.size())));
        x0_ = min_x;
        y0_ = min_y;
        nx_ = static_cast<int>((max_x - min_x) / cell_) + 1;
        ny_ = static_cast<int>((max_y - min_y) / cell_) + 1;
        cells_.resize(static_cast<size_t>(nx_) * ny_);
        for (size_t i = 0; i < pts.size(); ++i) cells_[cell_index(pts[i])].push_back(i);
    }

    struct TwoNearest {
        size_t nn = 0, nnn = 0;
        double d_nn = 0.0, d_nnn = 0.0;
    };

    TwoNearest query(size_t i) const {
        const cplx z = pts_[i];
        const int cx = clampi(static_cast<int>((z.real() - x0_) / cell_), nx_);
        const int cy = clampi(static_cast<int>((z.imag() - y0_) / cell_), ny_);
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        size_t i1 = i, i2 = i;
        const int max_ring = std::max(nx_, ny_);
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (double(ring - 1) * cell_ > d2) break;
            for (int dx = -ring; dx <= ring; ++dx)
                for (int dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const int gx = cx + dx, gy = cy + dy;
                    if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_) continue;
                    for (size_t k : cells_[static_cast<size_t>(gx) * ny_ + gy]) {
                        if (k == i) continue;
                        const double d = std::abs(pts_[k] - z);
                        if (d < d1) {
                            d2 = d1;
                            i2 = i1;
                            d1 = d;
                            i1 = k;
                        } else if (d < d2) {
                            d2 = d;
                            i2 = k;
                        }
                    }
                }
        }
        return {i1, i2, d1, d2};
    }

private:
    static int clampi(int v, int n) { return std::clamp(v, 0, n - 1); }
    size_t cell_index(cplx z) const {
        const int gx = clampi(static_cast<int>((z.real() - x0_) / cell_), nx_);
        const int gy = clampi(static_cast<int>((z.imag() - y0_) / cell_), ny_);
        return static_cast<size_t>(gx) * ny_ + gy;
    }

    std::span<const cplx> pts_;
    std::vector<std::vector<size_t>> cells_;
    double cell_ = 1.0, x0_ = 0.0, y0_ = 0.0;
    int nx_ = 1, ny_ = 1;
};

}  // namespace

SpacingSample complex_nn_spacings(std::span<const cplx> eigs) {
    SpacingSample sample;
    auto pts = merge_duplicates(eigs, 1e-12, &sample.merged_duplicates);
    if (pts.size() < 3)
        throw std::invalid_argument("complex_nn_spacings: need at least 3 distinct eigenvalues");
    sample.source_size = static_cast<int>(pts.size());
    NeighborGrid grid(pts);
    sample.raw.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) sample.raw[i] = grid.query(i).d_nn;
    return sample;
}

SpacingSample unfold_complex(std::span<const cplx> eigs) {
    SpacingSample sample;
    auto pts = merge_duplicates(eigs, 1e-12, &sample.merged_duplicates);
    const size_t n = pts.size();
    if (n < 3) throw std::invalid_argument("unfold_complex: need at least 3 distinct eigenvalues");
    sample.source_size = static_cast<int>(n);

    NeighborGrid grid(pts);
    sample.raw.resize(n);
    for (size_t i = 0; i < n; ++i) sample.raw[i] = grid.query(i).d_nn;

    const double mean_s = std::accumulate(sample.raw.begin(), sample.raw.end(), 0.0) / double(n);
    const double sigma = 4.5 * mean_s;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    const double norm = 1.0 / (2.0 * M_PI * sigma * sigma * double(n));

    sample.unfolded.resize(n);
    for (size_t i = 0; i < n; ++i) {
        double density = 0.0;
        for (size_t k = 0; k < n; ++k)
            density += std::exp(-std::norm(pts[i] - pts[k]) * inv_two_sigma2);
        sample.unfolded[i] = sample.raw[i] * std::sqrt(norm * density);
    }
    const double mean_u =
        std::accumulate(sample.unfolded.begin(), sample.unfolded.end(), 0.0) / double(n);
    for (double& s : sample.unfolded) s /= mean_u;
    return sample;
}

RealVector unfold_real(const RealVector& sorted_energies, int poly_degree) {
    const long n = sorted_energies.size();
    if (poly_degree < 1) throw std::invalid_argument("unfold_real: degree must be >= 1");
    if (n < poly_degree + 2)
        throw std::invalid_argument("unfold_real: need at least poly_degree + 2 energies");

    const double lo = sorted_energies(0), hi = sorted_energies(n - 1);
    if (!(hi > lo)) throw DegenerateSpectrumError("unfold_real: degenerate energy range");
    auto normalize = [&](double e) { return 2.0 * (e - lo) / (hi - lo) - 1.0; };

    // Least-squares fit of the cumulative staircase eta(E_j) = j - 1/2.
    RealMatrix vander(n, poly_degree + 1);
    for (long j = 0; j < n; ++j) {
        const double x = normalize(sorted_energies(j));
        double p = 1.0;
        for (int k = 0; k <= poly_degree; ++k) {
            vander(j, k) = p;
            p *= x;
        }
    }
    RealVector target(n);
    for (long j = 0; j < n; ++j) target(j) = double(j) + 0.5;
    RealVector coeff = vander.colPivHouseholderQr().solve(target);

    auto deriv = [&](double x) {
        double acc = 0.0, p = 1.0;
        for (int k = 1; k <= poly_degree; ++k) {
            acc += k * coeff(k) * p;
            p *= x;
        }
        return acc;
    };
    for (int g = 0; g <= 400; ++g) {
        const double x = -1.0 + 2.0 * g / 400.0;
        if (deriv(x) <= 0.0)
            throw NumericalError("unfold_real: fitted staircase is non-monotone over the data "
                                 "range; reduce the polynomial degree");
    }

    RealVector unfolded(n);
    for (long j = 0; j < n; ++j) {
        const double x = normalize(sorted_energies(j));
        double acc = 0.0, p = 1.0;
        for (int k = 0; k <= poly_degree; ++k) {
            acc += coeff(k) * p;
            p *= x;
        }
        unfolded(j) = acc;
    }
    return unfolded;
}

std::vector<cplx> bulk_filter(std::span<const cplx> eigs, double epsilon_im, int* removed) {
    std::vector<cplx> out;
    out.reserve(eigs.size());
    for (cplx z : eigs)
        if (std::abs(z.imag()) >= epsilon_im) out.push_back(z);
    if (removed) *removed = static_cast<int>(eigs.size() - out.size());
    return out;
}

double default_bulk_epsilon(std::span<const cplx> eigs) {
    auto pts = merge_duplicates(eigs, 1e-12);
    if (pts.size() < 3) return 0.0;
    NeighborGrid grid(pts);
    std::vector<double> im_components(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto q = grid.query(i);
        im_components[i] = std::abs((pts[q.nn] - pts[i]).imag());
    }
    std::nth_element(im_components.begin(), im_components.begin() + im_components.size() / 2,
                     im_components.end());
    return 10.0 * im_components[im_components.size() / 2];
}

SpacingSample complex_spacing_ratios(std::span<const cplx> eigs) {
    SpacingSample sample;
    auto pts = merge_duplicates(eigs, 1e-12, &sample.merged_duplicates);
    if (pts.size() < 3)
        throw std::invalid_argument("complex_spacing_ratios: need at least 3 distinct eigenvalues");
    sample.source_size = static_cast<int>(pts.size());
    NeighborGrid grid(pts);
    sample.raw.resize(pts.size());
    sample.ratios.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto q = grid.query(i);
        sample.raw[i] = q.d_nn;
        sample.ratios[i] = (pts[q.nn] - pts[i]) / (pts[q.nnn] - pts[i]);
    }
    return sample;
}

SpacingSample complex_spacing_ratios(std::span<const cplx> eigs,
                                     const std::vector<int>& query_indices) {
    if (eigs.size() < 3)
        throw std::invalid_argument("complex_spacing_ratios: need at least 3 eigenvalues");
    SpacingSample sample;
    sample.source_size = static_cast<int>(eigs.size());
    NeighborGrid grid(eigs);
    sample.raw.reserve(query_indices.size());
    sample.ratios.reserve(query_indices.size());
    for (int i : query_indices) {
        const auto q = grid.query(static_cast<size_t>(i));
        sample.raw.push_back(q.d_nn);
        sample.ratios.push_back((eigs[q.nn] - eigs[static_cast<size_t>(i)]) /
                                (eigs[q.nnn] - eigs[static_cast<size_t>(i)]));
    }
    return sample;
}

SpacingSample unfold_complex(std::span<const cplx> eigs, const std::vector<int>& query_indices) {
    if (eigs.size() < 3) throw std::invalid_argument("unfold_complex: need at least 3 eigenvalues");
    SpacingSample sample;
    sample.source_size = static_cast<int>(eigs.size());
    NeighborGrid grid(eigs);

    // Bandwidth from the query-set mean spacing; density from the full set.
    sample.raw.reserve(query_indices.size());
    for (int i : query_indices) sample.raw.push_back(grid.query(static_cast<size_t>(i)).d_nn);
    const double mean_s =
        std::accumulate(sample.raw.begin(), sample.raw.end(), 0.0) / double(sample.raw.size());
    const double sigma = 4.5 * mean_s;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    const double norm = 1.0 / (2.0 * M_PI * sigma * sigma * double(eigs.size()));

    sample.unfolded.resize(query_indices.size());
    for (size_t qi = 0; qi < query_indices.size(); ++qi) {
        const cplx z = eigs[static_cast<size_t>(query_indices[qi])];
        double density = 0.0;
        for (const cplx w : eigs) density += std::exp(-std::norm(z - w) * inv_two_sigma2);
        sample.unfolded[qi] = sample.raw[qi] * std::sqrt(norm * density);
    }
    const double mean_u = std::accumulate(sample.unfolded.begin(), sample.unfolded.end(), 0.0) /
                          double(sample.unfolded.size());
    for (double& s : sample.unfolded) s /= mean_u;
    return sample;
}

std::vector<int> interior_indices(std::span<const cplx> eigs, double keep_frac) {
    double radius = 0.0;
    for (cplx z : eigs) radius = std::max(radius, std::abs(z));
    const double cut = keep_frac * radius;
    std::vector<int> out;
    for (size_t i = 0; i < eigs.size(); ++i)
        if (std::abs(eigs[i]) <= cut) out.push_back(static_cast<int>(i));
    return out;
}

StatsSummary summarize(const SpacingSample& sample, int nbins, double lo, double hi) {
    StatsSummary out;
    if (!sample.ratios.empty()) {
        double sum_r = 0.0, sum_cos = 0.0;
        for (cplx z : sample.ratios) {
            sum_r += std::abs(z);
            sum_cos += std::cos(std::arg(z));
        }
        out.mean_r = sum_r / double(sample.ratios.size());
        out.neg_mean_cos_theta = -sum_cos / double(sample.ratios.size());
        out.n_points = static_cast<int>(sample.ratios.size());
    }
    const auto& spacings = sample.unfolded.empty() ? sample.raw : sample.unfolded;
    if (!spacings.empty()) {
        out.histogram = make_histogram(spacings, nbins, lo, hi);
        if (out.n_points == 0) out.n_points = static_cast<int>(spacings.size());
    }
    return out;
}

double real_r_statistic(const RealVector& sorted_energies) {
    const long n = sorted_energies.size();
    if (n < 3) throw std::invalid_argument("real_r_statistic: need at least 3 levels");
    double acc = 0.0;
    long count = 0;
    for (long j = 1; j + 1 < n; ++j) {
        const double s_prev = sorted_energies(j) - sorted_energies(j - 1);
        const double s_next = sorted_energies(j + 1) - sorted_energies(j);
        const double hi = std::max(s_prev, s_next);
        if (hi <= 0.0) continue;
        acc += std::min(s_prev, s_next) / hi;
        ++count;
    }
    if (count == 0) throw DegenerateSpectrumError("real_r_statistic: all spacings degenerate");
    return acc / double(count);
}

double reference_p2d(double s) {
    if (s < 0.0) throw std::invalid_argument("reference_p2d: s must be >= 0");
    return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
}

double reference_ginue(double s, int truncation) {
    if (s < 0.0) throw std::invalid_argument("reference_ginue: s must be >= 0");
    if (truncation < 1) throw std::invalid_argument("reference_ginue: truncation must be >= 1");
    if (s == 0.0) return 0.0;
    const double s2 = s * s;

    double log_product = 0.0;
    for (int k = 1; k <= truncation; ++k)
        log_product += std::log(boost::math::gamma_q(double(k + 1), s2));

    double sum = 0.0;
    for (int j = 1; j <= truncation; ++j) {
        const double q = boost::math::gamma_q(double(j + 1), s2);
        if (q <= 0.0) continue;
        const double log_term =
            std::log(2.0) + (2 * j + 1) * std::log(s) - s2 - std::lgamma(double(j + 1)) - std::log(q);
        sum += std::exp(log_term);
    }
    return std::exp(log_product) * sum;
}

double ginue_mean(int truncation) {
    static std::map<int, double> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto it = cache.find(truncation);
    if (it != cache.end()) return it->second;

    // Simpson quadrature of s * p(s) on [0, 6]; the integrand is negligible beyond.
    const int n = 3000;
    const double hi = 6.0, h = hi / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * s * reference_ginue(s, truncation);
    }
    const double mean = acc * h / 3.0;
    cache[truncation] = mean;
    return mean;
}

double reference_ginue_unit_mean(double s, int truncation) {
    const double m = ginue_mean(truncation);
    return m * reference_ginue(m * s, truncation);
}

double distribution_distance(const Histogram& histogram,
                             const std::function<double(double)>& reference_density) {
    const long nbins = histogram.density.size();
    double acc = 0.0;
    for (long b = 0; b < nbins; ++b) {
        const double lo = histogram.edges(b), hi = histogram.edges(b + 1);
        const double ref = (reference_density(lo) + 4.0 * reference_density(0.5 * (lo + hi)) +
                            reference_density(hi)) /
                           6.0;
        acc += (hi - lo) * std::abs(histogram.density(b) - ref);
    }
    return acc;
}

double distribution_distance(const Histogram& a, const Histogram& b) {
    if (a.density.size() != b.density.size())
        throw std::invalid_argument("distribution_distance: histograms use different binnings");
    double acc = 0.0;
    for (long i = 0; i < a.density.size(); ++i)
        acc += (a.edges(i + 1) - a.edges(i)) * std::abs(a.density(i) - b.density(i));
    return acc;
}

DenseVector sample_ginibre_eigenvalues(int n, Rng& rng) {
    DenseMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = rng.complex_gaussian();
    return linalg::eig_nonhermitian(std::move(m), false).values;
}

std::vector<cplx> ginibre_bulk(const DenseVector& eigs, double keep_frac) {
    const double radius = keep_frac * std::sqrt(double(eigs.size()));
    std::vector<cplx> out;
    out.reserve(static_cast<size_t>(eigs.size()));
    for (long j = 0; j < eigs.size(); ++j)
        if (std::abs(eigs(j)) <= radius) out.push_back(eigs(j));
    return out;
}

RealVector sample_gue_eigenvalues(int n, Rng& rng) {
    DenseMatrix h(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = rng.gaussian();
        for (int k = j + 1; k < n; ++k) {
            h(j, k) = rng.complex_gaussian();
            h(k, j) = std::conj(h(j, k));
        }
    }
    return linalg::eig_hermitian(std::move(h), false).values;
}

RealVector sample_goe_eigenvalues(int n, Rng& rng) {
    RealMatrix h(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = rng.gaussian() * M_SQRT2;
        for (int k = j + 1; k < n; ++k) h(j, k) = h(k, j) = rng.gaussian();
    }
    return linalg::eig_real_symmetric_values(std::move(h));
}

std::vector<cplx> sample_uniform_disk(int n, Rng& rng) {
    std::vector<cplx> pts(static_cast<size_t>(n));
    for (auto& z : pts) {
        const double r = std::sqrt(rng.uniform());
        const double phi = 2.0 * M_PI * rng.uniform();
        z = std::polar(r, phi);
    }
    return pts;
}

}  // namespace dqc
