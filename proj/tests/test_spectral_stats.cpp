#include "dqc/spectral_stats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dqc;

TEST_CASE("unit square corners all have spacing 1") {
    const std::vector<cplx> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const auto sample = complex_nn_spacings(pts);
    for (double s : sample.raw) CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("collinear points reduce to 1D adjacent gaps") {
    const std::vector<cplx> pts{{0.0, 0}, {0.5, 0}, {1.7, 0}, {2.0, 0}};
    const auto sample = complex_nn_spacings(pts);
    CHECK(sample.raw[0] == doctest::Approx(0.5));
    CHECK(sample.raw[1] == doctest::Approx(0.5));
    CHECK(sample.raw[2] == doctest::Approx(0.3));
    CHECK(sample.raw[3] == doctest::Approx(0.3));
}

TEST_CASE("grid search equals the exhaustive pairwise scan on 500 random points") {
    Rng rng(99);
    std::vector<cplx> pts(500);
    for (auto& z : pts) z = cplx(rng.uniform() * 3.0 - 1.5, rng.uniform() * 2.0 - 1.0);
    const auto fast_nn = complex_nn_spacings(pts);
    const auto fast_ratios = complex_spacing_ratios(pts);
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto brute = testing::brute_force_two_nearest(pts, i);
        CHECK(fast_nn.raw[i] == doctest::Approx(brute.d_nn).epsilon(1e-14));
        const cplx z_brute = (pts[brute.nn] - pts[i]) / (pts[brute.nnn] - pts[i]);
        CHECK(std::abs(fast_ratios.ratios[i] - z_brute) < 1e-14);
    }
}

TEST_CASE("near-duplicates are merged and counted") {
    std::vector<cplx> pts{{0, 0}, {1, 0}, {1.0 + 1e-15, 0}, {0, 1}};
    int merged = 0;
    const auto out = merge_duplicates(pts, 1e-12, &merged);
    CHECK(out.size() == 3);
    CHECK(merged == 1);
    const auto sample = complex_nn_spacings(pts);
    CHECK(sample.merged_duplicates == 1);
    for (double s : sample.raw) CHECK(s > 0.5);
}

TEST_CASE("unfold_complex produces unit mean regardless of scale") {
    Rng rng(3);
    std::vector<cplx> pts(400);
    for (auto& z : pts) z = cplx(rng.gaussian(), rng.gaussian());
    for (double scale : {1.0, 1e-6, 1e6}) {
        std::vector<cplx> scaled(pts);
        for (auto& z : scaled) z *= scale;
        const auto sample = unfold_complex(scaled);
        double mean = 0.0;
        for (double s : sample.unfolded) mean += s;
        mean /= double(sample.unfolded.size());
        CHECK(std::abs(mean - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(unfold_complex(std::vector<cplx>{{0, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("unfold_real: equally spaced energies with degree 1 give unit gaps") {
    RealVector e(20);
    for (int j = 0; j < 20; ++j) e(j) = 3.0 + 0.7 * j;
    const RealVector xi = unfold_real(e, 1);
    for (int j = 0; j + 1 < 20; ++j)
        CHECK(xi(j + 1) - xi(j) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unfold_real rejects non-monotone fits") {
    // Two dense clusters force oscillatory high-degree fits.
    RealVector e(24);
    for (int j = 0; j < 12; ++j) e(j) = j * 1e-3;
    for (int j = 0; j < 12; ++j) e(12 + j) = 10.0 + j * 1e-3;
    CHECK_THROWS_AS(unfold_real(e, 9), NumericalError);
}

TEST_CASE("1D Poisson r statistic near 2 ln 2 - 1") {
    Rng rng(7);
    std::vector<double> u(20000);
    for (auto& x : u) x = rng.uniform();
    std::sort(u.begin(), u.end());
    const RealVector e = Eigen::Map<const RealVector>(u.data(), static_cast<long>(u.size()));
    CHECK(real_r_statistic(e) == doctest::Approx(0.386).epsilon(0.026));
}

TEST_CASE("bulk filter basics") {
    const std::vector<cplx> pts{{0, 0}, {1, 0.3}, {1, -0.3}, {2, 0.01}, {2, -0.01}};
    SUBCASE("epsilon 0 is the identity") {
        int removed = -1;
        const auto out = bulk_filter(pts, 0.0, &removed);
        CHECK(out.size() == pts.size());
        CHECK(removed == 0);
    }
    SUBCASE("conjugate-symmetric input stays conjugate-symmetric") {
        const auto out = bulk_filter(pts, 0.1);
        std::vector<cplx> conj_out;
        for (cplx z : out) conj_out.push_back(std::conj(z));
        CHECK(testing::multiset_match_distance(out, conj_out) < 1e-15);
    }
}

TEST_CASE("bulk filter removes exactly the real ladder of the damped oscillator") {
    // Analytic spectrum i Delta (m - n) - gamma (n + m) / 2.
    const double delta = 1.0, gamma = 0.6;
    std::vector<cplx> spectrum;
    int real_count = 0;
    for (int n = 0; n <= 5; ++n)
        for (int m = 0; m <= 5; ++m) {
            spectrum.emplace_back(-0.5 * gamma * (n + m), delta * (m - n));
            if (n == m) ++real_count;
        }
    int removed = 0;
    const auto out = bulk_filter(spectrum, 0.5 * delta, &removed);
    CHECK(removed == real_count);
    for (cplx z : out) CHECK(std::abs(z.imag()) >= 0.5);
}

TEST_CASE("default bulk epsilon is 10x the median |Im| NN component") {
    const std::vector<cplx> pts{{0, 0}, {0, 0.1}, {0, 0.25}, {1, 0}, {1, 0.12}, {1, 0.3}};
    CHECK(default_bulk_epsilon(pts) > 0.0);
}

TEST_CASE("complex spacing ratios: 2D Poisson reference values") {
    Rng rng(1);
    auto pts = sample_uniform_disk(6200, rng);
    const auto queries = interior_indices(pts, 0.9);
    const auto summary = summarize(complex_spacing_ratios(pts, queries));
    CHECK(summary.mean_r == doctest::Approx(0.66).epsilon(0.023));
    CHECK(std::abs(summary.neg_mean_cos_theta) < 0.015);
    for (cplx z : complex_spacing_ratios(pts, queries).ratios) {
        CHECK(std::abs(z) <= 1.0 + 1e-12);
    }
}

TEST_CASE("ratio statistics are invariant under affine maps of the spectrum") {
    Rng rng(17);
    std::vector<cplx> pts(200);
    for (auto& z : pts) z = cplx(rng.gaussian(), rng.gaussian());
    const auto base = complex_spacing_ratios(pts);
    const cplx a{0.7, -1.9};
    const cplx b{42.0, 13.0};
    std::vector<cplx> mapped(pts);
    for (auto& z : mapped) z = a * z + b;
    const auto trans = complex_spacing_ratios(mapped);
    REQUIRE(base.ratios.size() == trans.ratios.size());
    for (size_t j = 0; j < base.ratios.size(); ++j)
        CHECK(std::abs(base.ratios[j] - trans.ratios[j]) < 1e-12);
}

TEST_CASE("p_2D reference: endpoints, normalization and unit mean via quadrature") {
    CHECK(reference_p2d(0.0) == 0.0);
    CHECK_THROWS_AS(reference_p2d(-0.1), std::invalid_argument);
    const double integral = testing::simpson([](double s) { return reference_p2d(s); }, 0, 8);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
    const double mean = testing::simpson([](double s) { return s * reference_p2d(s); }, 0, 8);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("GinUE reference: truncation convergence and first moment") {
    for (double s = 0.0; s <= 4.0; s += 0.25)
        CHECK(std::abs(reference_ginue(s, 100) - reference_ginue(s, 200)) < 1e-8);
    const double integral = testing::simpson([](double s) { return reference_ginue(s); }, 0, 6);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ginue_mean() == doctest::Approx(1.1429294269).epsilon(1e-8));
    const double unit_mean = testing::simpson(
        [](double s) { return s * reference_ginue_unit_mean(s); }, 0, 6);
    CHECK(unit_mean == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("distribution distance: identity, symmetry, and the p2D/GinUE gap") {
    Rng rng(4);
    std::vector<double> samples(3000);
    for (auto& s : samples) s = -std::log(1.0 - rng.uniform());
    const Histogram h = make_histogram(samples, 30, 0.0, 4.0);
    CHECK(distribution_distance(h, h) == 0.0);

    // Bin-averaged p2D as an empirical stand-in; quadrature oracle gives 0.5716.
    Histogram p2d_binned;
    p2d_binned.edges = RealVector::LinSpaced(41, 0.0, 4.0);
    p2d_binned.density.resize(40);
    for (int b = 0; b < 40; ++b) {
        const double lo = p2d_binned.edges(b), hi = p2d_binned.edges(b + 1);
        p2d_binned.density(b) =
            testing::simpson([](double s) { return reference_p2d(s); }, lo, hi, 64) / (hi - lo);
    }
    const double gap =
        distribution_distance(p2d_binned, [](double s) { return reference_ginue_unit_mean(s); });
    CHECK(gap > 0.3);
    CHECK(gap == doctest::Approx(0.5716).epsilon(0.02));
}

TEST_CASE("histogram density integrates to one") {
    Rng rng(5);
    std::vector<double> samples(5000);
    for (auto& s : samples) s = 4.0 * rng.uniform() * rng.uniform();
    const Histogram h = make_histogram(samples, 50, 0.0, 4.0);
    double integral = 0.0;
    for (long b = 0; b < h.density.size(); ++b)
        integral += h.density(b) * (h.edges(b + 1) - h.edges(b));
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE("slow") {

TEST_CASE("uniform complex points: unfolded histogram close to p_2D (N = 5000)") {
    Rng rng(1);
    auto pts = sample_uniform_disk(6200, rng);
    const auto queries = interior_indices(pts, 0.9);
    REQUIRE(queries.size() >= 5000);
    const auto unfolded = unfold_complex(pts, queries);
    const double d = distribution_distance(make_histogram(unfolded.unfolded, 16, 0.0, 4.0),
                                           [](double s) { return reference_p2d(s); });
    CHECK(d < 0.06);
}

TEST_CASE("Ginibre bulk: indicators and unfolded histogram near the GinUE law") {
    // Precision +-0.01 asserts on >= 2000 bulk eigenvalues live in the
    // acceptance suite; this covers the pipeline at reduced cost.
    double r_acc = 0, cos_acc = 0;
    int n_ratios = 0;
    std::vector<double> pooled;
    for (uint64_t seed = 11; seed < 14; ++seed) {
        Rng rng(seed);
        const DenseVector eigs = sample_ginibre_eigenvalues(1000, rng);
        std::vector<cplx> all(eigs.data(), eigs.data() + eigs.size());
        const auto queries = interior_indices(all, 0.85);
        const auto ratios = complex_spacing_ratios(all, queries);
        for (cplx z : ratios.ratios) {
            r_acc += std::abs(z);
            cos_acc += std::cos(std::arg(z));
            ++n_ratios;
        }
        const auto unfolded = unfold_complex(all, queries);
        pooled.insert(pooled.end(), unfolded.unfolded.begin(), unfolded.unfolded.end());
    }
    CHECK(r_acc / n_ratios == doctest::Approx(0.74).epsilon(0.02));
    CHECK(-cos_acc / n_ratios == doctest::Approx(0.24).epsilon(0.12));
    const double d = distribution_distance(make_histogram(pooled, 16, 0.0, 4.0),
                                           [](double s) { return reference_ginue_unit_mean(s); });
    CHECK(d < 0.05);
}

TEST_CASE("GOE r statistic matches the Wigner-Dyson value 0.53") {
    Rng rng(42);
    const RealVector goe = sample_goe_eigenvalues(2000, rng);
    const double r = real_r_statistic(goe.segment(200, 1600));
    CHECK(r == doctest::Approx(0.5307).epsilon(0.019));
}

TEST_CASE("GUE r statistic sits at 0.60, distinct from the Wigner-Dyson 0.53") {
    Rng rng(43);
    const RealVector gue = sample_gue_eigenvalues(2000, rng);
    const double r = real_r_statistic(gue.segment(200, 1600));
    CHECK(r == doctest::Approx(0.5996).epsilon(0.02));
}

}  // TEST_SUITE("slow")
