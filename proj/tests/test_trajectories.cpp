#include "dqc/trajectories.hpp"

#include "dqc/liouvillian.hpp"
#include "dqc/observables.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dqc;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

}  // namespace

TEST_CASE("no jump operators: step is the normalized Euler-Schroedinger update") {
    const ModelSpec model = build_kerr_resonator(0.7, 1.0, 1.1, 0.0, 4);
    const UnravelingOps ops = prepare_unraveling(model);
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    TrajectoryState state(coherent_state(5, 0.4), 1);
    const DenseVector psi0 = state.psi;
    step(state, ops, cfg);
    DenseVector expected = psi0 - IM * cfg.dt * (model.hamiltonian.dense() * psi0);
    expected.normalize();
    CHECK((state.psi - expected).norm() < 1e-14);
    CHECK(state.jump_log.empty());
}

TEST_CASE("damped oscillator from |1>: exactly one jump, landing on |0>") {
    const ModelSpec model = build_kerr_resonator(0.5, 0.0, 0.0, 1.0, 3);
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    const auto grid = linspace(0.0, 20.0, 5);
    for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto result = run_trajectory(model, fock_state(4, 1), grid, seed, cfg);
        REQUIRE(result.jump_log.size() == 1);
        // Stationary on |0> up to the phase accumulated before the jump.
        CHECK(std::abs(result.samples.back().psi(0)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("norm preserved to 1e-10 after every step") {
    BoseHubbardParams p;
    p.delta = 1.0;
    p.u = 1.0;
    p.f = 2.0;
    p.gamma = 1.0;
    p.n_sites = 1;
    p.n_c = 6;
    const ModelSpec model = build_bose_hubbard(p);
    const UnravelingOps ops = prepare_unraveling(model);
    TrajectoryConfig cfg;
    cfg.dt = 5e-4;
    TrajectoryState state(coherent_state(7, 0.8), 17);
    for (int k = 0; k < 3000; ++k) {
        step(state, ops, cfg);
        REQUIRE(std::abs(state.psi.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("jump channel frequencies follow p_mu") {
    // Qubit with decay (0.7) and dephasing (0.2); from |+>, the analytic
    // channel weights are 0.35 and 0.2.
    HilbertSpace space{2};
    ModelSpec model{space, Operator(space, DenseMatrix(DenseMatrix::Zero(2, 2))), {}, "toy"};
    model.jumps.push_back({pauli_minus(), 0.7});
    model.jumps.push_back({pauli_z(), 0.2});
    const UnravelingOps ops = prepare_unraveling(model);
    TrajectoryConfig cfg;
    cfg.dt = 2e-2;

    DenseVector plus(2);
    plus << M_SQRT1_2, M_SQRT1_2;
    const double p_decay = 0.35 / 0.55;

    int jumps = 0, decays = 0;
    Rng seeder(5);
    for (int trial = 0; trial < 40000; ++trial) {
        TrajectoryState state(plus, seeder.next());
        step(state, ops, cfg);
        if (!state.jump_log.empty()) {
            ++jumps;
            if (state.jump_log[0].channel == 0) ++decays;
        }
    }
    REQUIRE(jumps > 200);
    const double freq = double(decays) / jumps;
    const double sigma = std::sqrt(p_decay * (1 - p_decay) / jumps);
    CHECK(std::abs(freq - p_decay) < 3.0 * sigma);
}

TEST_CASE("step-size error names a workable dt") {
    const ModelSpec model = build_kerr_resonator(0.5, 0.0, 0.0, 1.0, 9);
    const UnravelingOps ops = prepare_unraveling(model);
    TrajectoryConfig cfg;
    cfg.dt = 0.1;  // dp = gamma <n> dt = 0.9 from |9>
    TrajectoryState state(fock_state(10, 9), 3);
    CHECK_THROWS_AS(step(state, ops, cfg), StepSizeError);
}

TEST_CASE("identical seeds give identical jump logs") {
    const ModelSpec model = build_kerr_resonator(0.3, 1.0, 1.5, 0.8, 5);
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    const auto grid = linspace(0.0, 5.0, 11);
    const auto a = run_trajectory(model, coherent_state(6, 0.9), grid, 99, cfg);
    const auto b = run_trajectory(model, coherent_state(6, 0.9), grid, 99, cfg);
    REQUIRE(a.jump_log.size() == b.jump_log.size());
    for (size_t k = 0; k < a.jump_log.size(); ++k) {
        CHECK(a.jump_log[k].t == b.jump_log[k].t);
        CHECK(a.jump_log[k].channel == b.jump_log[k].channel);
    }
    CHECK((a.samples.back().psi - b.samples.back().psi).norm() == 0.0);
}

TEST_CASE("zero dissipation matches RK4 Schroedinger evolution to O(dt)") {
    const ModelSpec model = build_kerr_resonator(0.8, 1.0, 1.0, 0.0, 7);
    TrajectoryConfig cfg;
    cfg.dt = 1e-4;
    const auto grid = linspace(0.0, 1.0, 2);
    const auto result = run_trajectory(model, coherent_state(8, 0.7), grid, 1, cfg);
    const DenseVector oracle =
        testing::rk4_schroedinger(model.hamiltonian.dense(), coherent_state(8, 0.7), 1.0, 1e-4);
    const DenseMatrix n = number_operator(8).dense();
    const double n_traj = result.samples.back().psi.dot(n * result.samples.back().psi).real();
    const double n_rk4 = oracle.dot(n * oracle).real();
    CHECK(std::abs(n_traj - n_rk4) < 5e-3);

    SUBCASE("second-order no-jump propagator tightens the error") {
        TrajectoryConfig cfg2 = cfg;
        cfg2.second_order = true;
        const auto result2 = run_trajectory(model, coherent_state(8, 0.7), grid, 1, cfg2);
        const double n2 = result2.samples.back().psi.dot(n * result2.samples.back().psi).real();
        CHECK(std::abs(n2 - n_rk4) < std::abs(n_traj - n_rk4));
    }
}

TEST_CASE("cutoff validity warning via cutoff doubling") {
    BoseHubbardParams p;
    p.delta = 0.0;
    p.u = 0.0;
    p.f = 3.0;
    p.gamma = 0.5;
    p.n_sites = 1;
    TrajectoryConfig cfg;
    cfg.dt = 2e-4;
    const auto grid = linspace(0.0, 2.0, 5);

    p.n_c = 3;  // far too small for F/gamma = 6 drive
    const auto tight = run_trajectory(build_bose_hubbard(p), fock_state(4, 0), grid, 7, cfg);
    CHECK(tight.cutoff_warning);

    p.n_c = 40;
    const auto roomy = run_trajectory(build_bose_hubbard(p), fock_state(41, 0), grid, 7, cfg);
    CHECK_FALSE(roomy.cutoff_warning);
}

TEST_CASE("ensemble: M=1 returns the pure projector; trace is exactly 1") {
    const ModelSpec model = build_kerr_resonator(0.5, 1.0, 1.0, 0.7, 4);
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    const auto grid = linspace(0.0, 1.0, 3);
    const auto ensemble = ensemble_average(model, fock_state(5, 0), grid, 1, 11, cfg);
    for (const auto& rho : ensemble.rho_mean) {
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
        CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((rho - rho.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("ensemble average is reproducible and independent of thread count") {
    const ModelSpec model = build_kerr_resonator(0.4, 1.0, 1.2, 0.6, 4);
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    const auto grid = linspace(0.0, 2.0, 3);
    const auto serial = ensemble_average(model, fock_state(5, 0), grid, 8, 21, cfg, {}, 1);
    const auto threaded = ensemble_average(model, fock_state(5, 0), grid, 8, 21, cfg, {}, 2);
    for (size_t ti = 0; ti < grid.size(); ++ti)
        CHECK((serial.rho_mean[ti] - threaded.rho_mean[ti]).norm() == 0.0);
}

TEST_SUITE("slow") {

TEST_CASE("Kerr ensemble <n>(t) matches the master equation within 3 standard errors") {
    const double gamma = 1.0;
    const ModelSpec model = build_kerr_resonator(1.0, 1.0, 2.0, gamma, 9);
    const LiouvillianSpectrum spec = diagonalize(model);
    TrajectoryConfig cfg;
    cfg.dt = 5e-4;
    // Grid starts after the first-jump randomization; before it the ensemble
    // variance vanishes and the O(dt) discretization bias dominates any SE.
    const auto grid = linspace(1.0, 8.0, 25);

    const DenseMatrix n_op = number_operator(10).dense();
    const auto ensemble = ensemble_average(model, fock_state(10, 0), grid, 600, 4242, cfg,
                                           {{"n", n_op}});
    DenseMatrix rho0 = DenseMatrix::Zero(10, 10);
    rho0(0, 0) = 1.0;
    int outside = 0;
    for (size_t ti = 0; ti < grid.size(); ++ti) {
        const DenseMatrix rho_exact = propagate(spec, rho0, grid[ti]);
        const double n_exact = expectation_real(rho_exact, n_op);
        const double n_mc = ensemble.observables[0].mean(static_cast<long>(ti));
        const double se = ensemble.observables[0].std_error(static_cast<long>(ti));
        if (std::abs(n_mc - n_exact) > 3.0 * se) ++outside;
    }
    // With 25 grid points, allow a single 3-sigma excursion.
    CHECK(outside <= 1);
}

TEST_CASE("long-time ensemble matches the steady state within 3 standard errors") {
    const ModelSpec model = build_kerr_resonator(0.6, 1.0, 1.4, 1.0, 7);
    const DenseMatrix rho_ss = steady_state(diagonalize(model)).dense();
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    const DenseMatrix n_op = number_operator(8).dense();
    const auto ensemble = ensemble_average(model, fock_state(8, 0), {25.0}, 400, 7, cfg,
                                           {{"n", n_op}});
    const double n_ss = expectation_real(rho_ss, n_op);
    CHECK(std::abs(ensemble.observables[0].mean(0) - n_ss) <
          3.0 * ensemble.observables[0].std_error(0));
}

TEST_CASE("observable error scales as 1/sqrt(M) within a factor 1.5") {
    const ModelSpec model = build_kerr_resonator(0.8, 1.0, 1.6, 1.0, 6);
    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    const DenseMatrix n_op = number_operator(7).dense();
    std::vector<double> ses;
    for (int m : {100, 400, 1600}) {
        const auto ensemble =
            ensemble_average(model, fock_state(7, 0), {2.0}, m, 1234, cfg, {{"n", n_op}});
        ses.push_back(ensemble.observables[0].std_error(0));
    }
    CHECK(ses[0] / ses[1] > 2.0 / 1.5);
    CHECK(ses[0] / ses[1] < 2.0 * 1.5);
    CHECK(ses[1] / ses[2] > 2.0 / 1.5);
    CHECK(ses[1] / ses[2] < 2.0 * 1.5);
}

}  // TEST_SUITE("slow")
