// Common aliases, error types and the reproducible RNG used across the library.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dqc {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using SparseCMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr cplx IM{0.0, 1.0};

/// Numerical failure (solver breakdown, blow-up, non-convergence). CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Refusal to start a computation that would exceed the memory budget. CLI exit code 4.
struct ResourceGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trajectory step size too large for the requested jump-probability bound.
struct StepSizeError : NumericalError {
    using NumericalError::NumericalError;
};

/// Steady state not unique within tolerance.
struct MultipleSteadyStatesError : NumericalError {
    using NumericalError::NumericalError;
};

/// Spectrum too degenerate for ratio statistics.
struct DegenerateSpectrumError : NumericalError {
    using NumericalError::NumericalError;
};

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** with portable uniform/gaussian draws, so that seeded results do
/// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    /// Independent stream for trajectory `stream` of an ensemble with `base_seed`;
    /// reproducible regardless of scheduling order.
    static Rng stream(uint64_t base_seed, uint64_t stream_index) {
        uint64_t sm = base_seed ^ (0x6a09e667f3bcc909ULL + stream_index * 0x9e3779b97f4a7c15ULL);
        return Rng(splitmix64(sm));
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal (Box-Muller, spare cached).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

    /// Complex standard normal, E|z|^2 = 1.
    cplx complex_gaussian() { return {gaussian() * M_SQRT1_2, gaussian() * M_SQRT1_2}; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dqc
