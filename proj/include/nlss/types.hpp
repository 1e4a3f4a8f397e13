#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlss {

using cplx = std::complex<double>;
using CPair = std::array<cplx, 2>;

constexpr double kPi = std::numbers::pi;

// Bad input: CLI maps to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical procedure failed to converge: exit code 3.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ground state does not exist (g_min >= 0).
struct NoGroundState : ValidationError {
    using ValidationError::ValidationError;
};

inline double norm2(const CPair& z) { return std::norm(z[0]) + std::norm(z[1]); }

inline CPair scale(const CPair& z, double s) { return {z[0] * s, z[1] * s}; }

inline CPair normalized(const CPair& z) { return scale(z, 1.0 / std::sqrt(norm2(z))); }

}  // namespace nlss
