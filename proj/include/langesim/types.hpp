#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace langesim {

// Spatial dimension is a runtime value bounded by kMaxDim so that every
// vector lives on the stack.
inline constexpr int kMaxDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using CVec = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A trajectory produced a non-finite phase-space component (CLI exit code 3).
class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(const std::string& what, std::int64_t step)
        : std::runtime_error(what), step_(step) {}
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

// Statistics requested from an accumulator that has too few samples.
class EmptyBinError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Least-squares design matrix without full column rank.
class RankDeficientError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AsymmetryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace langesim
