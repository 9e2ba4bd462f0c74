#pragma once

#include <span>
#include <vector>

#include "langesim/types.hpp"

namespace langesim {

struct PolyFit {
    std::vector<double> coef;       // constant term first
    std::vector<double> std_error;  // sqrt of the covariance diagonal
    Eigen::MatrixXd covariance;
    double rss = 0.0;               // weighted residual sum of squares
    int dof = 0;
};

// Least squares of y against 1, x, ..., x^degree.
//
// Without weights this is ordinary least squares and the covariance is
// scaled by rss / dof. With `sigma` the rows are weighted by 1 / sigma^2;
// `absolute_sigma` then takes the covariance as (X^T W X)^{-1}, otherwise it
// is rescaled by the reduced chi-square. Throws RankDeficientError when
// fewer than degree + 1 distinct abscissae are given.
PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree,
                std::span<const double> sigma = {}, bool absolute_sigma = false);

// Straight line through the origin, y = c x. Covariance scaled by rss / dof.
PolyFit fit_through_origin(std::span<const double> x, std::span<const double> y);

int count_distinct(std::span<const double> x);

// Streaming mean and variance (Welford).
class RunningStats {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const RunningStats& o);

    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    // Unbiased sample variance; 0 for fewer than two samples.
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace langesim
