#include "langesim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace langesim {

int count_distinct(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

namespace {

PolyFit solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w, bool scale_by_rss) {
    const Eigen::Index n = X.rows(), k = X.cols();
    const Eigen::VectorXd sw = w.array().sqrt();
    const Eigen::MatrixXd A = sw.asDiagonal() * X;
    const Eigen::VectorXd b = sw.asDiagonal() * y;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < k) throw RankDeficientError("least squares: design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(b);
    const Eigen::VectorXd r = b - A * beta;

    PolyFit fit;
    fit.coef.assign(beta.data(), beta.data() + k);
    fit.rss = r.squaredNorm();
    fit.dof = static_cast<int>(n - k);
    const Eigen::MatrixXd AtA = A.transpose() * A;
    fit.covariance = AtA.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    if (scale_by_rss) {
        const double s2 = fit.dof > 0 ? fit.rss / fit.dof : 0.0;
        fit.covariance *= s2;
    }
    fit.std_error.resize(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) fit.std_error[static_cast<std::size_t>(j)] = std::sqrt(fit.covariance(j, j));
    return fit;
}

}  // namespace

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree, std::span<const double> sigma,
                bool absolute_sigma) {
    if (x.size() != y.size()) throw std::invalid_argument("polyfit: x and y differ in length");
    if (!sigma.empty() && sigma.size() != x.size()) throw std::invalid_argument("polyfit: sigma has the wrong length");
    if (degree < 0) throw std::invalid_argument("polyfit: negative degree");
    if (count_distinct(x) < degree + 1)
        throw RankDeficientError("least squares: need at least " + std::to_string(degree + 1) + " distinct abscissae");

    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd X(n, degree + 1);
    Eigen::VectorXd Y(n), W(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double xp = 1.0;
        for (int j = 0; j <= degree; ++j) {
            X(i, j) = xp;
            xp *= x[static_cast<std::size_t>(i)];
        }
        Y(i) = y[static_cast<std::size_t>(i)];
        if (sigma.empty()) {
            W(i) = 1.0;
        } else {
            const double s = sigma[static_cast<std::size_t>(i)];
            if (!(s > 0.0)) throw std::invalid_argument("polyfit: sigma must be positive");
            W(i) = 1.0 / (s * s);
        }
    }
    return solve(X, Y, W, sigma.empty() || !absolute_sigma);
}

PolyFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("polyfit: x and y differ in length");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        X(i, 0) = x[static_cast<std::size_t>(i)];
        Y(i) = y[static_cast<std::size_t>(i)];
    }
    return solve(X, Y, Eigen::VectorXd::Ones(n), true);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
}

}  // namespace langesim
