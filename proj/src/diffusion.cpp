#include "langesim/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "langesim/stats.hpp"

namespace langesim {

void DisplacementSet::merge(const DisplacementSet& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("DisplacementSet::merge: dimension mismatch");
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

DiffusionEstimate estimate_from_displacements(const DisplacementSet& set, double tau_sim) {
    const std::int64_t M = set.size();
    if (M < 2) throw EmptyBinError("diffusion estimate: need at least two replicas");
    if (!(tau_sim > 0.0)) throw ConfigError("diffusion.tau_sim: must be positive");
    const int d = set.dim();
    const double inv_m = 1.0 / static_cast<double>(M);

    Vec mean = Vec::Zero(d);
    for (std::int64_t r = 0; r < M; ++r)
        for (int k = 0; k < d; ++k) mean(k) += set(r, k);
    mean *= inv_m;

    Mat cov = Mat::Zero(d, d);
    Mat fourth = Mat::Zero(d, d);  // (1/M) sum (x_j - m_j)^2 (x_k - m_k)^2
    for (std::int64_t r = 0; r < M; ++r) {
        double c[kMaxDim];
        for (int k = 0; k < d; ++k) c[k] = set(r, k) - mean(k);
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) {
                const double prod = c[j] * c[k];
                cov(j, k) += prod;
                fourth(j, k) += prod * prod;
            }
    }

    DiffusionEstimate est;
    est.replicas = M;
    est.tau_sim = tau_sim;
    est.drift = mean / tau_sim;
    est.drift_std_error = Vec(d);
    est.diffusion = Mat(d, d);
    est.diffusion_std_error = Mat(d, d);
    const double two_tau = 2.0 * tau_sim;
    for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) {
            const double c = cov(j, k) * inv_m;
            const double var_c = std::max(0.0, fourth(j, k) * inv_m - c * c) * inv_m;
            est.diffusion(j, k) = est.diffusion(k, j) = c / two_tau;
            est.diffusion_std_error(j, k) = est.diffusion_std_error(k, j) = std::sqrt(var_c) / two_tau;
        }
        const double sample_var = cov(j, j) / static_cast<double>(M - 1);
        est.drift_std_error(j) = std::sqrt(sample_var * inv_m) / tau_sim;
    }
    est.eigenvalues = spectrum(est.diffusion);
    est.nonpositive = est.eigenvalues.back() <= 0.0;
    return est;
}

std::vector<double> spectrum(const Mat& D) {
    if (D.rows() != D.cols()) throw std::invalid_argument("spectrum: matrix is not square");
    const double norm = D.norm();
    if ((D - D.transpose()).norm() > 1e-12 * norm) throw AsymmetryError("spectrum: matrix is not symmetric");
    std::vector<double> ev;
    if (D.rows() == 2) {
        const double half_tr = 0.5 * (D(0, 0) + D(1, 1));
        const double half_diff = 0.5 * (D(0, 0) - D(1, 1));
        const double r = std::hypot(half_diff, D(0, 1));
        ev = {half_tr + r, half_tr - r};
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> eig(D, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < D.rows(); ++i) ev.push_back(eig.eigenvalues()(i));
        std::sort(ev.begin(), ev.end(), std::greater<>());
    }
    return ev;
}

PhaseState draw_initial_state(const SystemParams& params, RandomStream& rng) {
    const int d = params.dim();
    Vec q(d), g(d);
    for (int k = 0; k < d; ++k) q(k) = params.cell()(k) * rng.uniform();
    rng.fill_normal(g);
    Vec p(d);
    if (const auto m = params.scalar_mass()) {
        p = std::sqrt(*m / params.beta()) * g;
    } else {
        const Mat cov = params.mass() / params.beta();
        p = cov.llt().matrixL() * g;
    }
    return PhaseState::at(q, p, 0);
}

ReplicaPlan make_replica_plan(const SystemParams& params, std::int64_t replicas, double tau_neq, double tau_sim) {
    if (replicas < 2) throw ConfigError("diffusion.replicas: need at least 2 replicas");
    if (!(tau_sim > 0.0)) throw ConfigError("diffusion.tau_sim: must be positive");
    if (!(tau_neq >= 0.0)) throw ConfigError("diffusion.tau_neq: must be non-negative");
    const auto sim = whole_steps(tau_sim, params.dt());
    if (!sim) throw ConfigError("diffusion.tau_sim: must be an integer multiple of dt");
    ReplicaPlan plan;
    plan.replicas = replicas;
    plan.sample_steps = *sim;
    if (tau_neq > 0.0) {
        if (!whole_steps(tau_neq, params.period()))
            throw ConfigError("diffusion.tau_neq: must be an integer multiple of the period");
        const auto neq = whole_steps(tau_neq, params.dt());
        if (!neq) throw ConfigError("diffusion.tau_neq: must be an integer multiple of dt");
        plan.burn_in_steps = *neq;
    }
    return plan;
}

DisplacementSet replica_displacements(const SplittingIntegrator& integrator, const ReplicaPlan& plan,
                                      std::uint64_t master_seed, const ExecPolicy& policy,
                                      std::int64_t first_replica) {
    const SystemParams& params = integrator.params();
    const int d = params.dim();
    std::vector<Vec> rows(static_cast<std::size_t>(plan.replicas));
    for_each_index(policy, plan.replicas, [&](std::int64_t i) {
        const std::int64_t id = first_replica + i;
        RandomStream rng = derive_stream(master_seed, static_cast<std::uint64_t>(id));
        PhaseState s = draw_initial_state(params, rng);
        try {
            s = integrator.run(std::move(s), plan.burn_in_steps, rng);
            s.Q = s.q;
            s.winding.setZero();
            const Vec start = s.Q;
            s = integrator.run(std::move(s), plan.sample_steps, rng);
            rows[static_cast<std::size_t>(i)] = s.Q - start;
        } catch (const NumericalBlowup& e) {
            throw NumericalBlowup("replica " + std::to_string(id) + ": " + e.what(), e.step());
        }
    });
    DisplacementSet set(d);
    for (const auto& r : rows) set.add(r);
    return set;
}

DiffusionEstimate estimate_drift_diffusion(const SystemParams& params, const Potential& pot, const ForceField& field,
                                           double eta, std::int64_t replicas, double tau_neq, double tau_sim,
                                           std::uint64_t master_seed, const ExecPolicy& policy) {
    const ReplicaPlan plan = make_replica_plan(params, replicas, tau_neq, tau_sim);
    const SplittingIntegrator integrator(params, pot, field, eta);
    const DisplacementSet set = replica_displacements(integrator, plan, master_seed, policy);
    DiffusionEstimate est = estimate_from_displacements(set, static_cast<double>(plan.sample_steps) * params.dt());
    est.tau_neq = static_cast<double>(plan.burn_in_steps) * params.dt();
    return est;
}

QuadraticFit quadratic_fit(std::span<const double> etas, std::span<const double> values,
                           std::span<const double> errs) {
    const PolyFit p = polyfit(etas, values, 2, errs, true);
    QuadraticFit q;
    q.d0 = p.coef[0];
    q.a = p.coef[1];
    q.b = p.coef[2];
    q.d0_std_error = p.std_error[0];
    q.a_std_error = p.std_error[1];
    q.b_std_error = p.std_error[2];
    q.chi2 = p.rss;
    q.dof = p.dof;
    return q;
}

}  // namespace langesim
