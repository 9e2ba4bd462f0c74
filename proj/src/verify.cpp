#include "langesim/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "langesim/csv.hpp"
#include "langesim/stats.hpp"

namespace langesim {

OracleReport make_report(std::string oracle, std::string quantity, double measured, double reference,
                         double std_error, double tolerance) {
    OracleReport r;
    r.oracle = std::move(oracle);
    r.quantity = std::move(quantity);
    r.measured = measured;
    r.reference = reference;
    r.std_error = std_error;
    r.tolerance = tolerance;
    r.passed = std::abs(measured - reference) <= tolerance;
    return r;
}

EulerMaruyama::EulerMaruyama(const SystemParams& params, const Potential& pot, const ForceField& field, double eta)
    : forces_(params, pot, field, eta),
      minv_(params.inverse_mass()),
      dt_(params.dt()),
      gamma_(params.gamma()),
      noise_(std::sqrt(2.0 * params.gamma() * params.dt() / params.beta())) {}

namespace {

using Clock = std::chrono::steady_clock;

SystemParams paper_params(double beta = 1.0, double gamma = 1.0, double dt = 0.01) {
    SystemParamsInit init;
    init.dim = 2;
    init.beta = beta;
    init.gamma = gamma;
    init.dt = dt;
    init.period = 1.0;
    return SystemParams(init);
}

std::string label(const std::string& name, double a, const char* an, double b, const char* bn) {
    return name + "(" + an + "=" + format_number(a) + " " + bn + "=" + format_number(b) + ")";
}

// Batch means of an arbitrary list of per-step observables, for the delta
// method on nonlinear functions of their means.
class MomentBatches {
public:
    MomentBatches(int width, std::int64_t batch_length) : width_(width), length_(batch_length), sum_(width, 0.0) {}

    void add(const double* x) {
        for (int k = 0; k < width_; ++k) sum_[static_cast<std::size_t>(k)] += x[k];
        if (++filled_ == length_) {
            std::vector<double> m(sum_);
            for (double& v : m) v /= static_cast<double>(length_);
            batches_.push_back(std::move(m));
            std::fill(sum_.begin(), sum_.end(), 0.0);
            filled_ = 0;
        }
    }

    Eigen::VectorXd mean() const {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(width_);
        for (const auto& b : batches_)
            for (int k = 0; k < width_; ++k) m(k) += b[static_cast<std::size_t>(k)];
        return m / static_cast<double>(batches_.size());
    }

    // Covariance of the overall mean vector.
    Eigen::MatrixXd mean_covariance() const {
        const Eigen::VectorXd m = mean();
        const auto nb = static_cast<double>(batches_.size());
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(width_, width_);
        for (const auto& b : batches_) {
            Eigen::VectorXd d(width_);
            for (int k = 0; k < width_; ++k) d(k) = b[static_cast<std::size_t>(k)] - m(k);
            c += d * d.transpose();
        }
        return c / (nb * (nb - 1.0));
    }

private:
    int width_;
    std::int64_t length_;
    std::int64_t filled_ = 0;
    std::vector<double> sum_;
    std::vector<std::vector<double>> batches_;
};

struct ScalarEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

ScalarEstimate mean_and_error(const std::vector<double>& xs) {
    RunningStats s;
    for (double x : xs) s.add(x);
    return {s.mean(), std::sqrt(s.variance() / static_cast<double>(s.count()))};
}

}  // namespace

std::vector<OracleReport> free_diffusion_oracle(double beta, double gamma, std::int64_t replicas, double tau_sim,
                                                std::uint64_t seed, const ExecPolicy& policy) {
    const SystemParams params = paper_params(beta, gamma);
    const Potential pot;
    const ForceField field(params);
    const DiffusionEstimate est =
        estimate_drift_diffusion(params, pot, field, 0.0, replicas, 0.0, tau_sim, seed, policy);
    const std::string name = label("free_diffusion", beta, "beta", gamma, "gamma");
    const double ref = 1.0 / (beta * gamma);
    std::vector<OracleReport> out;
    const int d = params.dim();
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            const double se = est.diffusion_std_error(j, k);
            const double r = j == k ? ref : 0.0;
            out.push_back(make_report(name, std::string("D_") + axis_name(j) + axis_name(k), est.diffusion(j, k), r, se,
                                      std::max(0.05 * ref, 4.0 * se)));
        }
    for (int k = 0; k < d; ++k)
        out.push_back(make_report(name, std::string("V_") + axis_name(k), est.drift(k), 0.0, est.drift_std_error(k),
                                  4.0 * est.drift_std_error(k)));
    return out;
}

namespace {

nlohmann::json linear_response_doc(const std::string& force, double eta_max, int points, std::int64_t n_steps) {
    return {{"experiment", "linear-response"},
            {"potential", "cos2d"},
            {"force", force},
            {"eta", {{"max", eta_max}, {"count", points}}},
            {"n_steps", n_steps},
            {"burn_in_steps", 1000}};
}

std::string source_tag(GradientSource s) {
    switch (s) {
    case GradientSource::zero: return "zero";
    case GradientSource::cos_x: return "cos-x";
    case GradientSource::cos_x_plus_cos_y: return "cos-x+cos-y";
    }
    return "?";
}

}  // namespace

std::vector<OracleReport> gradient_force_null_drift(GradientSource source, double eta_max, int points,
                                                    std::int64_t n_steps, std::uint64_t seed,
                                                    const ExecPolicy& policy) {
    ConfigOverrides ov;
    ov.seed = seed;
    const std::string tag = "gradient(" + source_tag(source) + ")";
    const ExperimentConfig cfg = parse_config(linear_response_doc(tag, eta_max, points, n_steps), ov);
    const LinearResponseResult r = run_linear_response(cfg, policy);
    const std::string name = "gradient_null_drift(W=" + source_tag(source) + ")";
    std::vector<OracleReport> out;
    for (int k = 0; k < static_cast<int>(r.fit.slope.size()); ++k)
        out.push_back(make_report(name, std::string("slope_") + axis_name(k), r.fit.slope(k), 0.0,
                                  r.fit.slope_std_error(k), 4.0 * r.fit.slope_std_error(k)));
    if (source == GradientSource::zero) {
        const ExperimentConfig zero = parse_config(linear_response_doc("zero", eta_max, points, n_steps), ov);
        const LinearResponseResult z = run_linear_response(zero, policy);
        double diff = 0.0;
        for (std::size_t i = 0; i < r.rows.size(); ++i)
            diff = std::max(diff, (r.rows[i].mean - z.rows[i].mean).cwiseAbs().maxCoeff());
        out.push_back(make_report(name, "max_abs_difference_from_zero_field", diff, 0.0, 0.0, 0.0));
    }
    return out;
}

namespace {

// Lower bound of V over the cell: grid minimum less a margin exceeding
// max|grad V| * (grid diagonal / 2) for the built-in potentials.
double potential_lower_bound(const Potential& pot, const SystemParams& params) {
    if (pot.is_zero()) return 0.0;
    const int d = params.dim();
    const int n = 512;
    double low = INFINITY;
    Vec q(d);
    std::int64_t total = 1;
    for (int k = 0; k < d; ++k) total *= n;
    for (std::int64_t i = 0; i < total; ++i) {
        std::int64_t r = i;
        for (int k = 0; k < d; ++k) {
            q(k) = params.cell()(k) * static_cast<double>(r % n) / n;
            r /= n;
        }
        low = std::min(low, pot.value(q));
    }
    return low - 0.1;
}

std::int64_t histogram_bin(const Vec& q, const Vec& cell, int bins) {
    std::int64_t idx = 0;
    for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
        auto b = static_cast<std::int64_t>(q(k) / cell(k) * bins);
        b = std::clamp<std::int64_t>(b, 0, bins - 1);
        idx = idx * bins + b;
    }
    return idx;
}

// Gibbs weight of every histogram bin, normalized to one.
std::vector<double> bin_probabilities(const Potential& pot, const SystemParams& params, int bins) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double beta = params.beta();
    const Vec cell = params.cell();
    std::vector<double> w;
    if (params.dim() == 1) {
        for (int i = 0; i < bins; ++i) {
            const double a = cell(0) * i / bins, b = cell(0) * (i + 1) / bins;
            w.push_back(Rule::integrate(
                [&](double x) {
                    Vec q(1);
                    q << x;
                    return std::exp(-beta * pot.value(q));
                },
                a, b));
        }
    } else {
        for (int j = 0; j < bins; ++j)
            for (int i = 0; i < bins; ++i) {
                const double ax = cell(0) * i / bins, bx = cell(0) * (i + 1) / bins;
                const double ay = cell(1) * j / bins, by = cell(1) * (j + 1) / bins;
                w.push_back(Rule::integrate(
                    [&](double y) {
                        return Rule::integrate(
                            [&](double x) {
                                Vec q(2);
                                q << x, y;
                                return std::exp(-beta * pot.value(q));
                            },
                            ax, bx);
                    },
                    ay, by));
            }
    }
    double z = 0.0;
    for (double v : w) z += v;
    for (double& v : w) v /= z;
    return w;
}

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

// Pearson chi-square; cells expecting fewer than 5 counts are pooled.
ChiSquare chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& expected) {
    std::vector<std::pair<double, double>> cells;
    double pooled_o = 0.0, pooled_e = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] >= 5.0) {
            cells.emplace_back(static_cast<double>(observed[i]), expected[i]);
        } else {
            pooled_o += static_cast<double>(observed[i]);
            pooled_e += expected[i];
        }
    }
    if (pooled_e >= 5.0 || cells.empty()) {
        cells.emplace_back(pooled_o, pooled_e);
    } else if (pooled_e > 0.0) {
        auto smallest = std::min_element(cells.begin(), cells.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
        smallest->first += pooled_o;
        smallest->second += pooled_e;
    }
    ChiSquare c;
    for (const auto& [o, e] : cells) c.statistic += (o - e) * (o - e) / e;
    c.dof = static_cast<int>(cells.size()) - 1;
    c.p_value = c.dof > 0 ? boost::math::gamma_q(0.5 * c.dof, 0.5 * c.statistic) : 1.0;
    return c;
}

}  // namespace

std::vector<OracleReport> gibbs_marginal_check(const SystemParams& params, const Potential& pot,
                                               const GibbsSettings& settings, std::uint64_t seed,
                                               const ExecPolicy& policy) {
    const ForceField field(params);
    const SplittingIntegrator integrator(params, pot, field, 0.0);
    const int d = params.dim();
    const std::string name = "gibbs_marginal(" + pot.descriptor() + ")";
    std::vector<OracleReport> out;

    // Momentum moments along one trajectory. Columns: p_k, p_k^2, p_k^4 per
    // axis, then p_j p_k for j < k.
    const int width = 3 * d + d * (d - 1) / 2;
    const std::int64_t length = settings.n_steps / 64;
    MomentBatches moments(width, length);
    auto sink = [&](std::int64_t, const PhaseState& s) {
        double x[3 * kMaxDim + kMaxDim * (kMaxDim - 1) / 2];
        int c = 0;
        for (int k = 0; k < d; ++k) {
            const double p = s.p(k), p2 = p * p;
            x[c++] = p;
            x[c++] = p2;
            x[c++] = p2 * p2;
        }
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) x[c++] = s.p(j) * s.p(k);
        moments.add(x);
    };
    RandomStream rng = derive_stream(seed, 0);
    PhaseState s = integrator.run(draw_initial_state(params, rng), 10'000, rng);
    integrator.run(std::move(s), 64 * length, rng, sink);

    const Eigen::VectorXd m = moments.mean();
    const Eigen::MatrixXd C = moments.mean_covariance();
    const auto delta = [&](const Eigen::VectorXd& g) { return std::sqrt(std::max(0.0, g.dot(C * g))); };
    const Mat cov_ref = params.mass() / params.beta();
    for (int k = 0; k < d; ++k) {
        const int i1 = 3 * k, i2 = 3 * k + 1, i4 = 3 * k + 2;
        const std::string a = axis_name(k);
        const double m1 = m(i1), m2 = m(i2), m4 = m(i4);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(width);
        g(i1) = 1.0;
        const double se1 = delta(g);
        out.push_back(make_report(name, "mean_p" + a, m1, 0.0, se1, 4.0 * se1));

        g.setZero();
        g(i1) = -2.0 * m1;
        g(i2) = 1.0;
        const double se2 = delta(g);
        const double ref = cov_ref(k, k);
        out.push_back(make_report(name, "var_p" + a, m2 - m1 * m1, ref, se2, std::max(0.02 * ref, 4.0 * se2)));

        g.setZero();
        g(i2) = -2.0 * m4 / (m2 * m2 * m2);
        g(i4) = 1.0 / (m2 * m2);
        const double se4 = delta(g);
        out.push_back(make_report(name, "excess_kurtosis_p" + a, m4 / (m2 * m2) - 3.0, 0.0, se4, 4.0 * se4));
    }
    int c = 3 * d;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k, ++c) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(width);
            g(c) = 1.0;
            g(3 * j) = -m(3 * k);
            g(3 * k) = -m(3 * j);
            const double se = delta(g);
            out.push_back(make_report(name, std::string("cov_p") + axis_name(j) + axis_name(k),
                                      m(c) - m(3 * j) * m(3 * k), cov_ref(j, k), se, 4.0 * se));
        }

    // Position marginal from independent chains started at exact equilibrium.
    if (d <= 2) {
        const double v_low = potential_lower_bound(pot, params);
        const Eigen::LLT<Mat> chol(cov_ref);
        const Mat L = chol.matrixL();
        const std::uint64_t chain_seed = derive_seed(seed, 1);
        const auto bins = map_indices<std::int64_t>(policy, settings.chains, [&](std::int64_t i) {
            RandomStream r = derive_stream(chain_seed, static_cast<std::uint64_t>(i));
            Vec q(d), g(d);
            for (;;) {
                for (int k = 0; k < d; ++k) q(k) = params.cell()(k) * r.uniform();
                if (r.uniform() < std::exp(-params.beta() * (pot.value(q) - v_low))) break;
            }
            r.fill_normal(g);
            PhaseState st = integrator.run(PhaseState::at(q, L * g), settings.chain_steps, r);
            return histogram_bin(st.q, params.cell(), settings.bins);
        });
        const std::vector<double> prob = bin_probabilities(pot, params, settings.bins);
        std::vector<std::int64_t> observed(prob.size(), 0);
        for (std::int64_t b : bins) ++observed[static_cast<std::size_t>(b)];
        std::vector<double> expected(prob.size());
        for (std::size_t i = 0; i < prob.size(); ++i) expected[i] = prob[i] * static_cast<double>(settings.chains);
        const ChiSquare chi = chi_square(observed, expected);
        // p-value > 0.001 written as |p - 1| <= 0.999.
        out.push_back(make_report(name, "position_histogram_p_value(chi2=" + format_number(chi.statistic) +
                                            " dof=" + std::to_string(chi.dof) + ")",
                                  chi.p_value, 1.0, 0.0, 0.999));
    }
    return out;
}

std::vector<OracleReport> em_cross_check(const EmSettings& settings, std::uint64_t seed, const ExecPolicy& policy) {
    const SystemParams params = paper_params();
    const SystemParams fine = params.with_dt(params.dt() / settings.refinement);
    const Potential cos2d(PotentialKind::cos2d), flat;
    const ForceField zero(params), zero_fine(fine);
    const ForceField nm(parse_force_tag("nm"), cos2d, params), nm_fine(parse_force_tag("nm"), cos2d, fine);
    const double eta = 0.5;
    const std::int64_t r = settings.refinement;
    const std::int64_t window = *whole_steps(settings.window_time, params.dt());

    struct KineticSink {
        BatchMeans* bm;
        void operator()(std::int64_t, const PhaseState& s) {
            const double e = s.p.squaredNorm();
            bm->add(&e);
        }
    };
    auto kinetic = [&](const auto& scheme, std::int64_t scale, RandomStream& rng) {
        const std::int64_t n = scale * settings.n_steps;
        BatchMeans bm(1, n / 64);
        KineticSink sink{&bm};
        PhaseState s = scheme.run(draw_initial_state(scheme.params(), rng), scale * settings.burn_in_steps, rng);
        scheme.run(std::move(s), 64 * (n / 64), rng, sink);
        return ScalarEstimate{bm.mean()(0), bm.std_error()(0)};
    };
    auto mobility = [&](const auto& scheme, std::int64_t scale, RandomStream& rng) {
        const std::int64_t n = scale * settings.n_steps;
        const SystemParams& p = scheme.params();
        VelocityProfile profile(p.dim(), p.steps_per_period());
        BatchMeans bm(p.dim(), period_batch_length(n, p.steps_per_period(), 64));
        VelocitySink sink(p, profile, &bm);
        PhaseState s = scheme.run(draw_initial_state(p, rng), scale * settings.burn_in_steps, rng);
        scheme.run(std::move(s), n, rng, sink);
        return ScalarEstimate{bm.mean()(0) / eta, bm.std_error()(0) / eta};
    };
    auto diffusion = [&](const auto& scheme, std::int64_t scale, RandomStream& rng) {
        const int d = scheme.params().dim();
        PhaseState s = draw_initial_state(scheme.params(), rng);
        std::vector<double> vals;
        for (std::int64_t w = 0; w < settings.windows; ++w) {
            const Vec q0 = s.Q;
            s = scheme.run(std::move(s), scale * window, rng);
            vals.push_back((s.Q - q0).squaredNorm() / (2.0 * d * settings.window_time));
        }
        return mean_and_error(vals);
    };

    const auto est = map_indices<ScalarEstimate>(policy, 6, [&](std::int64_t task) {
        RandomStream rng = derive_stream(seed, static_cast<std::uint64_t>(task));
        switch (task) {
        case 0: return kinetic(SplittingIntegrator(params, cos2d, zero, 0.0), 1, rng);
        case 1: return kinetic(EulerMaruyama(fine, cos2d, zero_fine, 0.0), r, rng);
        case 2: return mobility(SplittingIntegrator(params, cos2d, nm, eta), 1, rng);
        case 3: return mobility(EulerMaruyama(fine, cos2d, nm_fine, eta), r, rng);
        case 4: return diffusion(SplittingIntegrator(params, flat, zero, 0.0), 1, rng);
        default: return diffusion(EulerMaruyama(fine, flat, zero_fine, 0.0), r, rng);
        }
    });

    const std::string name = "em_cross_check(dt_em=dt/" + std::to_string(r) + ")";
    const auto versus = [&](const std::string& what, const ScalarEstimate& em, const ScalarEstimate& split) {
        const double se = std::hypot(em.std_error, split.std_error);
        return make_report(name, what + " em_vs_splitting", em.mean, split.mean, se, 3.0 * se);
    };
    const double d_ref = 1.0 / (params.beta() * params.gamma());
    const auto free_d = [&](const std::string& scheme, const ScalarEstimate& e) {
        return make_report(name, "free_D " + scheme, e.mean, d_ref, e.std_error,
                           std::max(0.05 * d_ref, 4.0 * e.std_error));
    };
    return {versus("mean_|p|^2 cos2d eta=0", est[1], est[0]), versus("v_x/eta nm eta=0.5", est[3], est[2]),
            free_d("splitting", est[4]), free_d("em", est[5])};
}

double step_halving_slope(double gamma, const std::vector<double>& dts) {
    const Potential pot(PotentialKind::cos2d);
    const Vec zero = Vec::Zero(2);
    std::vector<double> lx, ly;
    for (double h : dts) {
        const SystemParams coarse = paper_params(1.0, gamma, h);
        const SystemParams half = coarse.with_dt(0.5 * h);
        const SplittingIntegrator big(coarse, pot, ForceField(coarse), 0.0);
        const SplittingIntegrator small(half, pot, ForceField(half), 0.0);
        double err = 0.0;
        const int states = 8;
        for (int i = 0; i < states; ++i) {
            Vec q(2), p(2);
            q << std::fmod(0.37 + 0.71 * i, kTwoPi), std::fmod(1.3 + 0.53 * i, kTwoPi);
            p << std::cos(1.7 * i), std::sin(0.9 * i + 0.3);
            const PhaseState s0 = PhaseState::at(q, p);
            const PhaseState one = big.step(s0, zero, zero);
            const PhaseState two = small.step(small.step(s0, zero, zero), zero, zero);
            err += std::sqrt((one.Q - two.Q).squaredNorm() + (one.p - two.p).squaredNorm());
        }
        lx.push_back(std::log(h));
        ly.push_back(std::log(err / states));
    }
    return polyfit(lx, ly, 1).coef[1];
}

std::vector<OracleReport> strang_order_check(const std::vector<double>& dts) {
    std::vector<OracleReport> out;
    for (double gamma : {1.0, 1e-4}) {
        out.push_back(make_report("strang_order", "step_halving_slope(gamma=" + format_number(gamma) + ")",
                                  step_halving_slope(gamma, dts), 3.0, 0.0, 0.3));
    }
    return out;
}

std::vector<OracleReport> csv_reproducibility_check(std::uint64_t seed, const ExecPolicy& policy) {
    using nlohmann::json;
    const std::vector<json> docs = {
        {{"experiment", "linear-response"},
         {"force", "cosine-mode(1)"},
         {"eta", {{"max", 0.5}, {"count", 3}}},
         {"n_steps", 2000},
         {"burn_in_steps", 100},
         {"batches", 4}},
        {{"experiment", "negative-mobility"},
         {"force", "nm"},
         {"eta", {{"max", 0.5}, {"count", 3}}},
         {"n_steps", 2000},
         {"burn_in_steps", 100},
         {"batches", 4}},
        {{"experiment", "resonance-scan"},
         {"system", {{"gamma", 0.1}}},
         {"force", "sr"},
         {"eta", {{"max", 0.5}, {"count", 3}}},
         {"batches", 2},
         {"resonance", {{"frequencies", {0.5, 1.0, 2.0}}, {"sim_time", 10.0}, {"burn_in_time", 1.0}}}},
        {{"experiment", "diffusion-sweep"},
         {"force", "nm"},
         {"eta", {{"values", {0.0, 0.5, 1.0}}}},
         {"diffusion", {{"replicas", 8}, {"tau_neq", 1.0}, {"tau_sim", 5.0}}}},
    };
    ConfigOverrides ov;
    ov.seed = seed;
    ExecPolicy par = policy;
    par.mode = Execution::parallel;
    if (par.threads < 2) par.threads = 2;
    std::vector<OracleReport> out;
    for (const json& doc : docs) {
        const ExperimentConfig cfg = parse_config(doc, ov);
        std::string runs[3];
        for (int i = 0; i < 3; ++i) {
            std::ostringstream os;
            run_and_write(cfg, os, i < 2 ? ExecPolicy::serial() : par);
            runs[i] = os.str();
        }
        const int mismatches = (runs[1] != runs[0]) + (runs[2] != runs[0]);
        out.push_back(make_report("csv_reproducibility", to_string(cfg.experiment) + " mismatching_runs",
                                  mismatches, 0.0, 0.0, 0.0));
    }
    return out;
}

VerifySettings VerifySettings::smoke() {
    VerifySettings s;
    s.free_replicas = 200;
    s.free_tau_sim = 20.0;
    s.gradient_points = 3;
    s.gradient_steps = 12'800;
    s.gibbs = {64'000, 400, 100, 4};
    s.em = {10, 12'800, 1'000, 5.0, 20};
    return s;
}

const std::vector<std::string>& oracle_names() {
    static const std::vector<std::string> names = {"free_diffusion", "gradient_null_drift", "gibbs_marginal",
                                                   "em_cross_check", "strang_order",        "csv_reproducibility"};
    return names;
}

std::vector<OracleReport> run_oracle(const std::string& name, const VerifySettings& st, const ExecPolicy& policy) {
    const auto t0 = Clock::now();
    std::vector<OracleReport> out;
    const auto append = [&](std::vector<OracleReport> more) { out.insert(out.end(), more.begin(), more.end()); };
    if (name == "free_diffusion") {
        append(free_diffusion_oracle(1.0, 1.0, st.free_replicas, st.free_tau_sim, derive_seed(st.seed, 0), policy));
        append(free_diffusion_oracle(2.0, 4.0, st.free_replicas, st.free_tau_sim, derive_seed(st.seed, 1), policy));
    } else if (name == "gradient_null_drift") {
        std::uint64_t i = 0;
        for (auto src : {GradientSource::cos_x, GradientSource::cos_x_plus_cos_y, GradientSource::zero})
            append(gradient_force_null_drift(src, st.gradient_eta_max, st.gradient_points, st.gradient_steps,
                                             derive_seed(st.seed, i++), policy));
    } else if (name == "gibbs_marginal") {
        append(gibbs_marginal_check(paper_params(), Potential(PotentialKind::cos2d), st.gibbs, st.seed, policy));
    } else if (name == "em_cross_check") {
        append(em_cross_check(st.em, st.seed, policy));
    } else if (name == "strang_order") {
        append(strang_order_check());
    } else if (name == "csv_reproducibility") {
        append(csv_reproducibility_check(st.seed, policy));
    } else {
        throw ConfigError("verify.oracle: unknown oracle '" + name + "'");
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    for (auto& r : out) r.seconds = secs;
    return out;
}

std::vector<OracleReport> run_oracles(const std::vector<std::string>& names, const VerifySettings& settings,
                                      const ExecPolicy& policy, const ProgressFn& progress) {
    std::vector<OracleReport> out;
    for (const auto& name : names) {
        auto rows = run_oracle(name, settings, policy);
        if (progress) {
            int failed = 0;
            for (const auto& r : rows) failed += !r.passed;
            progress(name + ": " + (failed ? std::to_string(failed) + " check(s) failed" : std::string("ok")) + " (" +
                     std::to_string(static_cast<long long>(std::lround(rows.empty() ? 0.0 : rows.front().seconds))) + " s)");
        }
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

void write_report(std::ostream& out, const std::vector<OracleReport>& reports, std::uint64_t seed) {
    CsvWriter csv(out);
    csv.comment("langesim", LANGESIM_VERSION);
    csv.comment("report", "verify");
    csv.comment("seed", std::to_string(seed));
    out << "oracle,quantity,measured,reference,std_error,tolerance,pass\n";
    int passed = 0;
    for (const auto& r : reports) {
        out << r.oracle << ',' << r.quantity << ',' << format_number(r.measured) << ',' << format_number(r.reference)
            << ',' << format_number(r.std_error) << ',' << format_number(r.tolerance) << ','
            << (r.passed ? "true" : "false") << '\n';
        passed += r.passed;
    }
    csv.comment("passed", std::to_string(passed) + "/" + std::to_string(reports.size()));
}

}  // namespace langesim
