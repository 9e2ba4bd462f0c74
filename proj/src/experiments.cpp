#include "langesim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <sstream>

#include "langesim/csv.hpp"

namespace langesim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Serializes progress callbacks coming from worker threads.
class Progress {
public:
    Progress(const ProgressFn& fn, std::string what, std::int64_t total)
        : fn_(fn), what_(std::move(what)), total_(total), t0_(Clock::now()) {}

    void done(const std::string& item) {
        if (!fn_) return;
        std::lock_guard<std::mutex> lock(mutex_);
        ++finished_;
        std::ostringstream os;
        os << what_ << ": " << item << " (" << finished_ << "/" << total_ << ", " << format_number(seconds_since(t0_))
           << " s)";
        fn_(os.str());
    }

private:
    const ProgressFn& fn_;
    std::string what_;
    std::int64_t total_;
    std::int64_t finished_ = 0;
    Clock::time_point t0_;
    std::mutex mutex_;
};

void write_preamble(CsvWriter& csv, const ExperimentConfig& cfg) {
    csv.comment("langesim", LANGESIM_VERSION);
    csv.comment("experiment", to_string(cfg.experiment));
    csv.comment("config", cfg.resolved.dump());
}

std::string eta_label(double eta) { return "eta=" + format_number(eta); }

}  // namespace

EtaRun simulate_eta(const SplittingIntegrator& integrator, std::int64_t burn_in, std::int64_t n_steps,
                    std::int64_t target_batches, RandomStream& rng, bool track_force) {
    const SystemParams& params = integrator.params();
    const std::int64_t I = params.steps_per_period();
    EtaRun run{VelocityProfile(params.dim(), I),
               BatchMeans(params.dim(), period_batch_length(n_steps, I, target_batches)), std::nullopt};
    PhaseState s = draw_initial_state(params, rng);
    s = integrator.run(std::move(s), burn_in, rng);
    VelocitySink velocity(params, run.profile, &run.velocity);
    if (track_force) {
        run.force.emplace(integrator.field(), integrator.potential(), run.velocity.batch_length());
        integrator.run(std::move(s), n_steps, rng, velocity, *run.force);
    } else {
        integrator.run(std::move(s), n_steps, rng, velocity);
    }
    return run;
}

namespace {

struct EtaSummary {
    Vec mean;
    Vec std_error;
    Vec force;
    Vec force_std_error;
};

std::vector<EtaSummary> sweep_eta(const ExperimentConfig& cfg, bool track_force, const ExecPolicy& policy,
                                  const ProgressFn& progress, const char* what) {
    const SystemParams params = cfg.params();
    const Potential pot = cfg.make_potential();
    const ForceField field = cfg.make_field(params);
    const auto n = static_cast<std::int64_t>(cfg.etas.size());
    Progress prog(progress, what, n);
    return map_indices<EtaSummary>(policy, n, [&](std::int64_t i) {
        const double eta = cfg.etas[static_cast<std::size_t>(i)];
        const SplittingIntegrator integrator(params, pot, field, eta);
        RandomStream rng = derive_stream(cfg.seed, static_cast<std::uint64_t>(i));
        const EtaRun run = simulate_eta(integrator, cfg.burn_in_steps, cfg.n_steps, cfg.batches, rng, track_force);
        EtaSummary out;
        out.mean = period_average(run.profile);
        out.std_error = run.velocity.std_error();
        if (run.force) {
            const MeanWithError f = mean_experienced_force(*run.force);
            out.force = f.mean;
            out.force_std_error = f.std_error;
        }
        prog.done(eta_label(eta));
        return out;
    });
}

}  // namespace

LinearResponseResult run_linear_response(const ExperimentConfig& cfg, const ExecPolicy& policy,
                                         const ProgressFn& progress) {
    const auto t0 = Clock::now();
    const auto sums = sweep_eta(cfg, false, policy, progress, "linear-response");
    LinearResponseResult r;
    std::vector<Vec> means;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        r.rows.push_back({cfg.etas[i], sums[i].mean, sums[i].std_error});
        means.push_back(sums[i].mean);
    }
    r.fit = fit_linear_response(cfg.etas, means, {}, cfg.through_origin);
    r.total_steps = static_cast<std::int64_t>(cfg.etas.size()) * (cfg.burn_in_steps + cfg.n_steps);
    r.seconds = seconds_since(t0);
    return r;
}

NegativeMobilityResult run_negative_mobility(const ExperimentConfig& cfg, const ExecPolicy& policy,
                                             const ProgressFn& progress) {
    const auto t0 = Clock::now();
    const auto sums = sweep_eta(cfg, true, policy, progress, "negative-mobility");
    NegativeMobilityResult r;
    std::vector<Vec> means;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        r.rows.push_back({cfg.etas[i], sums[i].mean, sums[i].std_error, sums[i].force, sums[i].force_std_error});
        means.push_back(sums[i].mean);
    }
    r.fit = fit_linear_response(cfg.etas, means, {}, cfg.through_origin);
    const double slope = r.fit.slope(0);
    r.slope_z = std::abs(slope) / r.fit.slope_std_error(0);
    r.force_z_min = std::numeric_limits<double>::infinity();
    r.negative_mobility = slope != 0.0;
    for (const auto& row : r.rows) {
        const double f = row.force(0);
        r.force_z_min = std::min(r.force_z_min, std::abs(f) / row.force_std_error(0));
        if (f == 0.0 || (f > 0.0) == (slope > 0.0)) r.negative_mobility = false;
    }
    r.total_steps = static_cast<std::int64_t>(cfg.etas.size()) * (cfg.burn_in_steps + cfg.n_steps);
    r.seconds = seconds_since(t0);
    return r;
}

std::optional<TailFit> fit_tail(std::span<const double> frequencies, std::span<const double> amplitudes, double lo,
                                double hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        const double f = frequencies[i];
        if (f >= lo * (1.0 - 1e-12) && f <= hi * (1.0 + 1e-12) && amplitudes[i] > 0.0) {
            lx.push_back(std::log(f));
            ly.push_back(std::log(amplitudes[i]));
        }
    }
    if (count_distinct(lx) < 3) return std::nullopt;
    const PolyFit p = polyfit(lx, ly, 1);
    return TailFit{p.coef[1], p.std_error[1], static_cast<int>(lx.size())};
}

ResonanceResult run_resonance_scan(const ExperimentConfig& cfg, const ExecPolicy& policy,
                                   const ProgressFn& progress) {
    const auto t0 = Clock::now();
    const SystemParams base = cfg.params();
    const Potential pot = cfg.make_potential();
    const auto& rs = cfg.resonance;
    const std::size_t n_freq = rs.frequencies.size();
    const std::size_t n_eta = cfg.etas.size();

    struct Point {
        SystemParams params;
        ForceField field;
        std::int64_t burn_in;
        std::int64_t steps;
    };
    std::vector<Point> points;
    for (double f : rs.frequencies) {
        const double period = 1.0 / f;
        const double dt = scan_time_step(rs, base.dt(), period);
        const SystemParams p = base.with_period(period, dt);
        const std::int64_t I = p.steps_per_period();
        const auto periods = [&](double span) {
            return static_cast<std::int64_t>(std::ceil(span / period * (1.0 - 1e-12)));
        };
        const std::int64_t steps = std::max<std::int64_t>(2, periods(rs.sim_time)) * I;
        points.push_back({p, cfg.make_field(p), periods(rs.burn_in_time) * I, steps});
    }

    Progress prog(progress, "resonance-scan", static_cast<std::int64_t>(n_freq * n_eta));
    const auto amps = map_indices<CVec>(policy, static_cast<std::int64_t>(n_freq * n_eta), [&](std::int64_t w) {
        const std::size_t j = static_cast<std::size_t>(w) / n_eta, i = static_cast<std::size_t>(w) % n_eta;
        const Point& pt = points[j];
        const SplittingIntegrator integrator(pt.params, pot, pt.field, cfg.etas[i]);
        RandomStream rng = derive_stream(derive_seed(cfg.seed, j), i);
        const EtaRun run = simulate_eta(integrator, pt.burn_in, pt.steps, cfg.batches, rng, false);
        prog.done("f=" + format_number(rs.frequencies[j]) + " " + eta_label(cfg.etas[i]));
        return mode_amplitude(run.profile, 1);
    });

    ResonanceResult r;
    std::vector<double> freq, amp_x;
    for (std::size_t j = 0; j < n_freq; ++j) {
        std::vector<CVec> a(amps.begin() + static_cast<std::ptrdiff_t>(j * n_eta),
                            amps.begin() + static_cast<std::ptrdiff_t>((j + 1) * n_eta));
        ResonanceRow row;
        row.frequency = rs.frequencies[j];
        row.dt = points[j].params.dt();
        row.steps_per_eta = points[j].steps;
        row.fit = fit_complex_response(cfg.etas, a);
        freq.push_back(row.frequency);
        amp_x.push_back(row.fit.modulus(0));
        r.total_steps += static_cast<std::int64_t>(n_eta) * (points[j].burn_in + points[j].steps);
        r.rows.push_back(std::move(row));
    }
    r.argmax_frequency = freq[static_cast<std::size_t>(std::max_element(amp_x.begin(), amp_x.end()) - amp_x.begin())];
    if (rs.tail_min || rs.tail_max)
        r.tail = fit_tail(freq, amp_x, rs.tail_min.value_or(0.0), rs.tail_max.value_or(1e300));
    r.seconds = seconds_since(t0);
    return r;
}

DiffusionSweepResult run_diffusion_sweep(const ExperimentConfig& cfg, const ExecPolicy& policy,
                                         const ProgressFn& progress) {
    const auto t0 = Clock::now();
    const SystemParams params = cfg.params();
    const Potential pot = cfg.make_potential();
    const ForceField field = cfg.make_field(params);
    const ReplicaPlan plan =
        make_replica_plan(params, cfg.diffusion.replicas, cfg.diffusion.tau_neq, cfg.diffusion.tau_sim);
    Progress prog(progress, "diffusion-sweep", static_cast<std::int64_t>(cfg.etas.size()));

    DiffusionSweepResult r;
    std::vector<double> fit_eta, dxx, err;
    for (std::size_t i = 0; i < cfg.etas.size(); ++i) {
        const double eta = cfg.etas[i];
        const SplittingIntegrator integrator(params, pot, field, eta);
        const DisplacementSet set = replica_displacements(integrator, plan, derive_seed(cfg.seed, i), policy);
        DiffusionEstimate est = estimate_from_displacements(set, static_cast<double>(plan.sample_steps) * params.dt());
        est.tau_neq = static_cast<double>(plan.burn_in_steps) * params.dt();
        if (!cfg.diffusion.fit_max_eta || eta <= *cfg.diffusion.fit_max_eta) {
            fit_eta.push_back(eta);
            dxx.push_back(est.diffusion(0, 0));
            err.push_back(est.diffusion_std_error(0, 0));
        }
        r.rows.push_back({eta, std::move(est)});
        r.total_steps += plan.replicas * (plan.burn_in_steps + plan.sample_steps);
        prog.done(eta_label(eta));
    }
    r.fit = quadratic_fit(fit_eta, dxx, err);
    r.seconds = seconds_since(t0);
    return r;
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const LinearResponseResult& r) {
    CsvWriter csv(out);
    write_preamble(csv, cfg);
    const int d = static_cast<int>(r.fit.slope.size());
    std::vector<std::string> cols{"eta"};
    for (int k = 0; k < d; ++k) cols.push_back(std::string("mean_v") + axis_name(k));
    for (int k = 0; k < d; ++k) cols.push_back(std::string("stderr_") + axis_name(k));
    csv.header(cols);
    for (const auto& row : r.rows) {
        std::vector<double> v{row.eta};
        for (int k = 0; k < d; ++k) v.push_back(row.mean(k));
        for (int k = 0; k < d; ++k) v.push_back(row.std_error(k));
        csv.row(v);
    }
    for (int k = 0; k < d; ++k) {
        const std::string a = axis_name(k);
        csv.comment("slope_" + a, r.fit.slope(k));
        csv.comment("slope_stderr_" + a, r.fit.slope_std_error(k));
        csv.comment("intercept_" + a, r.fit.intercept(k));
        csv.comment("intercept_stderr_" + a, r.fit.intercept_std_error(k));
        csv.comment("rss_" + a, r.fit.rss(k));
    }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const NegativeMobilityResult& r) {
    CsvWriter csv(out);
    write_preamble(csv, cfg);
    const int d = static_cast<int>(r.fit.slope.size());
    std::vector<std::string> cols{"eta"};
    for (int k = 0; k < d; ++k) cols.push_back(std::string("mean_v") + axis_name(k));
    for (int k = 0; k < d; ++k) cols.push_back(std::string("force_") + axis_name(k));
    for (int k = 0; k < d; ++k) cols.push_back(std::string("stderr_v") + axis_name(k));
    for (int k = 0; k < d; ++k) cols.push_back(std::string("stderr_f") + axis_name(k));
    csv.header(cols);
    for (const auto& row : r.rows) {
        std::vector<double> v{row.eta};
        for (int k = 0; k < d; ++k) v.push_back(row.mean_velocity(k));
        for (int k = 0; k < d; ++k) v.push_back(row.force(k));
        for (int k = 0; k < d; ++k) v.push_back(row.velocity_std_error(k));
        for (int k = 0; k < d; ++k) v.push_back(row.force_std_error(k));
        csv.row(v);
    }
    for (int k = 0; k < d; ++k) {
        const std::string a = axis_name(k);
        csv.comment("slope_" + a, r.fit.slope(k));
        csv.comment("slope_stderr_" + a, r.fit.slope_std_error(k));
        csv.comment("intercept_" + a, r.fit.intercept(k));
        csv.comment("intercept_stderr_" + a, r.fit.intercept_std_error(k));
    }
    csv.comment("negative_mobility", r.negative_mobility ? "true" : "false");
    csv.comment("slope_z", r.slope_z);
    csv.comment("force_z_min", r.force_z_min);
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const ResonanceResult& r) {
    CsvWriter csv(out);
    write_preamble(csv, cfg);
    const int d = static_cast<int>(r.rows.front().fit.modulus.size());
    std::vector<std::string> cols{"frequency", "dt"};
    for (int k = 0; k < d; ++k) {
        const std::string a = axis_name(k);
        for (const char* c : {"amplitude_", "stderr_", "re_", "im_", "re_stderr_", "im_stderr_"}) cols.push_back(c + a);
    }
    csv.header(cols);
    for (const auto& row : r.rows) {
        std::vector<double> v{row.frequency, row.dt};
        for (int k = 0; k < d; ++k) {
            v.push_back(row.fit.modulus(k));
            v.push_back(row.fit.modulus_std_error(k));
            v.push_back(row.fit.slope(k).real());
            v.push_back(row.fit.slope(k).imag());
            v.push_back(row.fit.real_std_error(k));
            v.push_back(row.fit.imag_std_error(k));
        }
        csv.row(v);
    }
    csv.comment("argmax_frequency_x", r.argmax_frequency);
    if (r.tail) {
        csv.comment("tail_slope_x", r.tail->slope);
        csv.comment("tail_slope_stderr_x", r.tail->slope_std_error);
        csv.comment("tail_points", static_cast<double>(r.tail->points));
    }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const DiffusionSweepResult& r) {
    CsvWriter csv(out);
    write_preamble(csv, cfg);
    const int d = static_cast<int>(r.rows.front().estimate.drift.size());
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) pairs.emplace_back(j, k);
    const auto dname = [](std::pair<int, int> p) { return std::string("D_") + axis_name(p.first) + axis_name(p.second); };
    std::vector<std::string> cols{"eta"};
    for (auto p : pairs) cols.push_back(dname(p));
    for (int k = 0; k < d; ++k) cols.push_back(std::string("V_") + axis_name(k));
    for (int k = 0; k < d; ++k) cols.push_back("eig" + std::to_string(k + 1));
    for (auto p : pairs) cols.push_back("stderr_" + dname(p));
    for (int k = 0; k < d; ++k) cols.push_back(std::string("stderr_V_") + axis_name(k));
    cols.push_back("nonpositive");
    csv.header(cols);
    for (const auto& row : r.rows) {
        const auto& e = row.estimate;
        std::vector<double> v{row.eta};
        for (auto p : pairs) v.push_back(e.diffusion(p.first, p.second));
        for (int k = 0; k < d; ++k) v.push_back(e.drift(k));
        for (double ev : e.eigenvalues) v.push_back(ev);
        for (auto p : pairs) v.push_back(e.diffusion_std_error(p.first, p.second));
        for (int k = 0; k < d; ++k) v.push_back(e.drift_std_error(k));
        v.push_back(e.nonpositive ? 1.0 : 0.0);
        csv.row(v);
    }
    if (cfg.diffusion.fit_max_eta) csv.comment("fit_max_eta", *cfg.diffusion.fit_max_eta);
    csv.comment("fit_D0", r.fit.d0);
    csv.comment("fit_a", r.fit.a);
    csv.comment("fit_b", r.fit.b);
    csv.comment("fit_D0_stderr", r.fit.d0_std_error);
    csv.comment("fit_a_stderr", r.fit.a_std_error);
    csv.comment("fit_b_stderr", r.fit.b_std_error);
    csv.comment("fit_chi2", r.fit.chi2);
    csv.comment("fit_dof", static_cast<double>(r.fit.dof));
}

void run_and_write(const ExperimentConfig& cfg, std::ostream& out, const ExecPolicy& policy,
                   const ProgressFn& progress) {
    switch (cfg.experiment) {
    case ExperimentKind::linear_response: write_csv(out, cfg, run_linear_response(cfg, policy, progress)); return;
    case ExperimentKind::negative_mobility: write_csv(out, cfg, run_negative_mobility(cfg, policy, progress)); return;
    case ExperimentKind::resonance_scan: write_csv(out, cfg, run_resonance_scan(cfg, policy, progress)); return;
    case ExperimentKind::diffusion_sweep: write_csv(out, cfg, run_diffusion_sweep(cfg, policy, progress)); return;
    }
}

}  // namespace langesim
