#pragma once

#include <cmath>
#include <limits>
#include <cstdint>
#include <string>
#include <vector>

#include "langesim/force_field.hpp"
#include "langesim/params.hpp"
#include "langesim/potential.hpp"
#include "langesim/random_stream.hpp"

namespace langesim {

struct PhaseState {
    Vec q;           // wrapped into [0, cell)
    Vec p;
    Vec Q;           // unwrapped position, Q += dt M^{-1} p^{n+1/2} every step
    IVec winding;    // cell crossings per axis, so Q - Q0 ~ q - q0 + cell * winding
    std::int64_t step_index = 0;

    static PhaseState at(const Vec& q, const Vec& p, std::int64_t step_index = 0);

    bool operator==(const PhaseState& o) const {
        return q == o.q && p == o.p && Q == o.Q && winding == o.winding && step_index == o.step_index;
    }
};

// Reduces x into [0, L), adding the number of crossings to w.
inline void wrap_axis(double& x, std::int64_t& w, double L) {
    if (x >= 0.0 && x < L) return;
    const double n = std::floor(x / L);
    if (!(std::abs(n) < 4.0e18)) {
        // Not representable as a crossing count: poison the state so the
        // finite check reports the divergence.
        x = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    x -= n * L;
    std::int64_t wi = static_cast<std::int64_t>(n);
    // Rounding can land exactly on L (or just below 0); fold it back.
    if (x >= L) {
        x -= L;
        ++wi;
    }
    if (x < 0.0) {
        x += L;
        --wi;
        if (x >= L) x = 0.0;
    }
    w += wi;
}

// Reduces q into [0, cell) axis by axis, accumulating the crossings.
void wrap_into_cell(Vec& q, IVec& winding, const Vec& cell);

// Strang-type splitting of the forced Langevin dynamics:
//   p^{n+1/2} = a p^n + dt/2 (-grad V(q^n) + eta F(t^n, q^n)) + S G^n
//   q^{n+1}   = q^n + dt M^{-1} p^{n+1/2}
//   p^{n+1}   = a p^{n+1/2} + dt/2 (-grad V(q^{n+1}) + eta F(t^{n+1}, q^{n+1})) + S G^{n+1/2}
// with a = exp(-gamma dt M^{-1} / 2) and S = ((1 - a^2) M / beta)^{1/2}.
// a and S are formed once from the eigendecomposition of M. When M is a
// multiple of the identity, run() uses a fixed-dimension scalar kernel that
// performs the same floating-point operations in the same order.
class SplittingIntegrator {
public:
    SplittingIntegrator(const SystemParams& params, const Potential& pot, const ForceField& field, double eta);

    const SystemParams& params() const { return params_; }
    const Potential& potential() const { return potential_; }
    const ForceField& field() const { return field_; }
    double eta() const { return eta_; }
    const Mat& friction_factor() const { return alpha_; }
    const Mat& noise_factor() const { return noise_; }

    // -grad V(q) + eta F(t^n, q) at step index n.
    void force(const Vec& q, std::int64_t step_index, Vec& out) const { force(q.data(), step_index, out.data()); }
    void force(const double* q, std::int64_t step_index, double* out) const;

    // One step with caller-supplied standard normal vectors (G^n, G^{n+1/2}).
    PhaseState step(const PhaseState& s, const Vec& g_first, const Vec& g_second) const;

    // Applies `n_steps` steps drawing 2 d normals per step from `rng`
    // (all of G^n, then all of G^{n+1/2}) and calls sink(step_index, state)
    // on every post-step state. Bit-identical to repeated step().
    template <class... Sinks>
    PhaseState run(PhaseState s, std::int64_t n_steps, RandomStream& rng, Sinks&... sinks) const {
        if (n_steps <= 0) return s;
        if (scalar_) {
            switch (params_.dim()) {
            case 1: return run_scalar<1>(std::move(s), n_steps, rng, sinks...);
            case 2: return run_scalar<2>(std::move(s), n_steps, rng, sinks...);
            case 3: return run_scalar<3>(std::move(s), n_steps, rng, sinks...);
            default: break;
            }
        }
        const int d = params_.dim();
        Vec g0(d), g1(d), f(d), p_half(d), dq(d);
        force(s.q, s.step_index, f);
        for (std::int64_t k = 0; k < n_steps; ++k) {
            rng.fill_normal(g0);
            rng.fill_normal(g1);
            advance(s, f, g0, g1, p_half, dq);
            (sinks(s.step_index, s), ...);
        }
        return s;
    }

private:
    template <int D, class... Sinks>
    PhaseState run_scalar(PhaseState s, std::int64_t n_steps, RandomStream& rng, Sinks&... sinks) const {
        const double dt = params_.dt();
        const double half_dt = 0.5 * dt;
        const double step_q = dt * minv_s_;
        double q[D], p[D], Q[D], f[D], ph[D], g0[D], g1[D], L[D];
        std::int64_t w[D];
        for (int i = 0; i < D; ++i) {
            q[i] = s.q(i);
            p[i] = s.p(i);
            Q[i] = s.Q(i);
            w[i] = s.winding(i);
            L[i] = params_.cell()(i);
        }
        std::int64_t n = s.step_index;
        force(q, n, f);
        for (std::int64_t k = 0; k < n_steps; ++k) {
            for (int i = 0; i < D; ++i) g0[i] = rng.normal();
            for (int i = 0; i < D; ++i) g1[i] = rng.normal();
            for (int i = 0; i < D; ++i) {
                ph[i] = alpha_s_ * p[i] + half_dt * f[i] + noise_s_ * g0[i];
                const double dq = step_q * ph[i];
                q[i] += dq;
                Q[i] += dq;
                wrap_axis(q[i], w[i], L[i]);
            }
            ++n;
            force(q, n, f);
            double sum = 0.0;
            for (int i = 0; i < D; ++i) {
                p[i] = alpha_s_ * ph[i] + half_dt * f[i] + noise_s_ * g1[i];
                sum += p[i];
            }
            for (int i = 0; i < D; ++i) sum += Q[i];
            if (!std::isfinite(sum)) {
                store(s, q, p, Q, w, n, D);
                blowup(n);
            }
            if constexpr (sizeof...(Sinks) > 0) {
                store(s, q, p, Q, w, n, D);
                (sinks(n, s), ...);
            }
        }
        store(s, q, p, Q, w, n, D);
        return s;
    }

    static void store(PhaseState& s, const double* q, const double* p, const double* Q, const std::int64_t* w,
                      std::int64_t n, int d) {
        for (int i = 0; i < d; ++i) {
            s.q(i) = q[i];
            s.p(i) = p[i];
            s.Q(i) = Q[i];
            s.winding(i) = w[i];
        }
        s.step_index = n;
    }

    [[noreturn]] static void blowup(std::int64_t step);

    // Advances s in place; f holds the force at the current state on entry
    // and at the new state on exit.
    void advance(PhaseState& s, Vec& f, const Vec& g0, const Vec& g1, Vec& p_half, Vec& dq) const {
        const double half_dt = 0.5 * params_.dt();
        if (scalar_) {
            p_half = alpha_s_ * s.p + half_dt * f + noise_s_ * g0;
            dq = (params_.dt() * minv_s_) * p_half;
        } else {
            p_half.noalias() = alpha_ * s.p;
            p_half += half_dt * f;
            p_half.noalias() += noise_ * g0;
            dq.noalias() = params_.dt() * (minv_ * p_half);
        }
        s.q += dq;
        s.Q += dq;
        wrap_into_cell(s.q, s.winding, params_.cell());
        ++s.step_index;
        force(s.q, s.step_index, f);
        if (scalar_) {
            s.p = alpha_s_ * p_half + half_dt * f + noise_s_ * g1;
        } else {
            s.p.noalias() = alpha_ * p_half;
            s.p += half_dt * f;
            s.p.noalias() += noise_ * g1;
        }
        if (!std::isfinite(s.p.sum() + s.Q.sum())) blowup(s.step_index);
    }

    SystemParams params_;
    Potential potential_;
    ForceField field_;
    double eta_;
    bool field_active_;
    std::int64_t steps_per_period_;
    Mat alpha_, noise_, minv_;
    std::vector<double> temporal_table_;  // g at each phase index when modulated
    bool scalar_ = false;
    double alpha_s_ = 0.0, noise_s_ = 0.0, minv_s_ = 0.0;
};

inline PhaseState splitting_step(const PhaseState& s, const SystemParams& params, const Potential& pot,
                                 const ForceField& field, double eta, const Vec& g_first, const Vec& g_second) {
    return SplittingIntegrator(params, pot, field, eta).step(s, g_first, g_second);
}

template <class... Sinks>
PhaseState run_trajectory(const PhaseState& init, std::int64_t n_steps, const SystemParams& params,
                          const Potential& pot, const ForceField& field, double eta, RandomStream& rng,
                          Sinks&... sinks) {
    return SplittingIntegrator(params, pot, field, eta).run(init, n_steps, rng, sinks...);
}

}  // namespace langesim
