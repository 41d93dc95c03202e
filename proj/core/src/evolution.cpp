#include "cgl/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace cgl {

void EvolutionParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("EvolutionParams: dt must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("EvolutionParams: horizon must be positive");
    if (!(q > 2.0) || !std::isfinite(q))
        throw std::invalid_argument("EvolutionParams: q must be a finite exponent above 2");
    if (!(lambda >= 0.0) || !(kappa >= 0.0))
        throw std::invalid_argument("EvolutionParams: lambda and kappa must be nonnegative");
    if (nonlinearity_sign != 1 && nonlinearity_sign != -1)
        throw std::invalid_argument("EvolutionParams: nonlinearity_sign must be +-1");
}

// ---------------------------------------------------------------------------
// Forcing and source histories

Forcing Forcing::zero(const Domain& d) {
    Forcing f;
    f.kind_ = Kind::zero;
    f.domain_ = d;
    return f;
}

Forcing Forcing::constant(ComplexField field) {
    Forcing f;
    f.kind_ = Kind::constant;
    f.domain_ = field.domain;
    f.fields_.push_back(std::move(field));
    return f;
}

Forcing Forcing::sampled(std::vector<double> times, std::vector<ComplexField> fields) {
    if (times.size() != fields.size() || times.size() < 2)
        throw std::invalid_argument("Forcing::sampled: need matching times and >= 2 samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("Forcing::sampled: times must be strictly increasing");
    Forcing f;
    f.kind_ = Kind::sampled;
    f.domain_ = fields.front().domain;
    for (const auto& g : fields)
        if (g.domain != f.domain_)
            throw std::invalid_argument("Forcing::sampled: samples on mismatched domains");
    f.times_ = std::move(times);
    f.fields_ = std::move(fields);
    return f;
}

namespace {

// Linear interpolation index/weight over a strictly increasing grid, clamped.
std::pair<std::size_t, double> locate(const std::vector<double>& ts, double t) {
    if (t <= ts.front()) return {0, 0.0};
    if (t >= ts.back()) return {ts.size() - 2, 1.0};
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = std::size_t(it - ts.begin()) - 1;
    double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return {i, w};
}

}  // namespace

ComplexField Forcing::at(double t) const {
    switch (kind_) {
        case Kind::zero: return ComplexField(domain_);
        case Kind::constant: return fields_.front();
        case Kind::sampled: {
            auto [i, w] = locate(times_, t);
            ComplexField out = scale(1.0 - w, fields_[i]);
            axpy(w, fields_[i + 1], out);
            return out;
        }
    }
    return ComplexField(domain_);
}

double Forcing::l2t_norm_sq(double horizon, double dt) const {
    if (kind_ == Kind::zero) return 0.0;
    if (kind_ == Kind::constant) return l2_norm_sq(fields_.front()) * horizon;
    std::size_t n = std::max<std::size_t>(2, std::size_t(std::ceil(horizon / dt)) + 1);
    double h = horizon / double(n - 1);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        s += w * l2_norm_sq(at(j * h));
    }
    return s * h;
}

ComplexField SourceSeries::at(double t) const {
    if (samples.size() == 1) return samples.front();
    auto [i, w] = locate(times, t);
    ComplexField out = scale(1.0 - w, samples[i]);
    axpy(w, samples[i + 1], out);
    return out;
}

void SourceSeries::validate() const {
    if (times.size() != samples.size() || times.empty())
        throw std::invalid_argument("SourceSeries: times and samples must match and be nonempty");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("SourceSeries: times must be strictly increasing");
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& ts) {
    std::vector<double> w(ts.size(), 0.0);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double h = ts[i + 1] - ts[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

}  // namespace

double hs_norm_sq(const SourceSeries& h) {
    h.validate();
    auto w = trapezoid_weights(h.times);
    double s = 0.0;
    for (std::size_t i = 0; i < h.samples.size(); ++i) s += w[i] * l2_norm_sq(h.samples[i]);
    return s;
}

double hs_distance(const SourceSeries& a, const SourceSeries& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("hs_distance: sample grids differ");
    auto w = trapezoid_weights(a.times);
    double s = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        s += w[i] * l2_norm_sq(sub(a.samples[i], b.samples[i]));
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Mode-space stepping machinery

namespace {

struct ModeState {
    std::vector<double> c1, c2;
    explicit ModeState(std::size_t n = 0) : c1(n, 0.0), c2(n, 0.0) {}
};

ModeState to_state(const ComplexField& u) {
    ModePair m = to_mode_pair(u);
    ModeState s(m.c1.size());
    s.c1 = std::move(m.c1.a);
    s.c2 = std::move(m.c2.a);
    return s;
}

ComplexField to_field(const Domain& d, const ModeState& s) {
    ModePair m;
    m.c1 = ModeVector(d);
    m.c2 = ModeVector(d);
    m.c1.a = s.c1;
    m.c2.a = s.c2;
    return from_mode_pair(d, m);
}

// Sampled mode-space view of a Forcing or SourceSeries; linear interpolation
// commutes with the transform, so interpolating coefficients is exact.
class ModeSeries {
  public:
    ModeSeries() = default;

    static ModeSeries from_forcing(const Forcing& f) {
        ModeSeries m;
        if (f.kind() == Forcing::Kind::zero) {
            m.kind_ = Kind::zero;
        } else if (f.kind() == Forcing::Kind::constant) {
            m.kind_ = Kind::constant;
            m.states_.push_back(to_state(f.samples().front()));
        } else {
            m.kind_ = Kind::sampled;
            m.times_ = f.sample_times();
            for (const auto& g : f.samples()) m.states_.push_back(to_state(g));
        }
        return m;
    }

    static ModeSeries from_source(const SourceSeries& h) {
        h.validate();
        ModeSeries m;
        if (h.samples.size() == 1) {
            m.kind_ = Kind::constant;
            m.states_.push_back(to_state(h.samples.front()));
        } else {
            m.kind_ = Kind::sampled;
            m.times_ = h.times;
            for (const auto& g : h.samples) m.states_.push_back(to_state(g));
        }
        return m;
    }

    static ModeSeries none() { return ModeSeries(); }

    bool is_zero() const { return kind_ == Kind::zero; }

    // out += c * value(t)
    void accumulate(double t, double c, ModeState& out) const {
        if (kind_ == Kind::zero) return;
        if (kind_ == Kind::constant) {
            const ModeState& s = states_.front();
            for (std::size_t k = 0; k < out.c1.size(); ++k) {
                out.c1[k] += c * s.c1[k];
                out.c2[k] += c * s.c2[k];
            }
            return;
        }
        auto [i, w] = locate(times_, t);
        const ModeState& a = states_[i];
        const ModeState& b = states_[i + 1];
        for (std::size_t k = 0; k < out.c1.size(); ++k) {
            out.c1[k] += c * ((1.0 - w) * a.c1[k] + w * b.c1[k]);
            out.c2[k] += c * ((1.0 - w) * a.c2[k] + w * b.c2[k]);
        }
    }

  private:
    enum class Kind { zero, constant, sampled };
    Kind kind_ = Kind::zero;
    std::vector<double> times_;
    std::vector<ModeState> states_;
};

// Per-mode solve of (E + dt nu (lambda E + alpha I)) X = R using the exact
// inverse (a E + b I)^{-1} = (a E - b I)/(a^2 + b^2).
inline void implicit_mode_solve(double dt, double nu, double lambda, double alpha,
                                double& r1, double& r2) {
    double a = 1.0 + dt * nu * lambda;
    if (alpha == 0.0) {  // plain division keeps alpha = 0 paths bit-identical
        r1 /= a;
        r2 /= a;
        return;
    }
    double b = dt * nu * alpha;
    double det = a * a + b * b;
    double x1 = (a * r1 - b * r2) / det;
    double x2 = (b * r1 + a * r2) / det;
    r1 = x1;
    r2 = x2;
}

// out += c * (kappa + beta I) s, with (kappa + beta I)(w1,w2) = (k w1 + b w2, k w2 - b w1).
inline void accumulate_kappa_beta(double c, double kappa, double beta,
                                  const ModeState& s, ModeState& out) {
    for (std::size_t k = 0; k < out.c1.size(); ++k) {
        out.c1[k] += c * (kappa * s.c1[k] + beta * s.c2[k]);
        out.c2[k] += c * (kappa * s.c2[k] - beta * s.c1[k]);
    }
}

std::vector<double> make_time_grid(double horizon, double dt) {
    std::size_t steps = std::size_t(std::ceil(horizon / dt - 1e-9));
    steps = std::max<std::size_t>(steps, 1);
    std::vector<double> ts(steps + 1);
    for (std::size_t j = 0; j < steps; ++j) ts[j] = j * dt;
    ts[steps] = horizon;
    return ts;
}

double mode_norm_sq(const Domain& d, const ModeState& s) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.c1.size(); ++k)
        acc += s.c1[k] * s.c1[k] + s.c2[k] * s.c2[k];
    return acc * mode_weight(d);
}

double mode_phi(const Domain& d, const std::vector<double>& nu, const ModeState& s) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.c1.size(); ++k)
        acc += nu[k] * (s.c1[k] * s.c1[k] + s.c2[k] * s.c2[k]);
    return 0.5 * acc * mode_weight(d);
}

struct TrajectoryRecorder {
    Trajectory traj;
    std::size_t stride;

    TrajectoryRecorder(double dt, std::size_t n_times, std::size_t stride_)
        : stride(stride_) {
        traj.dt = dt;
        traj.times.reserve(n_times);
        traj.diag.reserve(n_times);
    }

    void record(std::size_t j, std::size_t last, double t, const ComplexField& u,
                double phi_val, double residual, double q) {
        traj.times.push_back(t);
        StepDiagnostics d;
        d.l2_sq = l2_norm_sq(u);
        d.phi = phi_val;
        d.psi_q = psi_r(u, q);
        d.residual = residual;
        traj.diag.push_back(d);
        bool keep = stride == 0 ? (j == 0 || j == last)
                                : (j % stride == 0 || j == last);
        if (keep) {
            traj.fields.push_back(u);
            traj.field_steps.push_back(j);
        }
    }
};

void check_finite(double value, std::size_t step, double t) {
    if (!std::isfinite(value)) throw BlowupSignal(step, t);
}

}  // namespace

double Trajectory::sup_phi() const {
    double m = 0.0;
    for (const auto& d : diag) m = std::max(m, d.phi);
    return m;
}

double Trajectory::sup_psi_q() const {
    double m = 0.0;
    for (const auto& d : diag) m = std::max(m, d.psi_q);
    return m;
}

// ---------------------------------------------------------------------------
// Full equation

namespace {

// Explicit part of the full equation at state u: sign (kappa + beta I)
// grad_psi_q(u) + gamma u + F(t); returned in physical space.
ComplexField acgl_explicit_part(const ComplexField& u, double t,
                                const EvolutionParams& p, const Forcing& force) {
    ComplexField w = grad_psi_r(u, p.q);
    ComplexField out = complex_scale(p.kappa, p.beta, w);
    if (p.nonlinearity_sign < 0) out = scale(-1.0, out);
    axpy(p.gamma, u, out);
    if (!force.is_zero()) {
        ComplexField f = force.at(t);
        axpy(1.0, f, out);
    }
    return out;
}

// Full right-hand side for the explicit scheme.
ComplexField acgl_rhs(const ComplexField& u, double t, const EvolutionParams& p,
                      const Forcing& force) {
    ComplexField out = acgl_explicit_part(u, t, p, force);
    ComplexField gp = grad_phi(u);
    axpy(-1.0, complex_scale(p.lambda, p.alpha, gp), out);
    return out;
}

}  // namespace

ComplexField step_acgl(const ComplexField& u, double t, double dt,
                       const EvolutionParams& params, const Forcing& force,
                       std::size_t step_index) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_acgl: dt must be positive");
    if (params.scheme == Scheme::explicit_rk4) {
        ComplexField k1 = acgl_rhs(u, t, params, force);
        ComplexField u2 = u; axpy(0.5 * dt, k1, u2);
        ComplexField k2 = acgl_rhs(u2, t + 0.5 * dt, params, force);
        ComplexField u3 = u; axpy(0.5 * dt, k2, u3);
        ComplexField k3 = acgl_rhs(u3, t + 0.5 * dt, params, force);
        ComplexField u4 = u; axpy(dt, k3, u4);
        ComplexField k4 = acgl_rhs(u4, t + dt, params, force);
        ComplexField out = u;
        axpy(dt / 6.0, k1, out);
        axpy(dt / 3.0, k2, out);
        axpy(dt / 3.0, k3, out);
        axpy(dt / 6.0, k4, out);
        check_finite(l2_norm_sq(out), step_index, t);
        return out;
    }
    ComplexField expl = acgl_explicit_part(u, t, params, force);
    check_finite(l2_norm_sq(expl), step_index, t);
    SpectralBasis basis = build_basis(u.domain);
    ModeState rhs = to_state(u);
    ModeState ex = to_state(expl);
    for (std::size_t k = 0; k < rhs.c1.size(); ++k) {
        rhs.c1[k] += dt * ex.c1[k];
        rhs.c2[k] += dt * ex.c2[k];
        implicit_mode_solve(dt, basis.nu[k], params.lambda, params.alpha,
                            rhs.c1[k], rhs.c2[k]);
    }
    ComplexField out = to_field(u.domain, rhs);
    check_finite(l2_norm_sq(out), step_index, t);
    return out;
}

Trajectory integrate_acgl(const ComplexField& u0, const EvolutionParams& params,
                          const Forcing& force, const IntegrateOptions& opts) {
    params.validate();
    auto times = make_time_grid(params.horizon, params.dt);
    TrajectoryRecorder rec(params.dt, times.size(), opts.field_stride);
    rec.record(0, times.size() - 1, 0.0, u0, phi(u0), 0.0, params.q);

    ComplexField u = u0;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        double dt_j = times[j + 1] - times[j];
        ComplexField next = step_acgl(u, times[j], dt_j, params, force, j);
        double phi_next = phi(next);
        check_finite(phi_next, j + 1, times[j + 1]);
        // Backward-difference residual of the equation at the right endpoint.
        ComplexField res = sub(next, u);
        res = scale(1.0 / dt_j, res);
        axpy(1.0, complex_scale(params.lambda, params.alpha, grad_phi(next)), res);
        ComplexField w = grad_psi_r(next, params.q);
        axpy(-double(params.nonlinearity_sign), complex_scale(params.kappa, params.beta, w), res);
        axpy(-params.gamma, next, res);
        if (!force.is_zero()) axpy(-1.0, force.at(times[j + 1]), res);
        u = std::move(next);
        rec.record(j + 1, times.size() - 1, times[j + 1], u, phi_next, l2_norm(res), params.q);
    }
    return rec.traj;
}

// ---------------------------------------------------------------------------
// Auxiliary linear equation and its Yosida-regularized variant

namespace {

Trajectory solve_aeh_core(const ModeSeries& h_modes, const ModeSeries& f_modes,
                          const ComplexField& u0, double s_horizon,
                          const EvolutionParams& params, const IntegrateOptions& opts,
                          bool yosida_split, double mu) {
    params.validate();
    if (!(s_horizon > 0.0))
        throw std::invalid_argument("solve_aeh: horizon must be positive");
    if (yosida_split && params.alpha != 0.0 && !(params.dt <= mu / (4.0 * std::abs(params.alpha))))
        throw std::invalid_argument(
            "solve_aeh_mu: explicit Yosida term requires dt <= mu/(4|alpha|)");

    SpectralBasis basis = build_basis(u0.domain);
    const auto& nu = basis.nu;
    auto times = make_time_grid(s_horizon, params.dt);
    TrajectoryRecorder rec(params.dt, times.size(), opts.field_stride);
    rec.record(0, times.size() - 1, 0.0, u0, phi(u0), 0.0, params.q);

    ModeState c = to_state(u0);
    std::size_t n = c.c1.size();
    ModeState rhs(n), prev(n);
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        double t = times[j];
        double dt_j = times[j + 1] - t;
        prev = c;
        rhs = c;
        // gamma U + (kappa + beta I) h(t) + F(t), all explicit
        for (std::size_t k = 0; k < n; ++k) {
            rhs.c1[k] += dt_j * params.gamma * c.c1[k];
            rhs.c2[k] += dt_j * params.gamma * c.c2[k];
        }
        ModeState src(n);
        h_modes.accumulate(t, 1.0, src);
        accumulate_kappa_beta(dt_j, params.kappa, params.beta, src, rhs);
        f_modes.accumulate(t, dt_j, rhs);
        if (yosida_split) {
            // alpha I yosida_phi(U, mu) explicit, lambda grad_phi implicit.
            // Expression shapes match the non-split branch so the alpha = 0
            // trajectories agree bit for bit.
            for (std::size_t k = 0; k < n; ++k) {
                double y = nu[k] / (1.0 + mu * nu[k]);
                rhs.c1[k] -= dt_j * params.alpha * (y * c.c2[k]);
                rhs.c2[k] -= dt_j * params.alpha * (-y * c.c1[k]);
                double den = 1.0 + dt_j * nu[k] * params.lambda;
                rhs.c1[k] /= den;
                rhs.c2[k] /= den;
            }
        } else {
            for (std::size_t k = 0; k < n; ++k)
                implicit_mode_solve(dt_j, nu[k], params.lambda, params.alpha,
                                    rhs.c1[k], rhs.c2[k]);
        }
        c = rhs;

        // Residual of the integrated equation at the right endpoint.
        double t1 = times[j + 1];
        ModeState res(n);
        for (std::size_t k = 0; k < n; ++k) {
            res.c1[k] = (c.c1[k] - prev.c1[k]) / dt_j - params.gamma * c.c1[k];
            res.c2[k] = (c.c2[k] - prev.c2[k]) / dt_j - params.gamma * c.c2[k];
        }
        if (yosida_split) {
            for (std::size_t k = 0; k < n; ++k) {
                double y = nu[k] / (1.0 + mu * nu[k]);
                res.c1[k] += params.lambda * nu[k] * c.c1[k] + params.alpha * (y * c.c2[k]);
                res.c2[k] += params.lambda * nu[k] * c.c2[k] - params.alpha * (y * c.c1[k]);
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                res.c1[k] += params.lambda * nu[k] * c.c1[k] + params.alpha * (nu[k] * c.c2[k]);
                res.c2[k] += params.lambda * nu[k] * c.c2[k] - params.alpha * (nu[k] * c.c1[k]);
            }
        }
        ModeState src1(n);
        h_modes.accumulate(t1, 1.0, src1);
        accumulate_kappa_beta(-1.0, params.kappa, params.beta, src1, res);
        f_modes.accumulate(t1, -1.0, res);

        ComplexField u = to_field(u0.domain, c);
        rec.record(j + 1, times.size() - 1, t1, u, mode_phi(u0.domain, nu, c),
                   std::sqrt(mode_norm_sq(u0.domain, res)), params.q);
    }
    return rec.traj;
}

}  // namespace

Trajectory solve_linear_aeh(const SourceSeries& h, const Forcing& force,
                            const ComplexField& u0, double s_horizon,
                            const EvolutionParams& params, const IntegrateOptions& opts) {
    return solve_aeh_core(ModeSeries::from_source(h), ModeSeries::from_forcing(force),
                          u0, s_horizon, params, opts, false, 0.0);
}

Trajectory solve_linear_aeh(const Forcing& force, const ComplexField& u0,
                            double s_horizon, const EvolutionParams& params,
                            const IntegrateOptions& opts) {
    return solve_aeh_core(ModeSeries::none(), ModeSeries::from_forcing(force),
                          u0, s_horizon, params, opts, false, 0.0);
}

Trajectory solve_aeh_mu(const SourceSeries& h, const Forcing& force,
                        const ComplexField& u0, double s_horizon, double mu,
                        const EvolutionParams& params, const IntegrateOptions& opts) {
    if (!(mu > 0.0)) throw std::invalid_argument("solve_aeh_mu: mu must be positive");
    return solve_aeh_core(ModeSeries::from_source(h), ModeSeries::from_forcing(force),
                          u0, s_horizon, params, opts, true, mu);
}

YosidaGapReport yosida_mu_gap(const SourceSeries& h, const Forcing& force,
                              const ComplexField& u0, double s_horizon, double mu,
                              double dt, const EvolutionParams& params) {
    if (!(mu > 0.0)) throw std::invalid_argument("yosida_mu_gap: mu must be positive");
    EvolutionParams p = params;
    p.dt = dt;
    p.validate();
    if (p.alpha != 0.0 && !(dt <= mu / (4.0 * std::abs(p.alpha))))
        throw std::invalid_argument("yosida_mu_gap: dt exceeds mu/(4|alpha|)");

    SpectralBasis basis = build_basis(u0.domain);
    const auto& nu = basis.nu;
    const double weight = mode_weight(u0.domain);
    auto times = make_time_grid(s_horizon, dt);
    ModeSeries h_modes = h.samples.empty() ? ModeSeries::none() : ModeSeries::from_source(h);
    ModeSeries f_modes = ModeSeries::from_forcing(force);

    ModeState ref = to_state(u0);
    ModeState reg = ref;
    std::size_t n = ref.c1.size();
    YosidaGapReport rep;

    auto accumulate_gap_integrands = [&](double w) {
        double rg = 0.0, gp = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double csq = reg.c1[k] * reg.c1[k] + reg.c2[k] * reg.c2[k];
            double y = mu * nu[k] / (1.0 + mu * nu[k]);
            rg += y * y * csq;
            gp += nu[k] * nu[k] * csq;
        }
        rep.resolvent_gap_sq += w * weight * rg;
        rep.grad_phi_sq += w * weight * gp;
    };

    accumulate_gap_integrands(0.5 * dt);
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        double t = times[j];
        double dt_j = times[j + 1] - t;
        ModeState src(n);
        h_modes.accumulate(t, 1.0, src);

        // reference step, (lambda + alpha I) grad_phi fully implicit
        ModeState rhs = ref;
        for (std::size_t k = 0; k < n; ++k) {
            rhs.c1[k] += dt_j * p.gamma * ref.c1[k];
            rhs.c2[k] += dt_j * p.gamma * ref.c2[k];
        }
        accumulate_kappa_beta(dt_j, p.kappa, p.beta, src, rhs);
        f_modes.accumulate(t, dt_j, rhs);
        for (std::size_t k = 0; k < n; ++k)
            implicit_mode_solve(dt_j, nu[k], p.lambda, p.alpha, rhs.c1[k], rhs.c2[k]);
        ModeState ref_next = rhs;

        // regularized step, alpha I yosida explicit
        rhs = reg;
        for (std::size_t k = 0; k < n; ++k) {
            rhs.c1[k] += dt_j * p.gamma * reg.c1[k];
            rhs.c2[k] += dt_j * p.gamma * reg.c2[k];
            double y = nu[k] / (1.0 + mu * nu[k]);
            rhs.c1[k] -= dt_j * p.alpha * y * reg.c2[k];
            rhs.c2[k] += dt_j * p.alpha * y * reg.c1[k];
        }
        accumulate_kappa_beta(dt_j, p.kappa, p.beta, src, rhs);
        f_modes.accumulate(t, dt_j, rhs);
        for (std::size_t k = 0; k < n; ++k) {
            double den = 1.0 + dt_j * p.lambda * nu[k];
            rhs.c1[k] /= den;
            rhs.c2[k] /= den;
        }
        reg = rhs;
        ref = ref_next;

        double gap = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double d1 = reg.c1[k] - ref.c1[k];
            double d2 = reg.c2[k] - ref.c2[k];
            gap += d1 * d1 + d2 * d2;
        }
        rep.sup_gap = std::max(rep.sup_gap, std::sqrt(weight * gap));
        accumulate_gap_integrands(j + 2 < times.size() ? dt_j : 0.5 * dt_j);
    }
    return rep;
}

SourceSeries nonlinearity_series(const Trajectory& traj, double q) {
    if (!traj.has_all_fields())
        throw std::invalid_argument("nonlinearity_series: trajectory must store every field");
    SourceSeries h;
    h.times = traj.times;
    h.samples.reserve(traj.fields.size());
    for (const auto& u : traj.fields) h.samples.push_back(grad_psi_r(u, q));
    return h;
}

// ---------------------------------------------------------------------------
// Picard fixed point

FixedPointResult fixed_point_solve(const ComplexField& u0, const Forcing& force,
                                   double s_request, const EvolutionParams& params,
                                   double tol, int max_iter) {
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("fixed_point_solve: tol must be positive");
    if (!(params.lambda > 0.0))
        throw std::invalid_argument("fixed_point_solve: lambda must be positive");
    if (!(s_request > 0.0))
        throw std::invalid_argument("fixed_point_solve: horizon request must be positive");

    FixedPointResult result;
    FixedPointReport& rep = result.report;
    rep.radius = std::max(0.5 * l2_norm_sq(u0) + phi(u0) +
                              force.l2t_norm_sq(params.horizon, params.dt) / params.lambda,
                          1.0);

    // Shrink S until one Picard sweep keeps the image inside ||h||^2 <= R.
    double s = std::min(s_request, params.horizon);
    SourceSeries h0, h1;
    for (int shrink = 0; shrink < 48; ++shrink) {
        Trajectory traj0 = solve_linear_aeh(force, u0, s, params);
        h0 = nonlinearity_series(traj0, params.q);
        Trajectory traj1 = solve_linear_aeh(h0, force, u0, s, params);
        h1 = nonlinearity_series(traj1, params.q);
        if (hs_norm_sq(h0) <= rep.radius && hs_norm_sq(h1) <= rep.radius) break;
        s *= 0.5;
    }
    rep.s_horizon = s;

    auto ball_check = [&](const SourceSeries& h) {
        double nsq = hs_norm_sq(h);
        if (nsq > rep.radius) {
            rep.all_iterates_in_ball = false;
            rep.escape_norm_sq = nsq;
            return false;
        }
        return true;
    };
    ball_check(h0);

    SourceSeries h = std::move(h0);
    SourceSeries next = std::move(h1);
    for (int it = 0; it < max_iter; ++it) {
        double d = hs_distance(next, h);
        rep.distances.push_back(d);
        if (!ball_check(next)) {
            rep.status = FixedPointReport::Status::ball_escape;
            h = std::move(next);
            break;
        }
        h = std::move(next);
        if (d <= tol) {
            rep.converged = true;
            rep.status = FixedPointReport::Status::converged;
            break;
        }
        Trajectory traj = solve_linear_aeh(h, force, u0, s, params);
        next = nonlinearity_series(traj, params.q);
    }
    if (!rep.converged && rep.status != FixedPointReport::Status::ball_escape)
        rep.status = FixedPointReport::Status::non_contractive;
    rep.iterations = int(rep.distances.size());
    rep.final_residual = rep.distances.empty() ? 0.0 : rep.distances.back();

    result.trajectory = solve_linear_aeh(h, force, u0, s, params);
    result.h = std::move(h);
    return result;
}

std::vector<double> acgl_residual(const Trajectory& traj, const Forcing& force,
                                  const EvolutionParams& params) {
    if (!traj.has_all_fields())
        throw std::invalid_argument("acgl_residual: trajectory must store every field");
    if (traj.times.size() < 2)
        throw std::invalid_argument("acgl_residual: need at least two steps");
    std::vector<double> out(traj.times.size(), 0.0);
    for (std::size_t j = 1; j < traj.times.size(); ++j) {
        double dt_j = traj.times[j] - traj.times[j - 1];
        const ComplexField& u = traj.fields[j];
        ComplexField res = sub(u, traj.fields[j - 1]);
        res = scale(1.0 / dt_j, res);
        axpy(1.0, complex_scale(params.lambda, params.alpha, grad_phi(u)), res);
        ComplexField w = grad_psi_r(u, params.q);
        axpy(-double(params.nonlinearity_sign),
             complex_scale(params.kappa, params.beta, w), res);
        axpy(-params.gamma, u, res);
        if (!force.is_zero()) axpy(-1.0, force.at(traj.times[j]), res);
        out[j] = l2_norm(res);
    }
    return out;
}

}  // namespace cgl
