#pragma once

#include "cgl/monotone.hpp"

#include <functional>
#include <optional>
#include <string>

namespace cgl {

enum class Scheme { semi_implicit, explicit_rk4 };

/// Coefficients and time-step policy of the evolution
///   dU/dt + (lambda + alpha I) grad_phi(U)
///         - (kappa + beta I) grad_psi_q(U) - gamma U = F(t).
///
/// The modeled regime has lambda, kappa > 0; the library accepts zero values
/// so degenerate sub-problems (pure rotation, decoupled nonlinearity) remain
/// runnable.  The CLI enforces strict positivity.
struct EvolutionParams {
    double lambda = 1.0;
    double alpha = 0.0;
    double kappa = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double q = 4.0;          // 2 < q < 2* (subcritical)
    double horizon = 1.0;    // T
    double dt = 1e-2;
    Scheme scheme = Scheme::semi_implicit;
    int nonlinearity_sign = +1;  // -1 flips the power term (defocusing sanity runs)

    double gamma_plus() const { return gamma > 0.0 ? gamma : 0.0; }

    /// Throws on invalid step/horizon/exponent (q must exceed 2; it is always
    /// subcritical in dimensions 1 and 2).
    void validate() const;
};

/// External force: zero, a constant field, or a time-sampled sequence with
/// linear interpolation between samples.
class Forcing {
  public:
    static Forcing zero(const Domain& d);
    static Forcing constant(ComplexField f);
    static Forcing sampled(std::vector<double> times, std::vector<ComplexField> fields);

    ComplexField at(double t) const;
    const Domain& domain() const { return domain_; }
    bool is_zero() const { return kind_ == Kind::zero; }

    /// int_0^T |F(t)|_{L2}^2 dt by trapezoid at resolution dt.
    double l2t_norm_sq(double horizon, double dt) const;

    enum class Kind { zero, constant, sampled };
    Kind kind() const { return kind_; }
    const std::vector<double>& sample_times() const { return times_; }
    const std::vector<ComplexField>& samples() const { return fields_; }

  private:
    Kind kind_ = Kind::zero;
    Domain domain_;
    std::vector<double> times_;
    std::vector<ComplexField> fields_;
};

/// Time-sampled source history h(t) on [0, S], piecewise linear in t.
struct SourceSeries {
    std::vector<double> times;
    std::vector<ComplexField> samples;

    ComplexField at(double t) const;
    void validate() const;
};

/// ||h||^2 in L2(0,S; L2) by trapezoid over the sample grid.
double hs_norm_sq(const SourceSeries& h);
double hs_distance(const SourceSeries& a, const SourceSeries& b);

struct StepDiagnostics {
    double l2_sq = 0.0;
    double phi = 0.0;
    double psi_q = 0.0;
    double residual = 0.0;  // equation residual at this step (0 at t = 0)
};

struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;          // t_0 = 0, uniform dt, final step may be partial
    std::vector<StepDiagnostics> diag;  // one entry per time
    std::vector<ComplexField> fields;   // stored every field_stride steps
    std::vector<std::size_t> field_steps;

    bool has_all_fields() const { return fields.size() == times.size(); }
    const ComplexField& initial() const { return fields.front(); }
    const ComplexField& final() const { return fields.back(); }
    double sup_phi() const;
    double sup_psi_q() const;
};

/// Thrown when the nonlinear term overflows or produces NaN during stepping.
struct BlowupSignal : std::runtime_error {
    std::size_t step;
    double time;
    BlowupSignal(std::size_t step_, double time_)
        : std::runtime_error("field blow-up at step " + std::to_string(step_)),
          step(step_), time(time_) {}
};

struct IntegrateOptions {
    std::size_t field_stride = 1;  // 0 = keep only initial and final fields
};

/// One step of the full equation from state (u, t) with explicit step size.
/// semi_implicit treats the whole (lambda + alpha I) grad_phi implicitly via
/// the exact per-mode 2x2 inverse and everything else explicitly;
/// explicit_rk4 is the classical 4-stage rule on the full right-hand side.
ComplexField step_acgl(const ComplexField& u, double t, double dt,
                       const EvolutionParams& params, const Forcing& force,
                       std::size_t step_index = 0);

/// Integrate the full equation on [0, params.horizon] with fixed dt.
Trajectory integrate_acgl(const ComplexField& u0, const EvolutionParams& params,
                          const Forcing& force, const IntegrateOptions& opts = {});

/// Auxiliary linear equation: the power term is replaced by a given source
/// history h(t).  Same semi-implicit mode rule; the equation is linear in U.
Trajectory solve_linear_aeh(const SourceSeries& h, const Forcing& force,
                            const ComplexField& u0, double s_horizon,
                            const EvolutionParams& params,
                            const IntegrateOptions& opts = {});
/// Overload with h = 0.
Trajectory solve_linear_aeh(const Forcing& force, const ComplexField& u0,
                            double s_horizon, const EvolutionParams& params,
                            const IntegrateOptions& opts = {});

/// Yosida-regularized auxiliary equation: lambda grad_phi stays implicit,
/// alpha I yosida_phi(., mu) is stepped explicitly.  The explicit part is
/// Lipschitz with constant |alpha|/mu, so dt must satisfy dt <= mu/(4|alpha|).
Trajectory solve_aeh_mu(const SourceSeries& h, const Forcing& force,
                        const ComplexField& u0, double s_horizon, double mu,
                        const EvolutionParams& params,
                        const IntegrateOptions& opts = {});

/// Lockstep comparison of solve_aeh_mu against solve_linear_aeh at equal dt.
/// Returns the sup over all steps of the L2 gap plus the data for the
/// resolvent-gap inequality ||U_mu - J_mu U_mu||_{L2(0,S;L2)} <= mu ||grad_phi(U_mu)||_{L2(0,S;L2)}.
struct YosidaGapReport {
    double sup_gap = 0.0;            // sup_t |U_mu(t) - U(t)|_{L2}
    double resolvent_gap_sq = 0.0;   // int |U_mu - J_mu U_mu|^2 dt
    double grad_phi_sq = 0.0;        // int |grad_phi(U_mu)|^2 dt
};
YosidaGapReport yosida_mu_gap(const SourceSeries& h, const Forcing& force,
                              const ComplexField& u0, double s_horizon, double mu,
                              double dt, const EvolutionParams& params);

/// Extract h(t_j) = grad_psi_q(U(t_j)) from a stride-1 trajectory.
SourceSeries nonlinearity_series(const Trajectory& traj, double q);

struct FixedPointReport {
    enum class Status { converged, non_contractive, ball_escape };
    Status status = Status::converged;
    double radius = 0.0;             // R of the invariant ball, ||h||^2 <= R
    double s_horizon = 0.0;          // S actually used
    std::vector<double> distances;   // ||h_{n+1} - h_n|| per sweep
    double final_residual = 0.0;     // last distance
    bool converged = false;
    int iterations = 0;
    bool all_iterates_in_ball = true;
    double escape_norm_sq = 0.0;     // offending ||h||^2 on ball escape
};

struct FixedPointResult {
    SourceSeries h;
    Trajectory trajectory;
    FixedPointReport report;
};

/// Picard iteration h_{n+1}(t) = grad_psi_q(U^{h_n}(t)) realizing the
/// fixed-point construction of the full equation:
///   R = max(1/2 |U0|^2 + phi(U0) + ||F||^2/lambda, 1),
///   S <= s_request halved until one sweep keeps the image inside the ball
///   ||h||^2 <= R, then iterate until the sweep distance drops below tol.
/// Non-convergence is a diagnosis in the report, not an exception.
FixedPointResult fixed_point_solve(const ComplexField& u0, const Forcing& force,
                                   double s_request, const EvolutionParams& params,
                                   double tol, int max_iter);

/// Backward-difference residual of the full equation along a stride-1
/// trajectory, one L2 norm per step (entry 0 is 0).
std::vector<double> acgl_residual(const Trajectory& traj, const Forcing& force,
                                  const EvolutionParams& params);

}  // namespace cgl
