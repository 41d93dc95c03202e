#pragma once

#include "cgl/evolution.hpp"

namespace cgl {

struct SupercriticalExponent : std::invalid_argument {
    explicit SupercriticalExponent(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Interpolation exponents of the embedding chain used to control the power
/// nonlinearity by the H1 energy.
///   xi  : H2/L-critical interpolation weight for |U|_{L^{2(q-1)}},
///   chi : the resulting power of phi after Young's inequality (> 1 iff q > 2),
///   eta : L2/H1 interpolation weight for |U|_{L^q},
///   critical : the Sobolev-critical exponent 2* (infinity for N = 1, 2).
struct GnsExponents {
    double xi = 0.0;
    double chi = 0.0;
    double eta = 0.0;
    double critical = 0.0;
};

double critical_exponent(int dim);

/// Solves the two linear interpolation identities for (xi, eta) and forms chi.
/// Requires 2 < q < 2*(dim); guarantees chi > 1 and (1 - xi)(q - 1) < 1.
GnsExponents gns_exponents(double q, int dim);

/// Proof-derived envelope constants for the auxiliary-equation energy bounds
/// on [0, S]: sup |U|^2 + int phi <= C1 R and
/// sup phi + int |grad_phi|^2 + int |dU/dt|^2 <= C2 R.
double energy_envelope_c1(const EvolutionParams& p, double s_horizon);
double energy_envelope_c2(const EvolutionParams& p, double s_horizon);

struct EnergyReport {
    std::vector<double> first_residual;   // balance of d/dt |U|^2/2 (entry 0 = 0)
    std::vector<double> second_residual;  // balance of d/dt phi
    double first_residual_sup = 0.0;
    double second_residual_sup = 0.0;

    double radius = 0.0;       // R from the initial data and forcing
    double h_norm_sq = 0.0;
    bool h_in_ball = true;     // ||h||^2 <= R
    double c1 = 0.0, c2 = 0.0;
    double first_measured = 0.0;
    double second_measured = 0.0;
    bool first_envelope_ok = true;
    bool second_envelope_ok = true;
};

/// Residuals of the two energy identities along a stride-1 trajectory of the
/// auxiliary equation, plus the envelope comparison against C1 R and C2 R.
EnergyReport energy_identity_report(const Trajectory& traj, const SourceSeries& h,
                                    const Forcing& force, const EvolutionParams& params);

/// Empirical constant C with psi_q(U) <= C phi(U)^{q/2}, from the maximum of
/// the scale-invariant ratio over seeded random fields, eigenmodes and a
/// coordinate-ascent refinement, times a safety factor 2, floored at 1.
/// Lower-bound-based: a larger trial family can only raise it.
double estimate_sobolev_constant(const Domain& domain, double q, int trials,
                                 std::uint64_t seed);

/// Empirical constant C_eps of the splitting
///   |grad_psi_q(U)|^2 <= eps (|grad_phi(U)|^2 + |U|^2) + C_eps phi(U)^chi,
/// measured over trial fields scaled to phi <= 1 (the regime in which the
/// splitting is applied), times a safety factor 2.
double measure_splitting_constant(const Domain& domain, double q, double eps,
                                  int trials, std::uint64_t seed);

/// Empirical constant of |W|_{L^q} <= C phi(W)^{(1-eta)/2} |W|_{L2}^eta
/// (ratio is scale-invariant), times a safety factor 2.
double measure_interpolation_constant(const Domain& domain, double q, int trials,
                                      std::uint64_t seed);

/// L^r norm induced by psi_r, |U|_{L^r} = (r psi_r(U))^{1/r}.
double lr_norm(const ComplexField& u, double r);

struct GronwallEnvelope {
    double j0 = 0.0;
    double delta = 0.0;
    double big_k = 0.0;
    double f_window_l1 = 0.0;  // sup over unit windows of int |f~|

    double value(double t) const;
};

/// Envelope j0 e^{-delta t} + K/(1-e^{-delta}) * |||f|||_1 for series
/// satisfying j' + delta j <= K |f|; f is zero-extended beyond its samples
/// and the window sup slides at the sample resolution.
GronwallEnvelope gronwall_envelope(double j0, double delta, double big_k,
                                   const std::vector<double>& f_times,
                                   const std::vector<double>& f_values);

/// True when j_values stays below the envelope (relative slack rtol).
bool gronwall_check(const GronwallEnvelope& env, const std::vector<double>& times,
                    const std::vector<double>& j_values, double rtol = 1e-9);

/// Window norm of a scalar time series: sup over unit-length windows of the
/// integral of |f| (L1 kind) or sqrt of the integral of f^2 (L2 kind), with
/// zero extension beyond the samples.
enum class WindowKind { L1, L2 };
double window_norm_series(const std::vector<double>& times,
                          const std::vector<double>& values, WindowKind kind);

struct LipschitzReport {
    double r = 0.0;
    double d_r = 0.0;        // constant of the product inequality
    double d_tilde_r = 0.0;  // constant of the modulus-difference inequality
    std::size_t samples = 0;
    std::size_t violations_main = 0;
    std::size_t violations_diff = 0;
    // worst relative excess observed (<= 0 when the inequalities hold)
    double worst_excess_main = -1.0;
    double worst_excess_diff = -1.0;
};

/// Fuzz check of the pointwise local-Lipschitz inequalities for |U|^{r-2}U on
/// R^2 pairs, including degenerate (zero, collinear, equal-modulus) cases:
///   |(|U|^{r-2}u_i - |V|^{r-2}v_i)(u_j - v_j)| <= d_r (|U|^{r-2}+|V|^{r-2}) |U-V|^2
///   ||U|^{r-2} - |V|^{r-2}| <= d~_r (|U|^{r-3}+|V|^{r-3}) |U-V|
/// with d_r = 1 (2<r<=3), 3/2 (3<r<4), (r-1)/2 (r>=4) and
/// d~_r = (r-2)/2 (2<r<=3 or r>=4), 1 (3<r<4).
LipschitzReport check_pointwise_lipschitz(double r, std::size_t samples,
                                          std::uint64_t seed);

double lipschitz_d_r(double r);
double lipschitz_d_tilde_r(double r);

struct UniquenessReport {
    double m_sup = 0.0;       // sup of psi_q over both trajectories
    double c_measured = 0.0;  // smallest constant closing the difference bound
    double rate = 0.0;        // exponent rate 2 C (2 M^{q-2})^{1/eta} + gamma_+
    bool envelope_ok = true;
    double final_ratio = 0.0;  // |W|^2 / envelope at the final time
    std::vector<double> wsq;
    std::vector<double> envelope;
};

/// Continuous-dependence envelope for two trajectories of the same equation:
/// measures the smallest C making
///   1/2 d/dt |W|^2 + lambda phi(W) <= [C (psi_q(U)^{q-2}+psi_q(V)^{q-2})^{1/eta} + gamma_+] |W|^2
/// hold along the run, then checks
///   |W(t)|^2 <= |W(0)|^2 exp([2 C (2 M^{q-2})^{1/eta} + gamma_+] t).
UniquenessReport uniqueness_envelope(const Trajectory& a, const Trajectory& b,
                                     const EvolutionParams& params, double eta);

}  // namespace cgl
