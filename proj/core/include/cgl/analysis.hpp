#pragma once

#include "cgl/estimates.hpp"

#include <limits>

namespace cgl {

/// Thrown when the small-data construction does not apply (gamma >= lambda*lambda1).
struct NotApplicable : std::invalid_argument {
    explicit NotApplicable(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Window norm of the forcing: zero-extend to [0, infinity) and take the sup
/// over unit-length windows, sliding at dt resolution, of the window integral
/// of |F(t)|_{L2} (L1 kind) or its square root for |F(t)|^2 (L2 kind).
double window_norm(const Forcing& force, double horizon, double dt, WindowKind kind);

struct BlowupPolicy {
    double initial_dt = 1e-2;
    double growth_trigger = 0.10;  // halve dt when phi grows by more than this per step
    double recover_trigger = 5e-3; // allow dt to grow back below this growth
    double min_dt = 1e-12;
    int max_refinements = 8;
    double stability_tol = 0.05;   // crossing-time stability across refinements
};

struct BlowupVerdict {
    enum class Outcome { global_on_horizon, blowup, inconclusive };
    Outcome outcome = Outcome::global_on_horizon;
    double t_blowup = -1.0;         // stabilized crossing-time estimate
    double peak_phi = 0.0;
    std::vector<double> estimates;  // crossing time per dt refinement
    int refinements = 0;
    bool defocusing_scenario = false;
};

/// Operational realization of the maximal-time alternative: integrate with an
/// adaptive step (halving on fast energy growth), declare blow-up once phi
/// crosses theta at a crossing time stable within stability_tol across two
/// successive dt refinements; otherwise the run is global on the horizon.
/// dt underflow before stabilization yields an inconclusive verdict.
BlowupVerdict detect_blowup(const EvolutionParams& params, const ComplexField& u0,
                            const Forcing& force, double theta,
                            const BlowupPolicy& policy = {});

/// Constants of the small-data global-existence certificate, all computed
/// from their closed forms with the measured Sobolev and splitting constants.
struct SmallDataCertificate {
    double lambda1 = 0.0;
    double delta0 = 0.0;       // 2 (lambda - gamma / lambda1)
    double delta = 0.0;        // delta0 / 2
    double sobolev_c = 0.0;    // measured C with psi_q <= C phi^{q/2}
    double eps0 = 0.0;         // (delta0 / (2 C kappa q))^{2/(q-2)}
    double n1 = 0.0;           // sqrt(2/lambda1) + 1/(1 - e^{-delta lambda1 / 2})
    double n2 = 0.0;           // (n1 + n1^2/2) / delta
    double eps_lambda = 0.0;   // lambda^2 / (8 (kappa^2 + beta^2))
    double c_eps_lambda = 0.0; // measured splitting constant at eps_lambda
    double n_total = 0.0;      // 2 + (1 - e^{-lambda lambda1/4})^{-1} ((2 gamma_+ + C_eps) n2 + 1/lambda)
    double eps1 = 0.0;         // eps0 / N
    double radius = 0.0;       // default admissible radius, eps1 / 2
    int trials = 0;
    std::uint64_t seed = 0;
};

SmallDataCertificate small_data_certificate(const EvolutionParams& params,
                                            const Domain& domain, int trials,
                                            std::uint64_t seed);

struct MonitorReport {
    bool passed = false;
    bool blowup_triggered = false;
    double radius = 0.0;            // r used for the run
    double phi_bound = 0.0;         // N r^2
    double max_phi = 0.0;
    double max_phi_ratio = 0.0;     // max phi / (N r^2)
    std::size_t coercivity_checks = 0;
    std::size_t coercivity_failures = 0;
    bool reestimated = false;       // certificate rebuilt once after a failure
    bool phi_decreasing = true;     // monotone decay (meaningful when F = 0)
    Trajectory trajectory;
    SmallDataCertificate certificate;  // possibly re-derived
};

/// Global run under the certificate: requires phi(U0) <= r^2,
/// window_norm(F) <= r and r < eps1; asserts phi(U(t)) < N r^2 throughout and
/// monitors the coercivity balance 1/2 d/dt |U|^2 + delta phi <= |F| |U|
/// whenever phi <= eps0 (up to an O(dt) discrete-residual allowance).  A
/// coercivity failure triggers one re-estimation of the Sobolev constant and
/// a re-derived certificate; persistent failure is reported as a defect.
MonitorReport monitored_global_run(const EvolutionParams& params, const ComplexField& u0,
                                   const Forcing& force, const SmallDataCertificate& cert,
                                   double radius);

struct CoercivityFuzzReport {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
};

/// For random fields scaled below the certificate level phi < eps0, checks
/// (lambda grad_phi(U) - kappa grad_psi_q(U) - gamma U, U) >= delta phi(U)
/// >= (delta lambda1 / 2) |U|^2.
CoercivityFuzzReport coercivity_fuzz(const EvolutionParams& params, const Domain& domain,
                                     const SmallDataCertificate& cert, std::size_t trials,
                                     std::uint64_t seed);

}  // namespace cgl
