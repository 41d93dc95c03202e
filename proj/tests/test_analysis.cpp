#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgl/analysis.hpp"
#include "cgl/config.hpp"

#include <cmath>

using namespace cgl;

namespace {

ComplexField eigenmode(const Domain& d, double amp) {
    return scale(amp, parse_mode_field(d, "1:1:0"));
}

EvolutionParams focusing_params(double kappa) {
    EvolutionParams p;
    p.lambda = 1.0;
    p.kappa = kappa;
    p.alpha = 0.0;
    p.beta = 0.0;
    p.gamma = 0.0;
    p.q = 4.0;
    return p;
}

// Scalar RK4 for the first-mode comparison ODE a' = -a + (15/4) a^3.
double first_mode_ode_crossing(double a0, double a_target) {
    auto f = [](double a) { return -a + 3.75 * a * a * a; };
    double a = a0, t = 0.0;
    while (a < a_target) {
        double dt = 1e-4 / (1.0 + 3.75 * a * a);  // shrink with the growth rate
        double k1 = f(a);
        double k2 = f(a + 0.5 * dt * k1);
        double k3 = f(a + 0.5 * dt * k2);
        double k4 = f(a + dt * k3);
        a += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
        if (t > 10.0) break;
    }
    return t;
}

}  // namespace

TEST_CASE("window norm closed forms") {
    Domain d = Domain::interval(M_PI, 32);
    CHECK(window_norm(Forcing::zero(d), 2.0, 1e-2, WindowKind::L2) == 0.0);

    ComplexField g = eigenmode(d, 1.0);
    double c = l2_norm(g);
    Forcing constant = Forcing::constant(g);
    CHECK(window_norm(constant, 2.0, 1e-3, WindowKind::L2) ==
          doctest::Approx(c).epsilon(1e-12));
    CHECK(window_norm(constant, 2.0, 1e-3, WindowKind::L1) ==
          doctest::Approx(c).epsilon(1e-12));
    // zero-extension truncates a short horizon
    CHECK(window_norm(constant, 0.5, 1e-3, WindowKind::L2) ==
          doctest::Approx(c * std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("blow-up detector: focusing large data blows up, crossing is stable") {
    Domain d = Domain::interval(M_PI, 32);
    EvolutionParams p = focusing_params(5.0);
    p.horizon = 1.0;
    ComplexField u0 = eigenmode(d, 10.0);
    BlowupPolicy policy;
    policy.initial_dt = 1e-2;
    BlowupVerdict v = detect_blowup(p, u0, Forcing::zero(d), 1e8, policy);
    REQUIRE(v.outcome == BlowupVerdict::Outcome::blowup);
    CHECK(v.t_blowup > 0.0);
    CHECK(v.t_blowup < 0.05);
    REQUIRE(v.estimates.size() >= 3);
    std::size_t m = v.estimates.size();
    CHECK(std::abs(v.estimates[m - 1] - v.estimates[m - 2]) <
          0.05 * v.estimates[m - 2]);

    // First-mode ODE comparison: the PDE crossing time has the same scale.
    double a_theta = std::sqrt(1e8 * 4.0 / M_PI);
    double t_ode = first_mode_ode_crossing(10.0, a_theta);
    CHECK(v.t_blowup == doctest::Approx(t_ode).epsilon(0.5));

    // Explicit RK4 as an independent oracle for the crossing time.
    EvolutionParams pr = p;
    pr.scheme = Scheme::explicit_rk4;
    BlowupPolicy fine = policy;
    fine.initial_dt = 2e-3;
    BlowupVerdict vr = detect_blowup(pr, u0, Forcing::zero(d), 1e8, fine);
    REQUIRE(vr.outcome == BlowupVerdict::Outcome::blowup);
    CHECK(vr.t_blowup == doctest::Approx(v.t_blowup).epsilon(0.10));
}

TEST_CASE("blow-up detector: small data is global with decaying energy") {
    Domain d = Domain::interval(M_PI, 32);
    EvolutionParams p = focusing_params(5.0);
    p.horizon = 10.0;
    ComplexField u0 = eigenmode(d, 0.01);
    BlowupPolicy policy;
    policy.initial_dt = 1e-2;
    BlowupVerdict v = detect_blowup(p, u0, Forcing::zero(d), 1e8, policy);
    CHECK(v.outcome == BlowupVerdict::Outcome::global_on_horizon);
    CHECK(v.peak_phi == doctest::Approx(phi(u0)).epsilon(1e-9));  // decay from t = 0
}

TEST_CASE("defocusing sanity scenario never blows up at large amplitude") {
    Domain d = Domain::interval(M_PI, 32);
    EvolutionParams p = focusing_params(5.0);
    p.nonlinearity_sign = -1;
    p.horizon = 1.0;
    ComplexField u0 = eigenmode(d, 100.0);
    BlowupPolicy policy;
    policy.initial_dt = 1e-2;
    BlowupVerdict v = detect_blowup(p, u0, Forcing::zero(d), 1e8, policy);
    CHECK(v.outcome == BlowupVerdict::Outcome::global_on_horizon);
    CHECK(v.defocusing_scenario);
    CHECK(v.peak_phi < 1e8);
}

TEST_CASE("certificate constants match hand evaluation") {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p = focusing_params(1.0);
    SmallDataCertificate c = small_data_certificate(p, d, 150, 5);
    CHECK(c.lambda1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.delta0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.delta == doctest::Approx(1.0).epsilon(1e-14));
    double n1 = std::sqrt(2.0) + 1.0 / (1.0 - std::exp(-0.5));
    CHECK(c.n1 == doctest::Approx(n1).epsilon(1e-12));
    CHECK(c.n2 == doctest::Approx((n1 + 0.5 * n1 * n1) / 1.0).epsilon(1e-12));
    // eps0 = (delta0 / (2 C kappa q))^{2/(q-2)} with q = 4 -> exponent 1
    CHECK(c.eps0 == doctest::Approx(2.0 / (8.0 * c.sobolev_c)).epsilon(1e-12));
    double expect_n = 2.0 + 1.0 / (1.0 - std::exp(-0.25)) *
                                (c.c_eps_lambda * c.n2 + 1.0);
    CHECK(c.n_total == doctest::Approx(expect_n).epsilon(1e-12));
    CHECK(c.eps1 == doctest::Approx(c.eps0 / c.n_total).epsilon(1e-14));
    CHECK(c.eps1 <= c.eps0);
    CHECK(c.eps0 > 0.0);
    CHECK(c.n_total > 2.0);

    // direct evaluation example with gamma > 0
    EvolutionParams pg = p;
    pg.gamma = 0.5;
    SmallDataCertificate cg = small_data_certificate(pg, d, 150, 5);
    CHECK(cg.delta0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(cg.delta == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("certificate applicability and monotonicity") {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p = focusing_params(1.0);
    p.gamma = 1.0;  // gamma = lambda lambda1: not applicable
    CHECK_THROWS_AS(small_data_certificate(p, d, 50, 1), NotApplicable);

    // increasing kappa never increases eps0 (same measured C)
    EvolutionParams p1 = focusing_params(1.0);
    EvolutionParams p2 = focusing_params(2.0);
    SmallDataCertificate c1 = small_data_certificate(p1, d, 80, 3);
    SmallDataCertificate c2 = small_data_certificate(p2, d, 80, 3);
    CHECK(c1.sobolev_c == doctest::Approx(c2.sobolev_c));  // C independent of kappa
    CHECK(c2.eps0 <= c1.eps0);

    // gamma -> lambda lambda1 sends delta0 to 0
    EvolutionParams p3 = focusing_params(1.0);
    p3.gamma = 0.999;
    SmallDataCertificate c3 = small_data_certificate(p3, d, 80, 3);
    CHECK(c3.delta0 == doctest::Approx(0.002).epsilon(1e-10));
}

TEST_CASE("coercivity fuzz below eps0 has no failures") {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p = focusing_params(1.0);
    SmallDataCertificate cert = small_data_certificate(p, d, 150, 5);
    CoercivityFuzzReport rep = coercivity_fuzz(p, d, cert, 500, 99);
    CHECK(rep.failures == 0);
    CHECK(rep.worst_margin >= 0.0);
}

TEST_CASE("monitored global run passes with r = eps1/2 and is dt-robust") {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p = focusing_params(1.0);
    p.horizon = 10.0;
    SmallDataCertificate cert = small_data_certificate(p, d, 150, 5);
    double r = 0.5 * cert.eps1;
    ComplexField e1 = eigenmode(d, 1.0);
    ComplexField u0 = scale(r / std::sqrt(phi(e1)), e1);

    for (double dt : {1e-2, 5e-3}) {
        EvolutionParams ps = p;
        ps.dt = dt;
        MonitorReport rep = monitored_global_run(ps, u0, Forcing::zero(d), cert, r);
        CHECK(rep.passed);
        CHECK(rep.phi_decreasing);
        CHECK(rep.max_phi < rep.phi_bound);
        CHECK(rep.max_phi_ratio <= 0.95);  // bound not grazed
        CHECK(rep.coercivity_failures == 0);
    }
}

TEST_CASE("monitored run with nonzero forcing at the window bound") {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p = focusing_params(1.0);
    p.horizon = 6.0;
    p.dt = 5e-3;
    SmallDataCertificate cert = small_data_certificate(p, d, 150, 5);
    double r = 0.5 * cert.eps1;
    ComplexField e1 = eigenmode(d, 1.0);
    ComplexField u0 = scale(r / std::sqrt(phi(e1)), e1);
    // constant forcing with window_norm exactly r (horizon > 1)
    ComplexField f = scale(r / l2_norm(e1), e1);
    MonitorReport rep = monitored_global_run(p, u0, Forcing::constant(f), cert, r);
    CHECK(rep.passed);
    CHECK(rep.max_phi < cert.n_total * r * r);
}

TEST_CASE("monitored run rejects out-of-certificate data") {
    Domain d = Domain::interval(M_PI, 64);
    EvolutionParams p = focusing_params(1.0);
    SmallDataCertificate cert = small_data_certificate(p, d, 80, 5);
    double r = 0.5 * cert.eps1;
    ComplexField huge = eigenmode(d, 100.0);  // phi = 1e4 pi / 4 >> r^2
    CHECK_THROWS_AS(monitored_global_run(p, huge, Forcing::zero(d), cert, r),
                    std::invalid_argument);
    ComplexField e1 = eigenmode(d, 1.0);
    ComplexField u0 = scale(r / std::sqrt(phi(e1)), e1);
    CHECK_THROWS_AS(monitored_global_run(p, u0, Forcing::zero(d), cert, 2.0 * cert.eps1),
                    std::invalid_argument);
}
