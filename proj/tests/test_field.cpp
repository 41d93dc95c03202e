#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgl/field.hpp"
#include "cgl/monotone.hpp"

#include <cmath>
#include <complex>

using namespace cgl;

namespace {

double rel_diff(const ComplexField& a, const ComplexField& b) {
    return l2_norm(sub(a, b)) / (l2_norm(b) + 1e-300);
}

}  // namespace

TEST_CASE("apply_i maps (g, 0) to (0, -g) and squares to -1") {
    Domain d = Domain::interval(M_PI, 32);
    ComplexField u(d);
    for (int j = 0; j < 32; ++j) u.u1.values[j] = std::cos(d.coord(0, j));
    ComplexField iu = apply_i(u);
    for (int j = 0; j < 32; ++j) {
        CHECK(iu.u1.values[j] == 0.0);
        CHECK(iu.u2.values[j] == -u.u1.values[j]);
    }
    for (int s = 0; s < 20; ++s) {
        ComplexField w = random_field(d, 100 + s, 0.5);
        ComplexField ii = apply_i(apply_i(w));
        axpy(1.0, w, ii);
        CHECK(l2_norm(ii) <= 1e-14 * l2_norm(w));
        CHECK(l2_norm(apply_i(w)) == doctest::Approx(l2_norm(w)).epsilon(1e-13));
    }
}

TEST_CASE("complex_scale basics and conjugate composition") {
    Domain d = Domain::interval(2.0, 48);
    for (int s = 0; s < 30; ++s) {
        ComplexField u = random_field(d, s, 0.4);
        CHECK(rel_diff(complex_scale(1.0, 0.0, u), u) < 1e-15);
        CHECK(rel_diff(complex_scale(0.0, 1.0, u), apply_i(u)) < 1e-15);
        double a = 1.3, b = -0.8;
        ComplexField w = complex_scale(a, -b, complex_scale(a, b, u));
        ComplexField want = scale(a * a + b * b, u);
        CHECK(rel_diff(w, want) < 1e-12);
    }
}

TEST_CASE("inner products: skew orthogonality, antisymmetry, Bessel") {
    Domain d = Domain::interval(M_PI, 48);
    for (int s = 0; s < 50; ++s) {
        ComplexField u = random_field(d, 2 * s, 0.6);
        ComplexField v = random_field(d, 2 * s + 1, 0.6);
        double nu = l2_norm(u), nv = l2_norm(v);
        CHECK(std::abs(inner_l2_skew(u, u)) <= 1e-12 * nu * nu);
        CHECK(std::abs(inner_l2(u, apply_i(v)) + inner_l2(apply_i(u), v)) <=
              1e-12 * nu * nv);
        double b = inner_l2(u, v) * inner_l2(u, v) +
                   inner_l2_skew(u, v) * inner_l2_skew(u, v);
        CHECK(b <= nu * nu * nv * nv * (1.0 + 1e-12));
    }
}

TEST_CASE("inner_l2 rejects domain mismatch") {
    ComplexField a = random_field(Domain::interval(1.0, 16), 1, 0.0);
    ComplexField b = random_field(Domain::interval(1.0, 32), 1, 0.0);
    CHECK_THROWS_AS(inner_l2(a, b), std::invalid_argument);
}

TEST_CASE("random_field is deterministic and grid-independent per mode") {
    Domain d = Domain::interval(M_PI, 64);
    ComplexField a = random_field(d, 42, 1.0);
    ComplexField b = random_field(d, 42, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.u1.values[i] == b.u1.values[i]);
        CHECK(a.u2.values[i] == b.u2.values[i]);
    }
    // Refinement only adds modes: shared coefficients are identical.
    Domain d2 = Domain::interval(M_PI, 128);
    ModePair m1 = to_mode_pair(a);
    ModePair m2 = to_mode_pair(random_field(d2, 42, 1.0));
    for (int k = 0; k < 64; ++k)
        CHECK(m2.c1.a[k] == doctest::Approx(m1.c1.a[k]).epsilon(1e-10));
}

TEST_CASE("random_field decay scaling: white spectrum at decay 0") {
    Domain d = Domain::interval(M_PI, 64);
    SpectralBasis basis = build_basis(d);
    ModePair white = to_mode_pair(random_field(d, 9, 0.0));
    ModePair tilted = to_mode_pair(random_field(d, 9, 1.0));
    // Same Gaussian draws, amplitude scaled by nu^-decay mode by mode.
    for (std::size_t k = 0; k < basis.num_modes(); ++k) {
        double expect = white.c1.a[k] / basis.nu[k];
        CHECK(tilted.c1.a[k] == doctest::Approx(expect).epsilon(1e-9));
    }
    // Mode variance of the white field is O(1) across the spectrum.
    double var_low = 0.0, var_high = 0.0;
    for (int k = 0; k < 32; ++k) {
        var_low += white.c1.a[k] * white.c1.a[k] + white.c2.a[k] * white.c2.a[k];
        var_high += white.c1.a[32 + k] * white.c1.a[32 + k] +
                    white.c2.a[32 + k] * white.c2.a[32 + k];
    }
    CHECK(var_low / var_high < 4.0);
    CHECK(var_high / var_low < 4.0);
}

TEST_CASE("random_field decay 1: phi stable under refinement within 5%") {
    double phi_n = phi(random_field(Domain::interval(M_PI, 64), 5, 1.0));
    double phi_2n = phi(random_field(Domain::interval(M_PI, 128), 5, 1.0));
    CHECK(std::abs(phi_2n - phi_n) / phi_n < 0.05);
}

TEST_CASE("random_field rejects negative decay") {
    CHECK_THROWS_AS(random_field(Domain::interval(1.0, 16), 1, -0.5),
                    std::invalid_argument);
}

TEST_CASE("complex oracle: I is multiplication by i under u = u1 - i u2") {
    Domain d = Domain::interval(M_PI, 40);
    for (int s = 0; s < 25; ++s) {
        ComplexField u = random_field(d, 70 + s, 0.5);
        double a = 0.3 + 0.1 * s, b = -1.1 + 0.07 * s;
        ComplexField iu = apply_i(u);
        ComplexField su = complex_scale(a, b, u);
        for (std::size_t j = 0; j < u.size(); ++j) {
            std::complex<double> z(u.u1.values[j], -u.u2.values[j]);
            std::complex<double> iz = std::complex<double>(0, 1) * z;
            std::complex<double> sz = std::complex<double>(a, b) * z;
            CHECK(iu.u1.values[j] == doctest::Approx(iz.real()).epsilon(1e-14));
            CHECK(-iu.u2.values[j] == doctest::Approx(iz.imag()).epsilon(1e-14));
            CHECK(su.u1.values[j] == doctest::Approx(sz.real()).epsilon(1e-14));
            CHECK(-su.u2.values[j] == doctest::Approx(sz.imag()).epsilon(1e-14));
        }
    }
}

TEST_CASE("Yosida orthogonality relations against field algebra") {
    Domain d = Domain::interval(M_PI, 48);
    for (int s = 0; s < 40; ++s) {
        ComplexField u = random_field(d, 300 + s, 0.8);
        for (double mu : {1e-3, 0.2, 2.0}) {
            ComplexField y = yosida_phi(u, mu);
            ComplexField g = grad_phi(u);
            double scale1 = l2_norm(y) * l2_norm(u) + 1e-300;
            double scale2 = l2_norm(y) * l2_norm(g) + 1e-300;
            CHECK(std::abs(inner_l2(y, apply_i(u))) <= 1e-10 * scale1);
            CHECK(std::abs(inner_l2(y, apply_i(g))) <= 1e-10 * scale2);
        }
    }
}
