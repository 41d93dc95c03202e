#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgl/spectral.hpp"
#include "cgl/field.hpp"

#include <cmath>

using namespace cgl;

namespace {

// Independent oracle for lambda1: inverse power iteration on the
// finite-difference Dirichlet Laplacian (tridiagonal solve).
double fd_dirichlet_lambda1(double length, int n) {
    double h = length / (n + 1);
    std::vector<double> x(n, 1.0), y(n);
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
        // Solve A y = x with A = tridiag(-1, 2, -1)/h^2 (Thomas algorithm).
        std::vector<double> c(n), d(n);
        double diag = 2.0 / (h * h), off = -1.0 / (h * h);
        c[0] = off / diag;
        d[0] = x[0] / diag;
        for (int i = 1; i < n; ++i) {
            double m = diag - off * c[i - 1];
            c[i] = off / m;
            d[i] = (x[i] - off * d[i - 1]) / m;
        }
        y[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) y[i] = d[i] - c[i] * y[i + 1];
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) y[i] /= norm;
        // Rayleigh quotient x^T A x with x = y.
        double num = 0.0;
        for (int i = 0; i < n; ++i) {
            double ax = 2.0 * y[i];
            if (i > 0) ax -= y[i - 1];
            if (i + 1 < n) ax -= y[i + 1];
            num += y[i] * ax / (h * h);
        }
        lam = num;
        x = y;
    }
    return lam;
}

RealGrid sample_1d(const Domain& d, double (*f)(double)) {
    RealGrid g(d);
    for (int j = 0; j < d.res[0]; ++j) g.values[j] = f(d.coord(0, j));
    return g;
}

}  // namespace

TEST_CASE("basis eigenvalues on (0,pi)") {
    Domain d = Domain::interval(M_PI, 64);
    SpectralBasis b = build_basis(d);
    CHECK(b.lambda1 == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k <= 64; ++k)
        CHECK(b.nu[k - 1] == doctest::Approx(double(k) * k).epsilon(1e-13));
}

TEST_CASE("basis eigenvalues on the square and nondecreasing in k") {
    Domain d = Domain::rectangle(M_PI, M_PI, 16, 16);
    SpectralBasis b = build_basis(d);
    CHECK(b.lambda1 == doctest::Approx(2.0).epsilon(1e-14));
    for (int k1 = 1; k1 <= 16; ++k1)
        for (int k2 = 1; k2 <= 16; ++k2) {
            std::size_t idx = std::size_t(k1 - 1) * 16 + (k2 - 1);
            if (k1 > 1) CHECK(b.nu[idx] > b.nu[idx - 16]);
            if (k2 > 1) CHECK(b.nu[idx] > b.nu[idx - 1]);
        }
}

TEST_CASE("lambda1 on (0,2pi) against the finite-difference oracle") {
    Domain d = Domain::interval(2.0 * M_PI, 64);
    SpectralBasis b = build_basis(d);
    CHECK(b.lambda1 == doctest::Approx(0.25).epsilon(1e-14));
    double prev_err = 1e9;
    for (int n : {64, 128, 256}) {
        double fd = fd_dirichlet_lambda1(2.0 * M_PI, n);
        double err = std::abs(fd - 0.25);
        CHECK(err < prev_err);  // converges to the spectral value as n grows
        prev_err = err;
    }
    CHECK(prev_err < 1e-4);
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(Domain::interval(-1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Domain::interval(1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Domain::rectangle(1.0, 0.0, 8, 8), std::invalid_argument);
}

TEST_CASE("sine mode transforms: basis vector, zero, round trip") {
    Domain d = Domain::interval(M_PI, 64);
    RealGrid g = sample_1d(d, [](double x) { return std::sin(x); });
    ModeVector m = to_modes(d, g);
    CHECK(m.a[0] == doctest::Approx(1.0).epsilon(1e-13));
    for (int k = 1; k < 64; ++k) CHECK(std::abs(m.a[k]) < 1e-13);

    RealGrid z(d);
    ModeVector mz = to_modes(d, z);
    for (double a : mz.a) CHECK(a == 0.0);

    ComplexField u = random_field(d, 7, 0.0);
    ModeVector mu = to_modes(d, u.u1);
    RealGrid back = from_modes(d, mu);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) {
        num += (back.values[i] - u.u1.values[i]) * (back.values[i] - u.u1.values[i]);
        den += u.u1.values[i] * u.u1.values[i];
    }
    CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("transform linearity and shape mismatch") {
    Domain d = Domain::interval(2.0, 32);
    ComplexField a = random_field(d, 1, 0.3), b = random_field(d, 2, 0.3);
    ModeVector ma = to_modes(d, a.u1), mb = to_modes(d, b.u1);
    RealGrid sum(d);
    for (std::size_t i = 0; i < sum.size(); ++i)
        sum.values[i] = 2.0 * a.u1.values[i] - 3.0 * b.u1.values[i];
    ModeVector ms = to_modes(d, sum);
    for (std::size_t k = 0; k < ms.size(); ++k)
        CHECK(ms.a[k] == doctest::Approx(2.0 * ma.a[k] - 3.0 * mb.a[k]).epsilon(1e-11));

    Domain other = Domain::interval(2.0, 16);
    CHECK_THROWS_AS(to_modes(other, a.u1), std::invalid_argument);
}

TEST_CASE("quadrature closed forms on (0,pi)") {
    Domain d = Domain::interval(M_PI, 256);
    RealGrid s2 = sample_1d(d, [](double x) { double s = std::sin(x); return s * s; });
    CHECK(integrate(d, s2) == doctest::Approx(M_PI / 2.0).epsilon(1e-4));
    RealGrid s4 = sample_1d(d, [](double x) { double s = std::sin(x); return s * s * s * s; });
    CHECK(integrate(d, s4) == doctest::Approx(3.0 * M_PI / 8.0).epsilon(1e-4));
    RealGrid z(d);
    CHECK(integrate(d, z) == 0.0);
}

TEST_CASE("quadrature converges at order >= 2 for smooth integrands") {
    // f(x) = x (pi - x) vanishes at the boundary; trapezoid error is O(h^2).
    double exact = M_PI * M_PI * M_PI / 6.0;
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
        Domain d = Domain::interval(M_PI, n);
        RealGrid g(d);
        for (int j = 0; j < n; ++j) {
            double x = d.coord(0, j);
            g.values[j] = x * (M_PI - x);
        }
        errs.push_back(std::abs(integrate(d, g) - exact));
    }
    double order = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(order >= 1.95);
}

TEST_CASE("Parseval: quadrature norm equals weighted coefficient sum") {
    for (const Domain& d : {Domain::interval(M_PI, 64), Domain::rectangle(2.0, 3.0, 12, 10)}) {
        ComplexField u = random_field(d, 11, 0.2);
        ModeVector m = to_modes(d, u.u1);
        double coef = 0.0;
        for (double a : m.a) coef += a * a;
        coef *= mode_weight(d);
        CHECK(coef == doctest::Approx(norm_sq(d, u.u1)).epsilon(1e-10));
    }
}

TEST_CASE("2-D transforms round trip") {
    Domain d = Domain::rectangle(M_PI, 1.5, 14, 9);
    ComplexField u = random_field(d, 3, 0.1);
    ModeVector m = to_modes(d, u.u2);
    RealGrid back = from_modes(d, m);
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(u.u2.values[i]).epsilon(1e-11));
}
