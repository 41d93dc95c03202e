#include "cgl/monotone.hpp"

#include <cmath>
#include <stdexcept>

namespace cgl {

namespace {

ComplexField mode_scaled(const ComplexField& u, const std::vector<double>& factor) {
    ModePair m = to_mode_pair(u);
    for (std::size_t k = 0; k < m.c1.size(); ++k) {
        m.c1.a[k] *= factor[k];
        m.c2.a[k] *= factor[k];
    }
    return from_mode_pair(u.domain, m);
}

}  // namespace

double phi(const ComplexField& u) {
    SpectralBasis basis = build_basis(u.domain);
    ModePair m = to_mode_pair(u);
    double s = 0.0;
    for (std::size_t k = 0; k < basis.num_modes(); ++k)
        s += basis.nu[k] * (m.c1.a[k] * m.c1.a[k] + m.c2.a[k] * m.c2.a[k]);
    return 0.5 * mode_weight(u.domain) * s;
}

ComplexField grad_phi(const ComplexField& u) {
    SpectralBasis basis = build_basis(u.domain);
    return mode_scaled(u, basis.nu);
}

double psi_r(const ComplexField& u, double r) {
    if (r <= 1.0) throw std::invalid_argument("psi_r: exponent must exceed 1");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double m = std::hypot(u.u1.values[i], u.u2.values[i]);
        s += std::pow(m, r);
    }
    return s * u.domain.cell_volume() / r;
}

ComplexField grad_psi_r(const ComplexField& u, double r) {
    if (r <= 1.0) throw std::invalid_argument("grad_psi_r: exponent must exceed 1");
    ComplexField out(u.domain);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double m = std::hypot(u.u1.values[i], u.u2.values[i]);
        double w = m == 0.0 ? 0.0 : std::pow(m, r - 2.0);
        out.u1.values[i] = w * u.u1.values[i];
        out.u2.values[i] = w * u.u2.values[i];
    }
    return out;
}

ComplexField resolvent_phi(const ComplexField& u, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("resolvent_phi: mu must be positive");
    SpectralBasis basis = build_basis(u.domain);
    std::vector<double> f(basis.num_modes());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = 1.0 / (1.0 + mu * basis.nu[k]);
    return mode_scaled(u, f);
}

ComplexField yosida_phi(const ComplexField& u, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("yosida_phi: mu must be positive");
    SpectralBasis basis = build_basis(u.domain);
    std::vector<double> f(basis.num_modes());
    for (std::size_t k = 0; k < f.size(); ++k)
        f[k] = basis.nu[k] / (1.0 + mu * basis.nu[k]);
    return mode_scaled(u, f);
}

double moreau_yosida_phi(const ComplexField& u, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("moreau_yosida_phi: mu must be positive");
    // Evaluated mode-wise in closed form, 1/2 nu/(1 + mu nu) |U_k|^2.
    SpectralBasis basis = build_basis(u.domain);
    ModePair m = to_mode_pair(u);
    double s = 0.0;
    for (std::size_t k = 0; k < basis.num_modes(); ++k) {
        double nu = basis.nu[k];
        s += nu / (1.0 + mu * nu) * (m.c1.a[k] * m.c1.a[k] + m.c2.a[k] * m.c2.a[k]);
    }
    return 0.5 * mode_weight(u.domain) * s;
}

double prox_power_magnitude(double m, double mu, double r) {
    if (m == 0.0) return 0.0;
    // g(s) = s + mu s^{r-1} - m is strictly increasing with g(0) < 0 <= g(m),
    // so the root is unique and bracketed by [0, m].
    double lo = 0.0, hi = m;
    double s = m / (1.0 + mu * std::pow(m, r - 2.0));  // warm start
    for (int it = 0; it < 200; ++it) {
        double p = std::pow(s, r - 2.0);
        double g = s + mu * p * s - m;
        if (std::abs(g) <= 1e-13 * (1.0 + m)) return s;
        if (g > 0.0) hi = s; else lo = s;
        double dg = 1.0 + mu * (r - 1.0) * p;
        double next = s - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
        if (next == s) return s;
        s = next;
    }
    return s;
}

ComplexField resolvent_psi_r(const ComplexField& u, double mu, double r) {
    if (!(mu > 0.0)) throw std::invalid_argument("resolvent_psi_r: mu must be positive");
    if (!(r > 2.0)) throw std::invalid_argument("resolvent_psi_r: exponent must exceed 2");
    ComplexField out(u.domain);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double m = std::hypot(u.u1.values[i], u.u2.values[i]);
        if (m == 0.0) continue;
        double s = prox_power_magnitude(m, mu, r);
        double w = s / m;
        out.u1.values[i] = w * u.u1.values[i];
        out.u2.values[i] = w * u.u2.values[i];
    }
    return out;
}

ComplexField yosida_psi_r(const ComplexField& u, double mu, double r) {
    return grad_psi_r(resolvent_psi_r(u, mu, r), r);
}

}  // namespace cgl
