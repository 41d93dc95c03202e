#include "cgl/field.hpp"

#include <cmath>

namespace cgl {

ComplexField apply_i(const ComplexField& u) {
    ComplexField out(u.domain);
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.u1.values[i] = u.u2.values[i];
        out.u2.values[i] = -u.u1.values[i];
    }
    return out;
}

ComplexField complex_scale(double a, double b, const ComplexField& u) {
    ComplexField out(u.domain);
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.u1.values[i] = a * u.u1.values[i] + b * u.u2.values[i];
        out.u2.values[i] = a * u.u2.values[i] - b * u.u1.values[i];
    }
    return out;
}

ComplexField add(const ComplexField& a, const ComplexField& b) {
    require_same_domain(a, b, "add");
    ComplexField out(a.domain);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.u1.values[i] = a.u1.values[i] + b.u1.values[i];
        out.u2.values[i] = a.u2.values[i] + b.u2.values[i];
    }
    return out;
}

ComplexField sub(const ComplexField& a, const ComplexField& b) {
    require_same_domain(a, b, "sub");
    ComplexField out(a.domain);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.u1.values[i] = a.u1.values[i] - b.u1.values[i];
        out.u2.values[i] = a.u2.values[i] - b.u2.values[i];
    }
    return out;
}

ComplexField scale(double c, const ComplexField& u) {
    ComplexField out(u.domain);
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.u1.values[i] = c * u.u1.values[i];
        out.u2.values[i] = c * u.u2.values[i];
    }
    return out;
}

void axpy(double c, const ComplexField& b, ComplexField& a) {
    require_same_domain(a, b, "axpy");
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.u1.values[i] += c * b.u1.values[i];
        a.u2.values[i] += c * b.u2.values[i];
    }
}

double inner_l2(const ComplexField& u, const ComplexField& v) {
    require_same_domain(u, v, "inner_l2");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u.u1.values[i] * v.u1.values[i] + u.u2.values[i] * v.u2.values[i];
    return s * u.domain.cell_volume();
}

double inner_l2_skew(const ComplexField& u, const ComplexField& v) {
    require_same_domain(u, v, "inner_l2_skew");
    // (U, IV) with IV = (v2, -v1)
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u.u1.values[i] * v.u2.values[i] - u.u2.values[i] * v.u1.values[i];
    return s * u.domain.cell_volume();
}

double l2_norm_sq(const ComplexField& u) { return inner_l2(u, u); }
double l2_norm(const ComplexField& u) { return std::sqrt(l2_norm_sq(u)); }

RealGrid modulus(const ComplexField& u) {
    RealGrid g(u.domain);
    for (std::size_t i = 0; i < u.size(); ++i)
        g.values[i] = std::hypot(u.u1.values[i], u.u2.values[i]);
    return g;
}

ModePair to_mode_pair(const ComplexField& u) {
    return ModePair{to_modes(u.domain, u.u1), to_modes(u.domain, u.u2)};
}

ComplexField from_mode_pair(const Domain& domain, const ModePair& m) {
    ComplexField f(domain);
    f.u1 = from_modes(domain, m.c1);
    f.u2 = from_modes(domain, m.c2);
    return f;
}

std::uint64_t hash_u64(std::uint64_t seed, std::uint64_t index) {
    // SplitMix64 on a combined key.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double hash_uniform(std::uint64_t seed, std::uint64_t index) {
    return (hash_u64(seed, index) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

ComplexField random_field(const Domain& domain, std::uint64_t seed, double decay) {
    if (decay < 0.0) throw std::invalid_argument("random_field: decay must be >= 0");
    SpectralBasis basis = build_basis(domain);
    ModePair m;
    m.c1 = ModeVector(domain);
    m.c2 = ModeVector(domain);
    std::size_t idx = 0;
    const int n2 = domain.dimension == 2 ? domain.res[1] : 1;
    for (int k1 = 1; k1 <= domain.res[0]; ++k1) {
        for (int k2 = 1; k2 <= n2; ++k2, ++idx) {
            // Grid-independent key per mode index pair.
            std::uint64_t key = std::uint64_t(k1) * 0x100000ULL + std::uint64_t(k2);
            double r1 = hash_uniform(seed, 2 * key);
            double r2 = hash_uniform(seed, 2 * key + 1);
            // Box-Muller
            double rad = std::sqrt(-2.0 * std::log(r1));
            double g1 = rad * std::cos(2.0 * M_PI * r2);
            double g2 = rad * std::sin(2.0 * M_PI * r2);
            double amp = std::pow(basis.nu[idx], -decay);
            m.c1.a[idx] = amp * g1;
            m.c2.a[idx] = amp * g2;
        }
    }
    return from_mode_pair(domain, m);
}

}  // namespace cgl
