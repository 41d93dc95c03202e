#pragma once

#include "cgl/spectral.hpp"

#include <cstdint>

namespace cgl {

/// C-valued field stored as a pair of real grids (u1, u2).  Under the
/// identification u = u1 - i*u2, the matrix I = ((0,1),(-1,0)) acts exactly
/// as multiplication by the imaginary unit (see apply_i).
struct ComplexField {
    Domain domain;
    RealGrid u1, u2;

    ComplexField() = default;
    explicit ComplexField(const Domain& d) : domain(d), u1(d), u2(d) {}

    std::size_t size() const { return u1.size(); }
};

inline void require_same_domain(const ComplexField& a, const ComplexField& b, const char* what) {
    if (a.domain != b.domain)
        throw std::invalid_argument(std::string(what) + ": fields live on different domains");
}

/// I U = (u2, -u1).  Applying twice gives -U; the map is an L2 isometry.
ComplexField apply_i(const ComplexField& u);

/// (a E + b I) U = a U + b I U, the real-pair form of multiplication by a + i b.
ComplexField complex_scale(double a, double b, const ComplexField& u);

ComplexField add(const ComplexField& a, const ComplexField& b);
ComplexField sub(const ComplexField& a, const ComplexField& b);
ComplexField scale(double c, const ComplexField& u);
/// a += c * b
void axpy(double c, const ComplexField& b, ComplexField& a);

/// (U, V)_{L2} = (u1, v1) + (u2, v2) by trapezoid quadrature.
double inner_l2(const ComplexField& u, const ComplexField& v);
/// (U, I V)_{L2}; vanishes for V = U pointwise.
double inner_l2_skew(const ComplexField& u, const ComplexField& v);
double l2_norm_sq(const ComplexField& u);
double l2_norm(const ComplexField& u);

/// Pointwise modulus grid |U| = sqrt(u1^2 + u2^2).
RealGrid modulus(const ComplexField& u);

/// Mode coefficients of both components.
struct ModePair {
    ModeVector c1, c2;
};
ModePair to_mode_pair(const ComplexField& u);
ComplexField from_mode_pair(const Domain& domain, const ModePair& m);

/// Deterministic random field: mode (k1,k2) receives two Gaussian draws keyed
/// by (seed, k) scaled by nu_k^{-decay}.  Coefficients are grid-independent,
/// so refining the grid only adds new modes.
ComplexField random_field(const Domain& domain, std::uint64_t seed, double decay);

/// SplitMix64 keyed at (seed, index); used wherever reproducible draws are
/// needed outside of random_field as well.
std::uint64_t hash_u64(std::uint64_t seed, std::uint64_t index);
/// Uniform double in (0,1) from a hash state.
double hash_uniform(std::uint64_t seed, std::uint64_t index);

}  // namespace cgl
