#pragma once

#include "cgl/domain.hpp"

namespace cgl {

/// Dirichlet Laplacian eigensystem on a product domain.  The sine modes
/// sin(k_d pi x_d / L_d), k_d = 1..n_d, diagonalize -Delta exactly with
/// eigenvalues nu_k = sum_d (k_d pi / L_d)^2.
struct SpectralBasis {
    Domain domain;
    std::vector<double> nu;   // eigenvalues, k-major like RealGrid storage
    double lambda1 = 0.0;     // first eigenvalue, nu at k = (1,..,1)

    std::size_t num_modes() const { return nu.size(); }
};

SpectralBasis build_basis(const Domain& domain);

/// Sine-mode coefficients, indexed like the eigenvalues of a SpectralBasis.
struct ModeVector {
    std::array<int, 2> shape{0, 0};
    std::vector<double> a;

    ModeVector() = default;
    explicit ModeVector(const Domain& d) : shape(d.res), a(d.num_points(), 0.0) {}
    std::size_t size() const { return a.size(); }
};

/// Forward/inverse discrete sine transform (DST-I).  from_modes(to_modes(g))
/// is the identity up to roundoff; both maps are linear.
ModeVector to_modes(const Domain& domain, const RealGrid& grid);
RealGrid from_modes(const Domain& domain, const ModeVector& modes);

/// Composite trapezoid quadrature with the implicit zero boundary:
/// sum of interior values times prod_d h_d.
double integrate(const Domain& domain, const RealGrid& grid);

/// L2 inner product and norm of scalar grids by the same quadrature.
double inner(const Domain& domain, const RealGrid& a, const RealGrid& b);
double norm_sq(const Domain& domain, const RealGrid& a);

/// Normalization carried by each sine mode: int_Omega sin^2 = prod_d L_d / 2.
/// Quadrature and mode-space sums are related exactly through this factor,
/// e.g. norm_sq(g) == mode_weight * sum_k a_k^2.
double mode_weight(const Domain& domain);

}  // namespace cgl
