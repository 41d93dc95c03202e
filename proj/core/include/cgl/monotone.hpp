#pragma once

#include "cgl/field.hpp"

namespace cgl {

/// Dirichlet energy phi(U) = 1/2 |grad U|_{L2}^2, evaluated spectrally as
/// 1/2 sum_k nu_k |U_k|^2 (exact for the sine interpolant).
double phi(const ComplexField& u);

/// Subgradient of phi: the Dirichlet Laplacian applied with the exact
/// eigenvalues, mode-wise multiplication by nu_k on both components.
ComplexField grad_phi(const ComplexField& u);

/// psi_r(U) = (1/r) int |U|^r with |U| the pointwise modulus, by quadrature.
/// Requires r > 1.
double psi_r(const ComplexField& u, double r);

/// Subgradient of psi_r: pointwise |U|^{r-2} (u1, u2).
ComplexField grad_psi_r(const ComplexField& u, double r);

/// Resolvent (1 + mu * grad_phi)^{-1}: mode k scaled by 1/(1 + mu nu_k).
ComplexField resolvent_phi(const ComplexField& u, double mu);

/// Yosida regularization grad_phi o resolvent: mode scaling nu/(1 + mu nu).
/// Satisfies U = resolvent_phi(U) + mu * yosida_phi(U) exactly.
ComplexField yosida_phi(const ComplexField& u, double mu);

/// Moreau-Yosida value (mu/2)|yosida_phi(U)|^2 + phi(resolvent_phi(U));
/// equals inf_V { |U-V|^2/(2 mu) + phi(V) } and never exceeds phi(U).
double moreau_yosida_phi(const ComplexField& u, double mu);

/// Pointwise resolvent of psi_r for r > 2: output keeps the input direction,
/// the magnitude s >= 0 solves s + mu s^{r-1} = |u| (safeguarded Newton with
/// a bisection fallback on the bracket [0, |u|]).
ComplexField resolvent_psi_r(const ComplexField& u, double mu, double r);

/// Yosida regularization of grad_psi_r, grad_psi_r o resolvent_psi_r.
ComplexField yosida_psi_r(const ComplexField& u, double mu, double r);

/// Scalar root of s + mu s^{r-1} = m, s in [0, m]; exposed for tests.
double prox_power_magnitude(double m, double mu, double r);

}  // namespace cgl
