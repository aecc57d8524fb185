#pragma once

// Spatial implementation of the action on the standard form L2.
//
// L2 operators are dense matrices over the vectorized layout of L2Vector:
// blocks in order, each block column-major. With rho the density of phi,
//   a_g = (rho^{-1/2} g_*(rho) rho^{-1/2})^{1/2},
//   U_g(x rho^{1/2}) = g^{-1}(x) rho^{1/2} a_g.

#include <functional>

#include "qistate/cocycle.hpp"
#include "qistate/invariant.hpp"

namespace qistate {

struct L2Operator {
  AlgebraDescriptor descriptor;
  CMatrix matrix;  // l2_dim x l2_dim

  L2Vector operator()(const L2Vector& xi) const;
  L2Operator adjoint() const { return {descriptor, matrix.adjoint()}; }
  friend L2Operator operator*(const L2Operator& a, const L2Operator& b) { return {a.descriptor, a.matrix * b.matrix}; }
};

/// Materializes a linear map on L2 as a matrix by applying it to the basis.
L2Operator operator_from_map(const AlgebraDescriptor& desc, const std::function<L2Vector(const L2Vector&)>& map);

/// L_x: xi -> x xi.
L2Operator left_multiplication(const AlgebraElement& x);
/// R_x: xi -> xi x.
L2Operator right_multiplication(const AlgebraElement& x);

/// ||U^* U - 1|| and ||U U^* - 1||.
CheckList unitarity_checks(const L2Operator& u, const Tolerances& tol = {});

/// a_g; positive invertible.
AlgebraElement a_g(const State& phi, const Automorphism& g, const Tolerances& tol = {});

/// Identities tying a_g to the cocycle for group element `g` of the table:
/// g_* rho = rho^{1/2} a_g^2 rho^{1/2} = x_g^* rho = rho x_g,
/// a_g^2 = sigma_{-i/2}(x_g), a_g^2 >= 1/||x_{g^{-1}}||, and in the strong
/// case a_g = x_g^{1/2} commuting with rho^{1/2}.
CheckList a_g_checks(const State& phi, const CocycleTable& table, std::size_t g, bool strong,
                     const Tolerances& tol = {});

L2Operator u_g(const State& phi, const Automorphism& g, const Tolerances& tol = {});

/// max over g and matrix units x of ||U_g^* L_x U_g - L_{g(x)}||.
CheckResult verify_covariance(const State& phi, const FiniteGroup& group, const Tolerances& tol = {});

/// max over pairs of ||U_g U_h - U_{hg}||; asserted only when `strong`.
CheckResult verify_representation(const State& phi, const FiniteGroup& group, bool strong, const Tolerances& tol = {});

struct GammaFactorization {
  AlgebraElement gamma;  // rho_psi^{1/2} rho^{-1/2}
  CheckList checks;
};

/// gamma with rho_psi^{1/2} = gamma rho^{1/2}; verifies rho_psi = gamma rho gamma^*,
/// d^* = gamma sigma_{-i}(gamma^*) = rho_psi rho^{-1} and, for every g,
/// x_g^* = gamma_g sigma_{-i}(gamma_g^*) with gamma_g = g^{-1}(gamma^{-1}) gamma.
/// Throws PreconditionError unless rho_psi = rho d.
GammaFactorization gamma_factorization(const State& phi, const State& psi, const AlgebraElement& d,
                                       const CocycleTable& table, const Tolerances& tol = {});

}  // namespace qistate
