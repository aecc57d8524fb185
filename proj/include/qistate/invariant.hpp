#pragma once

// Invariant states built from a bounded cocycle.
//
// Gamma_g(a) = x_{g^{-1}} g(a) is a linear action of G that permutes the
// cocycle values (Gamma_g(x_h) = x_{h g^{-1}}), so the uniform
// average d of {x_h} is Gamma-fixed and psi(a) = phi(d a) is G-invariant.
// Conversely an invertible d with phi(d .) invariant yields
// x_g = d g^{-1}(d^{-1}).

#include <map>
#include <string>

#include "qistate/cocycle.hpp"

namespace qistate {

/// Gamma_g(a) = x_{g^{-1}} g(a), computing x_{g^{-1}} from phi.
AlgebraElement gamma_map(const State& phi, const Automorphism& g, const AlgebraElement& a, const Tolerances& tol = {});
/// Same, using the table entry for the inverse of group element `g`.
AlgebraElement gamma_map(const CocycleTable& table, std::size_t g, const AlgebraElement& a);

/// Residuals of the five structural identities of Gamma over the whole group
/// and the given probes: permutation of cocycles, Gamma_{gh} = Gamma_g Gamma_h,
/// phi o Gamma_g = phi, the twisted product rule and the twisted adjoint rule.
CheckList gamma_properties_check(const State& phi, const CocycleTable& table, std::span<const AlgebraElement> probes,
                                 const Tolerances& tol = {});

/// d = (1/|G|) sum_h x_h. Throws ConsistencyError if Gamma-fixedness or
/// phi(d) = 1 fails beyond tol.eq.
AlgebraElement fixed_density_d(const State& phi, const CocycleTable& table, const Tolerances& tol = {});

struct InvariantCertificate {
  AlgebraElement d;
  State psi;
  double lambda_used = 1.0;
  double d_min_singular_value = 0.0;
  std::map<std::string, double> residuals;  // gamma_fixedness, invariance, faithfulness_margin, normalization
  CheckList checks;
};

/// psi(a) = phi(d a), assembled as a state with density (rho d + (rho d)^*)/2.
/// Throws ConsistencyError if rho d is not Hermitian PSD within tolerance.
InvariantCertificate invariant_state(const State& phi, const CocycleTable& table,
                                     std::span<const AlgebraElement> probes, const Tolerances& tol = {});

struct ConverseCocycle {
  AlgebraElement x;
  double bound = 0.0;  // ||d|| ||d^{-1}||
  CheckList checks;
};

/// x_g = d g^{-1}(d^{-1}), checked against rn_cocycle(phi, g) and the bound
/// ||x_g|| <= ||d|| ||d^{-1}||. Requires d invertible and phi(d .) invariant
/// under g (PreconditionError otherwise).
ConverseCocycle cocycle_from_d(const State& phi, const AlgebraElement& d, const Automorphism& g,
                               const Tolerances& tol = {});

/// In the strongly quasi-invariant case: d Hermitian, spec(d) in
/// [1/lambda, lambda], [d, g(d)] = 0 for every g.
CheckList strong_case_check(const CocycleTable& table, const AlgebraElement& d, const Tolerances& tol = {});

}  // namespace qistate
