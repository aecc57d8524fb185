#pragma once

// Fixed-point algebra B of a finite group action, the G-invariant conditional
// expectation onto it (uniform group average), the projection E0 onto
// U_g-invariant vectors, and the projection F0 = [B' E0].

#include "qistate/standard_impl.hpp"

namespace qistate {

struct FixedAlgebra {
  AlgebraDescriptor descriptor;
  std::vector<AlgebraElement> basis;  // Hilbert-Schmidt orthonormal
  CMatrix coordinates;                // l2_dim x dim, columns = vectorized basis
  CheckList checks;                   // fixedness, product and adjoint closure

  std::size_t dimension() const { return basis.size(); }
  /// Hilbert-Schmidt orthogonal projection onto B.
  AlgebraElement project(const AlgebraElement& a) const;
  /// ||a - project(a)|| / max(1, ||a||).
  double distance_to(const AlgebraElement& a) const;
};

FixedAlgebra fixed_algebra(const FiniteGroup& group, const Tolerances& tol = {});

/// Phi(a) = (1/|G|) sum_g g(a).
class ConditionalExpectation {
 public:
  explicit ConditionalExpectation(FiniteGroup group) : group_(std::move(group)) {}
  AlgebraElement operator()(const AlgebraElement& a) const;
  const FiniteGroup& group() const { return group_; }

 private:
  FiniteGroup group_;
};

/// Requires psi G-invariant (PreconditionError otherwise).
ConditionalExpectation cond_expectation(const State& psi, const FiniteGroup& group, const Tolerances& tol = {});

/// Range in B, idempotence, unitality, positivity, psi o Phi = psi, the
/// B-bimodule property, contractivity, Phi o g = Phi and the Schwarz
/// inequality, over matrix units and the given probes.
CheckList verify_conditional_expectation(const ConditionalExpectation& phi_map, const State& psi,
                                         const FixedAlgebra& fixed, std::span<const AlgebraElement> probes,
                                         std::span<const AlgebraElement> psd_probes, const Tolerances& tol = {});

struct Projection {
  L2Operator op;
  CMatrix range;  // orthonormal columns
  CheckList checks;

  std::size_t rank() const { return static_cast<std::size_t>(range.cols()); }
};

/// Orthogonal projection onto the joint fixed vectors of {U_g}.
Projection e0_projection(const State& phi, const FiniteGroup& group, const Tolerances& tol = {});

/// Conditional-expectation characterizations in the strongly quasi-invariant
/// bounded case: Phi(b) E0 = E0 b E0, phi = psi|_B o Phi(d^{-1} .), the
/// group-mean formula, invariance of d^{1/2} rho^{1/2} and uniqueness of the
/// solution of Phi(b) E0 = E0 b E0. Throws PreconditionError if phi is not
/// strongly quasi-invariant.
CheckList verify_ks(const State& phi, const CocycleTable& table, const InvariantCertificate& cert,
                    const Tolerances& tol = {});

inline constexpr int default_commutant_cap = 64;

struct CommutantProjection {
  Projection f0;
  std::size_t commutant_dimension = 0;
};

/// Intertwiners X (n_i x n_j) with b_i X = X b_j for every b in B; these
/// assemble into the commutant of the left representation of B on L2.
std::vector<std::vector<CMatrix>> intertwiner_bases(const FixedAlgebra& fixed, const Tolerances& tol = {});

/// F0 = projection onto span(B' E0 L2). Throws PreconditionError
/// ("commutant computation too large") when l2_dim exceeds `cap`.
/// `assert_identity` adds the F0 = 1 check.
CommutantProjection commutant_f0(const FixedAlgebra& fixed, const Projection& e0, bool assert_identity,
                                 int cap = default_commutant_cap, const Tolerances& tol = {});

}  // namespace qistate
