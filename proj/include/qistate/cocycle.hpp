#pragma once

// Radon-Nikodym cocycles of a quasi-invariant state: phi(g(a)) = phi(x_g a).
// In finite dimensions x_g = rho^{-1} g_*(rho), with g_* the predual action.

#include <cstddef>
#include <optional>
#include <vector>

#include "qistate/actions.hpp"
#include "qistate/check.hpp"
#include "qistate/random.hpp"

namespace qistate {

/// x_g for a faithful state; throws PreconditionError otherwise.
AlgebraElement rn_cocycle(const State& phi, const Automorphism& g, const Tolerances& tol = {});

/// Cocycles for every group element, indexed like the group.
struct CocycleTable {
  FiniteGroup group;
  std::vector<AlgebraElement> entries;
  std::vector<AlgebraElement> inverses;  // x_g^{-1}
  double lambda_bound = 1.0;             // max_g max(||x_g||, ||x_g^{-1}||)

  const AlgebraElement& x(std::size_t g) const { return entries[g]; }
};

CocycleTable build_table(const State& phi, const FiniteGroup& group, const Tolerances& tol = {});

/// Whether a user-supplied bound lambda dominates the computed one.
bool lambda_dominates(const CocycleTable& table, double user_lambda);

/// ||a - b|| / max(1, ||a||, ||b||).
double relative_residual(const AlgebraElement& a, const AlgebraElement& b);

/// x_{g2 g1} = x_{g1} g1^{-1}(x_{g2}) over all pairs, and x_e = 1.
CheckResult verify_cocycle_identity(const CocycleTable& table, const Tolerances& tol = {});
/// x_g^{-1} = g^{-1}(x_{g^{-1}}).
CheckResult verify_inverse_formula(const CocycleTable& table, const Tolerances& tol = {});
/// phi(x_g a) = phi(a x_g^*) over matrix units, i.e. rho x_g = x_g^* rho.
CheckResult verify_adjoint_relation(const State& phi, const CocycleTable& table, const Tolerances& tol = {});

struct StrongQiReport {
  bool strong = false;
  double hermiticity_residual = 0.0;  // max_g relative ||x_g - x_g^*||
  // Filled only when `strong`:
  double min_eigenvalue = 0.0;        // min over g of spec(x_g)
  double max_eigenvalue = 0.0;
  double commutator_residual = 0.0;   // max_{g,h} ||[x_g, x_h]||
  double centralizer_residual = 0.0;  // max_g ||[rho, x_g]||
  bool positive = false;
  bool spectrum_within_lambda = false;  // spec(x_g) in [1/lambda, lambda]

  CheckList checks;
};

StrongQiReport is_strongly_qi(const State& phi, const CocycleTable& table, const Tolerances& tol = {});

/// Random unit-trace PSD probes: a mix of full-rank and rank-one elements
/// plus the diagonal matrix units.
std::vector<AlgebraElement> psd_probes(const AlgebraDescriptor& desc, Rng& rng, std::size_t count);

/// L_a phi(x) <= ||a|| phi(x) on PSD probes. Throws PreconditionError when
/// rho a is not Hermitian PSD (L_a phi not positive).
CheckResult sz_domination(const State& phi, const AlgebraElement& a, std::span<const AlgebraElement> probes,
                          const Tolerances& tol = {});

/// (1/lambda) phi(a) <= phi(x_g a) <= lambda phi(a) and the same for
/// phi(a (x_g^{-1})^*), over all g and the given PSD probes.
CheckResult sandwich_check(const State& phi, const CocycleTable& table, std::span<const AlgebraElement> probes,
                           const Tolerances& tol = {});

}  // namespace qistate
