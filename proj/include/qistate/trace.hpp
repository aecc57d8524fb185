#pragma once

// Ergodicity of the action on the center, the invariant trace
// tau(a) = sum_i w_i tr(a_i) and the density c of a state relative to tau.

#include "qistate/cocycle.hpp"

namespace qistate {

struct TraceFunctional {
  AlgebraDescriptor descriptor;
  std::vector<double> weights;

  cplx operator()(const AlgebraElement& a) const;
};

/// Fixed central elements are the orbit indicators, so this is transitivity
/// of the block permutation action.
bool is_center_ergodic(const FiniteGroup& group);

struct InvariantTrace {
  TraceFunctional tau;
  std::size_t solution_dimension = 0;  // dimension of {w : w_{pi_g(i)} = w_i}
};

/// Weights normalized to w = 1 on the first block. Throws PreconditionError
/// ("trace not unique") when the constraint space is not one-dimensional.
InvariantTrace invariant_trace(const FiniteGroup& group, const Tolerances& tol = {});

/// c_i = rho_i / w_i, checked against phi(a) = tau(c a) on matrix units.
AlgebraElement trace_density(const State& phi, const TraceFunctional& tau, const Tolerances& tol = {});

/// (g^-1)_*(c) = c x_{g^-1} and x_g^* c = c x_g over the table.
CheckList verify_density_relations(const State& phi, const CocycleTable& table, const TraceFunctional& tau,
                                   const Tolerances& tol = {});

/// tau(ab) = tau(ba) and tau o g = tau on the given probes.
CheckList verify_trace_properties(const TraceFunctional& tau, const FiniteGroup& group,
                                  std::span<const AlgebraElement> probes, const Tolerances& tol = {});

}  // namespace qistate
