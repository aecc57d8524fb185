#include "qistate/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qistate {

cplx TraceFunctional::operator()(const AlgebraElement& a) const {
  require_same(descriptor, a.descriptor(), "trace evaluation");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * a.block(i).trace();
  return sum;
}

bool is_center_ergodic(const FiniteGroup& group) {
  const std::size_t k = group.descriptor().block_count();
  std::vector<bool> seen(k, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (const auto& g : group.elements()) {
      const auto j = static_cast<std::size_t>(g.perm()[i]);
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == k;
}

InvariantTrace invariant_trace(const FiniteGroup& group, const Tolerances& tol) {
  const AlgebraDescriptor& desc = group.descriptor();
  const int k = static_cast<int>(desc.block_count());
  CMatrix constraints = CMatrix::Zero(k * static_cast<int>(group.size()), k);
  for (std::size_t g = 0; g < group.size(); ++g)
    for (int i = 0; i < k; ++i) {
      const int row = static_cast<int>(g) * k + i;
      constraints(row, group.element(g).perm()[i]) += 1.0;
      constraints(row, i) -= 1.0;
    }
  const CMatrix space = nullspace(constraints, tol.pos);
  if (space.cols() != 1) {
    std::ostringstream os;
    os << "trace not unique (invariant weight space has dimension " << space.cols() << ")";
    throw PreconditionError(os.str());
  }
  InvariantTrace out{{desc, std::vector<double>(k)}, 1};
  for (int i = 0; i < k; ++i) out.tau.weights[i] = (space(i, 0) / space(0, 0)).real();
  return out;
}

AlgebraElement trace_density(const State& phi, const TraceFunctional& tau, const Tolerances& tol) {
  require_same(phi.descriptor(), tau.descriptor, "trace_density");
  require_faithful(phi, tol, "trace_density");
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < tau.weights.size(); ++i) {
    if (!(tau.weights[i] > 0.0)) throw InputError("trace_density: trace weights must be positive");
    blocks.push_back(phi.density().block(i) / tau.weights[i]);
  }
  AlgebraElement c(phi.descriptor(), std::move(blocks));
  double worst = 0.0;
  for (const auto& e : AlgebraElement::matrix_units(phi.descriptor()))
    worst = std::max(worst, std::abs(evaluate(phi, e) - tau(c * e)));
  if (worst > tol.eq) {
    std::ostringstream os;
    os << "trace_density: phi(a) = tau(c a) fails (residual " << worst << ")";
    throw ConsistencyError(os.str());
  }
  return c;
}

CheckList verify_density_relations(const State& phi, const CocycleTable& table, const TraceFunctional& tau,
                                   const Tolerances& tol) {
  const AlgebraElement c = trace_density(phi, tau, tol);
  const FiniteGroup& G = table.group;
  double moved = 0.0, adjoint = 0.0;
  for (std::size_t g = 0; g < G.size(); ++g) {
    const std::size_t gi = G.inverse_of(g);
    moved = std::max(moved, relative_residual(predual(G.element(gi), c), c * table.x(gi)));
    adjoint = std::max(adjoint, relative_residual(table.x(g).adjoint() * c, c * table.x(g)));
  }
  return {
      make_check("trace_density_moved", "(g^-1)_*(c) = c x_{g^-1}", moved, tol.eq),
      make_check("trace_density_adjoint", "x_g^* c = c x_g", adjoint, tol.eq),
  };
}

CheckList verify_trace_properties(const TraceFunctional& tau, const FiniteGroup& group,
                                  std::span<const AlgebraElement> probes, const Tolerances& tol) {
  double tracial = 0.0, invariant = 0.0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const AlgebraElement& a = probes[k];
    const AlgebraElement& b = probes[(k + 1) % probes.size()];
    const double scale = std::max(1.0, a.norm() * b.norm());
    tracial = std::max(tracial, std::abs(tau(a * b) - tau(b * a)) / scale);
    for (const auto& g : group.elements())
      invariant = std::max(invariant, std::abs(tau(apply(g, a)) - tau(a)) / std::max(1.0, a.norm()));
  }
  return {
      make_check("trace_tracial", "tau(ab) = tau(ba)", tracial, tol.eq),
      make_check("trace_invariant", "tau o g = tau", invariant, tol.eq),
  };
}

}  // namespace qistate
