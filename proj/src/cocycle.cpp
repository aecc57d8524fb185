#include "qistate/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qistate {

AlgebraElement rn_cocycle(const State& phi, const Automorphism& g, const Tolerances& tol) {
  require_same(phi.descriptor(), g.descriptor(), "rn_cocycle");
  require_faithful(phi, tol, "rn_cocycle");
  const AlgebraElement& rho = phi.density();
  const AlgebraElement moved = predual(g, rho);
  const AlgebraElement x = rho.inverse(tol.pos) * moved;

  // phi(g(a)) = phi(x a) on matrix units: tr(g_* rho e) vs tr(rho x e).
  const double res = relative_residual(rho * x, moved);
  if (res > tol.eq) {
    std::ostringstream os;
    os << "rn_cocycle: defining relation residual " << res << " above tolerance";
    throw ConsistencyError(os.str());
  }
  return x;
}

CocycleTable build_table(const State& phi, const FiniteGroup& group, const Tolerances& tol) {
  CocycleTable t{group, {}, {}, 1.0};
  t.entries.reserve(group.size());
  for (const auto& g : group.elements()) {
    AlgebraElement x = rn_cocycle(phi, g, tol);
    AlgebraElement xi = x.inverse(tol.pos);
    t.lambda_bound = std::max({t.lambda_bound, x.norm(), xi.norm()});
    t.entries.push_back(std::move(x));
    t.inverses.push_back(std::move(xi));
  }
  return t;
}

bool lambda_dominates(const CocycleTable& table, double user_lambda) { return user_lambda >= table.lambda_bound; }

double relative_residual(const AlgebraElement& a, const AlgebraElement& b) {
  return distance(a, b) / std::max({1.0, a.norm(), b.norm()});
}

CheckResult verify_cocycle_identity(const CocycleTable& table, const Tolerances& tol) {
  const FiniteGroup& G = table.group;
  const AlgebraElement one = AlgebraElement::identity(G.descriptor());
  double worst = relative_residual(table.x(0), one);
  for (std::size_t g1 = 0; g1 < G.size(); ++g1) {
    const Automorphism& g1_inv = G.element(G.inverse_of(g1));
    for (std::size_t g2 = 0; g2 < G.size(); ++g2) {
      const AlgebraElement lhs = table.x(G.product(g2, g1));
      const AlgebraElement rhs = table.x(g1) * apply(g1_inv, table.x(g2));
      worst = std::max(worst, relative_residual(lhs, rhs));
    }
  }
  return make_check("cocycle_identity", "cocycle identity x_{g2 g1} = x_{g1} g1^-1(x_{g2}), x_e = 1", worst, tol.eq);
}

CheckResult verify_inverse_formula(const CocycleTable& table, const Tolerances& tol) {
  const FiniteGroup& G = table.group;
  double worst = 0.0;
  for (std::size_t g = 0; g < G.size(); ++g) {
    const std::size_t gi = G.inverse_of(g);
    const AlgebraElement rhs = apply(G.element(gi), table.x(gi));
    worst = std::max(worst, relative_residual(table.inverses[g], rhs));
  }
  return make_check("inverse_formula", "cocycle inverse x_g^-1 = g^-1(x_{g^-1})", worst, tol.eq);
}

CheckResult verify_adjoint_relation(const State& phi, const CocycleTable& table, const Tolerances& tol) {
  const auto units = AlgebraElement::matrix_units(phi.descriptor());
  double worst = 0.0;
  for (std::size_t g = 0; g < table.entries.size(); ++g) {
    const AlgebraElement& x = table.x(g);
    const AlgebraElement xs = x.adjoint();
    const double scale = std::max(1.0, x.norm());
    for (const auto& e : units) {
      const cplx lhs = evaluate(phi, x * e);
      const cplx rhs = evaluate(phi, e * xs);
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    worst = std::max(worst, relative_residual(phi.density() * x, xs * phi.density()));
  }
  return make_check("adjoint_relation", "phi(x_g a) = phi(a x_g^*)", worst, tol.eq);
}

StrongQiReport is_strongly_qi(const State& phi, const CocycleTable& table, const Tolerances& tol) {
  StrongQiReport r;
  for (const auto& x : table.entries) r.hermiticity_residual = std::max(r.hermiticity_residual, x.hermiticity_residual());
  r.strong = r.hermiticity_residual < tol.eq;
  r.checks.push_back(make_diagnostic("cocycle_hermiticity", "strong quasi-invariance: x_g self-adjoint",
                                     r.hermiticity_residual));
  if (!r.strong) return r;

  const double lambda = table.lambda_bound;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  r.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (const auto& x : table.entries) {
    const AlgebraElement h = hermitian_part(x);
    r.min_eigenvalue = std::min(r.min_eigenvalue, h.min_eigenvalue(1.0));
    r.max_eigenvalue = std::max(r.max_eigenvalue, h.max_eigenvalue(1.0));
    r.centralizer_residual = std::max(r.centralizer_residual, relative_residual(phi.density() * x, x * phi.density()));
    for (const auto& y : table.entries)
      r.commutator_residual = std::max(r.commutator_residual, relative_residual(x * y, y * x));
  }
  r.positive = r.min_eigenvalue > 0.0;
  const double band = tol.eq * std::max(1.0, lambda);
  const double low_violation = std::max(0.0, 1.0 / lambda - r.min_eigenvalue);
  const double high_violation = std::max(0.0, r.max_eigenvalue - lambda);
  r.spectrum_within_lambda = low_violation <= band && high_violation <= band;

  r.checks.push_back(make_check("cocycle_positive", "strong quasi-invariance: x_g positive invertible",
                                r.positive ? 0.0 : -r.min_eigenvalue + 1.0, tol.eq));
  r.checks.push_back(make_check("cocycle_commuting", "strong quasi-invariance: [x_g, x_h] = 0", r.commutator_residual,
                                tol.eq));
  r.checks.push_back(make_check("cocycle_centralizer", "strong quasi-invariance: x_g in the centralizer of phi",
                                r.centralizer_residual, tol.eq));
  r.checks.push_back(make_check("cocycle_spectrum_band", "strong quasi-invariance: 1/lambda <= x_g <= lambda",
                                std::max(low_violation, high_violation) / std::max(1.0, lambda), tol.eq));
  return r;
}

std::vector<AlgebraElement> psd_probes(const AlgebraDescriptor& desc, Rng& rng, std::size_t count) {
  std::vector<AlgebraElement> out;
  for (std::size_t b = 0; b < desc.block_count(); ++b)
    for (int i = 0; i < desc.dim(b); ++i) out.push_back(AlgebraElement::matrix_unit(desc, b, i, i));
  for (std::size_t k = 0; k < count; ++k) {
    AlgebraElement p = random_psd_element(desc, rng, k % 2 == 1);
    // Occasionally concentrate the probe on one block.
    if (k % 3 == 2 && desc.block_count() > 1) {
      const std::size_t keep = k % desc.block_count();
      for (std::size_t b = 0; b < desc.block_count(); ++b)
        if (b != keep) p.block(b).setZero();
    }
    const double tr = p.block_trace_sum().real();
    out.push_back(p * cplx(1.0 / tr, 0.0));
  }
  return out;
}

CheckResult sz_domination(const State& phi, const AlgebraElement& a, std::span<const AlgebraElement> probes,
                          const Tolerances& tol) {
  require_same(phi.descriptor(), a.descriptor(), "sz_domination");
  const AlgebraElement ra = phi.density() * a;
  const double herm = ra.hermiticity_residual();
  const double scale = std::max(1.0, ra.norm());
  if (herm > std::max(tol.herm, tol.eq) || hermitian_part(ra).min_eigenvalue(1.0) < -tol.pos * scale) {
    std::ostringstream os;
    os << "sz_domination: L_a phi not positive (rho a Hermiticity residual " << herm << ")";
    throw PreconditionError(os.str());
  }
  const double na = a.norm();
  double worst = 0.0;
  for (const auto& x : probes) {
    const cplx lhs = evaluate(phi, a * x);
    const double rhs = na * evaluate(phi, x).real();
    worst = std::max({worst, lhs.real() - rhs, std::abs(lhs.imag())});
  }
  return make_check("sz_domination", "L_a phi(x) <= ||a|| phi(x) for positive L_a phi", worst / std::max(1.0, na),
                    tol.eq);
}

CheckResult sandwich_check(const State& phi, const CocycleTable& table, std::span<const AlgebraElement> probes,
                           const Tolerances& tol) {
  const double lambda = table.lambda_bound;
  double worst = 0.0;
  for (std::size_t g = 0; g < table.entries.size(); ++g) {
    const AlgebraElement& x = table.x(g);
    const AlgebraElement xinv_adj = table.inverses[g].adjoint();
    for (const auto& a : probes) {
      const double pa = evaluate(phi, a).real();
      const cplx v1 = evaluate(phi, x * a);
      const cplx v2 = evaluate(phi, a * xinv_adj);
      for (const cplx v : {v1, v2}) {
        worst = std::max({worst, pa / lambda - v.real(), v.real() - lambda * pa, std::abs(v.imag())});
      }
    }
  }
  return make_check("sandwich_bounds", "(1/lambda) phi(a) <= phi(x_g a), phi(a (x_g^-1)^*) <= lambda phi(a)",
                    std::max(0.0, worst) / std::max(1.0, lambda), tol.eq);
}

}  // namespace qistate
