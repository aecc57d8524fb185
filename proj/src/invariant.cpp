#include "qistate/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qistate {

AlgebraElement gamma_map(const State& phi, const Automorphism& g, const AlgebraElement& a, const Tolerances& tol) {
  return rn_cocycle(phi, inverse(g), tol) * apply(g, a);
}

AlgebraElement gamma_map(const CocycleTable& table, std::size_t g, const AlgebraElement& a) {
  const FiniteGroup& G = table.group;
  return table.x(G.inverse_of(g)) * apply(G.element(g), a);
}

CheckList gamma_properties_check(const State& phi, const CocycleTable& table, std::span<const AlgebraElement> probes,
                                 const Tolerances& tol) {
  const FiniteGroup& G = table.group;
  double permutes = 0.0, multiplicative = 0.0, preserves = 0.0, product_rule = 0.0, adjoint_rule = 0.0;
  for (std::size_t g = 0; g < G.size(); ++g) {
    const std::size_t gi = G.inverse_of(g);
    const AlgebraElement& x_gi = table.x(gi);
    const AlgebraElement& x_gi_inv = table.inverses[gi];
    for (std::size_t h = 0; h < G.size(); ++h) {
      permutes = std::max(permutes, relative_residual(gamma_map(table, g, table.x(h)), table.x(G.product(h, gi))));
      for (const auto& a : probes) {
        const AlgebraElement lhs = gamma_map(table, G.product(g, h), a);
        const AlgebraElement rhs = gamma_map(table, g, gamma_map(table, h, a));
        multiplicative = std::max(multiplicative, relative_residual(lhs, rhs));
      }
    }
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const AlgebraElement& a = probes[k];
      const AlgebraElement& b = probes[(k + 1) % probes.size()];
      const AlgebraElement ga = gamma_map(table, g, a);
      const cplx pa = evaluate(phi, a);
      preserves = std::max(preserves, std::abs(evaluate(phi, ga) - pa) / std::max(1.0, std::abs(pa)));
      product_rule = std::max(product_rule,
                              relative_residual(gamma_map(table, g, a * b), ga * x_gi_inv * gamma_map(table, g, b)));
      adjoint_rule = std::max(adjoint_rule, relative_residual(ga.adjoint(), x_gi_inv * gamma_map(table, g, a.adjoint()) *
                                                                                 x_gi.adjoint()));
    }
  }
  return {
      make_check("gamma_permutes_cocycles", "Gamma_g(x_h) = x_{h g^-1}", permutes, tol.eq),
      make_check("gamma_multiplicative", "Gamma_{gh} = Gamma_g Gamma_h", multiplicative, tol.eq),
      make_check("gamma_preserves_phi", "phi o Gamma_g = phi", preserves, tol.eq),
      make_check("gamma_product_rule", "Gamma_g(ab) = Gamma_g(a) x_{g^-1}^-1 Gamma_g(b)", product_rule, tol.eq),
      make_check("gamma_adjoint_rule", "Gamma_g(a)^* = x_{g^-1}^-1 Gamma_g(a^*) x_{g^-1}^*", adjoint_rule, tol.eq),
  };
}

namespace {

double gamma_fixedness(const CocycleTable& table, const AlgebraElement& d) {
  double worst = 0.0;
  for (std::size_t g = 0; g < table.group.size(); ++g)
    worst = std::max(worst, relative_residual(gamma_map(table, g, d), d));
  return worst;
}

}  // namespace

AlgebraElement fixed_density_d(const State& phi, const CocycleTable& table, const Tolerances& tol) {
  AlgebraElement d = AlgebraElement::zero(phi.descriptor());
  for (const auto& x : table.entries) d += x;
  d *= cplx(1.0 / static_cast<double>(table.entries.size()), 0.0);

  const double fixed = gamma_fixedness(table, d);
  const double norm = std::abs(evaluate(phi, d) - 1.0);
  if (fixed > tol.eq || norm > tol.eq) {
    std::ostringstream os;
    os << "fixed_density_d: Gamma-fixedness residual " << fixed << ", normalization residual " << norm;
    throw ConsistencyError(os.str());
  }
  return d;
}

InvariantCertificate invariant_state(const State& phi, const CocycleTable& table,
                                     std::span<const AlgebraElement> probes, const Tolerances& tol) {
  const FiniteGroup& G = table.group;
  AlgebraElement d = fixed_density_d(phi, table, tol);
  const AlgebraElement rd = phi.density() * d;

  const double herm = rd.hermiticity_residual();
  const double min_eig = hermitian_part(rd).min_eigenvalue(1.0);
  if (herm > tol.eq || min_eig < -tol.pos) {
    std::ostringstream os;
    os << "invariant_state: rho d is not Hermitian PSD (Hermiticity residual " << herm << ", min eigenvalue " << min_eig
       << ")";
    throw ConsistencyError(os.str());
  }
  State psi = State::from_density(hermitian_part(rd), tol);

  InvariantCertificate cert{std::move(d), std::move(psi), table.lambda_bound, 0.0, {}, {}};
  const AlgebraElement& rho_psi = cert.psi.density();
  cert.d_min_singular_value = cert.d.min_singular_value();

  double invariance = 0.0;
  double functional_invariance = 0.0;
  const auto units = AlgebraElement::matrix_units(phi.descriptor());
  for (std::size_t g = 0; g < G.size(); ++g) {
    invariance = std::max(invariance, relative_residual(predual(G.element(g), rho_psi), rho_psi));
    for (const auto& e : units)
      functional_invariance = std::max(
          functional_invariance, std::abs(evaluate(cert.psi, apply(G.element(g), e)) - evaluate(cert.psi, e)));
  }

  const double lambda = table.lambda_bound;
  const double rho_min = is_faithful(phi, tol.pos).min_eigenvalue;
  const double psi_min = is_faithful(cert.psi, tol.pos).min_eigenvalue;
  const double margin = psi_min - rho_min / lambda;

  double sandwich = 0.0;
  for (const auto& a : probes) {
    const double pa = evaluate(phi, a).real();
    const cplx qa = evaluate(cert.psi, a);
    sandwich = std::max({sandwich, pa / lambda - qa.real(), qa.real() - lambda * pa, std::abs(qa.imag())});
  }

  cert.residuals["gamma_fixedness"] = gamma_fixedness(table, cert.d);
  cert.residuals["invariance"] = std::max(invariance, functional_invariance);
  cert.residuals["faithfulness_margin"] = margin;
  cert.residuals["normalization"] = std::abs(evaluate(phi, cert.d) - 1.0);

  cert.checks = {
      make_check("d_gamma_fixed", "d = x_{g^-1} g(d) for all g", cert.residuals["gamma_fixedness"], tol.eq),
      make_check("d_normalization", "phi(d) = 1", cert.residuals["normalization"], tol.eq),
      make_check("psi_invariant", "psi o g = psi", cert.residuals["invariance"], tol.eq),
      make_check("psi_faithful_margin", "min spec(rho_psi) >= min spec(rho) / lambda", std::max(0.0, -margin), tol.eq),
      make_check("psi_sandwich", "(1/lambda) phi <= psi <= lambda phi on positive probes",
                 std::max(0.0, sandwich) / std::max(1.0, lambda), tol.eq),
      make_diagnostic("d_min_singular_value", "invertibility of the averaged d", cert.d_min_singular_value),
  };
  return cert;
}

ConverseCocycle cocycle_from_d(const State& phi, const AlgebraElement& d, const Automorphism& g, const Tolerances& tol) {
  require_same(phi.descriptor(), d.descriptor(), "cocycle_from_d");
  const AlgebraElement d_inv = d.inverse(tol.pos);

  const AlgebraElement rd = phi.density() * d;
  const double inv_res = relative_residual(predual(g, rd), rd);
  if (inv_res > tol.eq) {
    std::ostringstream os;
    os << "cocycle_from_d: phi(d .) is not invariant under g (residual " << inv_res << ")";
    throw PreconditionError(os.str());
  }

  ConverseCocycle out;
  out.x = d * apply(inverse(g), d_inv);
  out.bound = d.norm() * d_inv.norm();
  const AlgebraElement direct = rn_cocycle(phi, g, tol);
  out.checks = {
      make_check("converse_matches_cocycle", "x_g = d g^-1(d^-1)", relative_residual(out.x, direct), tol.eq),
      make_check("converse_bound", "||x_g|| <= ||d|| ||d^-1||",
                 std::max(0.0, out.x.norm() - out.bound) / std::max(1.0, out.bound), tol.eq),
  };
  return out;
}

CheckList strong_case_check(const CocycleTable& table, const AlgebraElement& d, const Tolerances& tol) {
  const double lambda = table.lambda_bound;
  const double herm = d.hermiticity_residual();
  const AlgebraElement h = hermitian_part(d);
  const double lo = h.min_eigenvalue(1.0);
  const double hi = h.max_eigenvalue(1.0);
  const double band = std::max({0.0, 1.0 / lambda - lo, hi - lambda}) / std::max(1.0, lambda);
  double comm = 0.0;
  for (const auto& g : table.group.elements()) {
    const AlgebraElement gd = apply(g, d);
    comm = std::max(comm, commutator_norm(d, gd) / std::max(1.0, d.norm() * gd.norm()));
  }
  return {
      make_check("d_hermitian", "d self-adjoint", herm, tol.eq),
      make_check("d_spectrum_band", "1/lambda <= d <= lambda", band, tol.eq),
      make_check("d_orbit_commutes", "[d, g(d)] = 0", comm, tol.eq),
  };
}

}  // namespace qistate
