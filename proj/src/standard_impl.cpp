#include "qistate/standard_impl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qistate {

namespace {

const cplx kI(0.0, 1.0);

AlgebraElement rho_power_half(const State& phi, const Tolerances& tol) { return imag_power(phi.density(), -0.5 * kI, tol); }
AlgebraElement rho_power_minus_half(const State& phi, const Tolerances& tol) {
  return imag_power(phi.density(), 0.5 * kI, tol);
}

double op_distance(const CMatrix& a, const CMatrix& b) { return op_norm(a - b); }

}  // namespace

L2Vector L2Operator::operator()(const L2Vector& xi) const {
  require_same(descriptor, xi.descriptor(), "L2 operator application");
  return L2Vector::unvectorize(descriptor, matrix * xi.vectorize());
}

L2Operator operator_from_map(const AlgebraDescriptor& desc, const std::function<L2Vector(const L2Vector&)>& map) {
  const int n = desc.l2_dim();
  CMatrix m(n, n);
  const auto units = AlgebraElement::matrix_units(desc);
  for (int k = 0; k < n; ++k) m.col(k) = map(L2Vector(units[k])).vectorize();
  return {desc, std::move(m)};
}

L2Operator left_multiplication(const AlgebraElement& x) {
  return operator_from_map(x.descriptor(), [&](const L2Vector& xi) { return L2Vector(x * xi.as_element()); });
}

L2Operator right_multiplication(const AlgebraElement& x) {
  return operator_from_map(x.descriptor(), [&](const L2Vector& xi) { return L2Vector(xi.as_element() * x); });
}

CheckList unitarity_checks(const L2Operator& u, const Tolerances& tol) {
  const CMatrix id = CMatrix::Identity(u.matrix.rows(), u.matrix.cols());
  return {
      make_check("u_isometry", "U_g^* U_g = 1", op_norm(u.matrix.adjoint() * u.matrix - id), tol.eq),
      make_check("u_surjective", "U_g U_g^* = 1", op_norm(u.matrix * u.matrix.adjoint() - id), tol.eq),
  };
}

AlgebraElement a_g(const State& phi, const Automorphism& g, const Tolerances& tol) {
  require_same(phi.descriptor(), g.descriptor(), "a_g");
  require_faithful(phi, tol, "a_g");
  const AlgebraElement rmh = rho_power_minus_half(phi, tol);
  const AlgebraElement inner = hermitian_part(rmh * predual(g, phi.density()) * rmh);
  return psd_sqrt(inner, tol);
}

CheckList a_g_checks(const State& phi, const CocycleTable& table, std::size_t g, bool strong, const Tolerances& tol) {
  const FiniteGroup& G = table.group;
  const Automorphism& ge = G.element(g);
  const AlgebraElement& rho = phi.density();
  const AlgebraElement& x = table.x(g);
  const AlgebraElement a = a_g(phi, ge, tol);
  const AlgebraElement a2 = a * a;
  const AlgebraElement rh = rho_power_half(phi, tol);
  const AlgebraElement moved = predual(ge, rho);

  const AlgebraElement sigma_half = modular_flow(phi, x, -0.5 * kI, tol);
  const double alpha = 1.0 / table.x(G.inverse_of(g)).norm();
  const double lower = std::max(0.0, alpha - a2.min_eigenvalue(1.0));

  CheckList out{
      make_check("density_sandwich", "g_* rho = rho^1/2 a_g^2 rho^1/2", relative_residual(moved, rh * a2 * rh),
                 tol.eq),
      make_check("density_left", "g_* rho = x_g^* rho", relative_residual(moved, x.adjoint() * rho), tol.eq),
      make_check("density_right", "x_g^* rho = rho x_g", relative_residual(x.adjoint() * rho, rho * x), tol.eq),
      make_check("a_g_modular", "a_g^2 = sigma_{-i/2}(x_g)", relative_residual(a2, sigma_half), tol.eq),
      make_check("a_g_lower_bound", "a_g^2 >= 1/||x_{g^-1}||", lower, tol.eq),
  };
  if (strong) {
    out.push_back(make_check("a_g_strong_root", "a_g = x_g^1/2 in the strong case",
                             relative_residual(a, psd_sqrt(hermitian_part(x), tol)), tol.eq));
    out.push_back(make_check("a_g_strong_commutes", "a_g rho^1/2 = rho^1/2 a_g", relative_residual(a * rh, rh * a),
                             tol.eq));
  }
  return out;
}

L2Operator u_g(const State& phi, const Automorphism& g, const Tolerances& tol) {
  require_same(phi.descriptor(), g.descriptor(), "u_g");
  require_faithful(phi, tol, "u_g");
  const AlgebraElement rh = rho_power_half(phi, tol);
  const AlgebraElement rmh = rho_power_minus_half(phi, tol);
  const AlgebraElement tail = rh * a_g(phi, g, tol);
  const Automorphism ginv = inverse(g);
  return operator_from_map(phi.descriptor(), [&](const L2Vector& xi) {
    return L2Vector(apply(ginv, xi.as_element() * rmh) * tail);
  });
}

CheckResult verify_covariance(const State& phi, const FiniteGroup& group, const Tolerances& tol) {
  const auto units = AlgebraElement::matrix_units(phi.descriptor());
  std::vector<L2Operator> lefts;
  lefts.reserve(units.size());
  for (const auto& e : units) lefts.push_back(left_multiplication(e));
  double worst = 0.0;
  for (const auto& g : group.elements()) {
    const L2Operator u = u_g(phi, g, tol);
    const CMatrix ga = action_matrix(g);  // columns: vec(g(e_k))
    for (std::size_t k = 0; k < units.size(); ++k) {
      // L_{g(e_k)} = sum_j ga(j, k) L_{e_j}
      CMatrix target = CMatrix::Zero(u.matrix.rows(), u.matrix.cols());
      for (std::size_t j = 0; j < units.size(); ++j)
        if (ga(j, k) != cplx(0.0, 0.0)) target += ga(j, k) * lefts[j].matrix;
      worst = std::max(worst, op_distance(u.matrix.adjoint() * lefts[k].matrix * u.matrix, target));
    }
  }
  return make_check("covariance", "U_g^* x U_g = g(x)", worst, tol.eq);
}

CheckResult verify_representation(const State& phi, const FiniteGroup& group, bool strong, const Tolerances& tol) {
  std::vector<L2Operator> us;
  us.reserve(group.size());
  for (const auto& g : group.elements()) us.push_back(u_g(phi, g, tol));
  double worst = 0.0;
  for (std::size_t g = 0; g < group.size(); ++g)
    for (std::size_t h = 0; h < group.size(); ++h)
      worst = std::max(worst, op_distance(us[g].matrix * us[h].matrix, us[group.product(h, g)].matrix));
  if (!strong) return make_diagnostic("representation_deviation", "U_g U_h - U_{hg} (no bound claimed)", worst);
  return make_check("representation", "U_g U_h = U_{hg} in the strong case", worst, tol.eq);
}

GammaFactorization gamma_factorization(const State& phi, const State& psi, const AlgebraElement& d,
                                       const CocycleTable& table, const Tolerances& tol) {
  require_same(phi.descriptor(), psi.descriptor(), "gamma_factorization");
  require_faithful(phi, tol, "gamma_factorization");
  require_faithful(psi, tol, "gamma_factorization");
  const AlgebraElement& rho = phi.density();
  const AlgebraElement& rho_psi = psi.density();
  const double match = relative_residual(rho_psi, rho * d);
  if (match > tol.eq) {
    std::ostringstream os;
    os << "gamma_factorization: psi is not phi(d .) (residual " << match << ")";
    throw PreconditionError(os.str());
  }

  GammaFactorization out;
  out.gamma = psd_sqrt(rho_psi, tol) * rho_power_minus_half(phi, tol);
  const AlgebraElement& gamma = out.gamma;
  const AlgebraElement gamma_inv = gamma.inverse(tol.pos);
  const AlgebraElement rho_inv = rho.inverse(tol.pos);
  const cplx minus_i = -kI;

  const AlgebraElement d_adj = d.adjoint();
  double per_g = 0.0;
  const FiniteGroup& G = table.group;
  for (std::size_t g = 0; g < G.size(); ++g) {
    const AlgebraElement gamma_g = apply(G.element(G.inverse_of(g)), gamma_inv) * gamma;
    const AlgebraElement rhs = gamma_g * modular_flow(phi, gamma_g.adjoint(), minus_i, tol);
    per_g = std::max(per_g, relative_residual(table.x(g).adjoint(), rhs));
  }
  out.checks = {
      make_check("gamma_density", "rho_psi = gamma rho gamma^*", relative_residual(rho_psi, gamma * rho * gamma.adjoint()),
                 tol.eq),
      make_check("gamma_root", "rho_psi^1/2 = gamma rho^1/2",
                 relative_residual(psd_sqrt(rho_psi, tol), gamma * rho_power_half(phi, tol)), tol.eq),
      make_check("gamma_d_adjoint", "d^* = gamma sigma_{-i}(gamma^*) = rho_psi rho^-1",
                 std::max(relative_residual(d_adj, gamma * modular_flow(phi, gamma.adjoint(), minus_i, tol)),
                          relative_residual(d_adj, rho_psi * rho_inv)),
                 tol.eq),
      make_check("gamma_g_cocycle", "x_g^* = gamma_g sigma_{-i}(gamma_g^*)", per_g, tol.eq),
  };
  return out;
}

}  // namespace qistate
