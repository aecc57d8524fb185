#include "qistate/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qistate {

AlgebraElement FixedAlgebra::project(const AlgebraElement& a) const {
  const CVector v = a.vectorize();
  return AlgebraElement::unvectorize(descriptor, coordinates * (coordinates.adjoint() * v));
}

double FixedAlgebra::distance_to(const AlgebraElement& a) const {
  return distance(a, project(a)) / std::max(1.0, a.norm());
}

FixedAlgebra fixed_algebra(const FiniteGroup& group, const Tolerances& tol) {
  const AlgebraDescriptor& desc = group.descriptor();
  const int n = desc.l2_dim();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix stacked(n * static_cast<int>(group.size() - 1), n);
  for (std::size_t g = 1; g < group.size(); ++g) stacked.middleRows(n * (g - 1), n) = action_matrix(group.element(g)) - id;

  FixedAlgebra out{desc, {}, nullspace(stacked, tol.pos), {}};
  for (Eigen::Index j = 0; j < out.coordinates.cols(); ++j)
    out.basis.push_back(AlgebraElement::unvectorize(desc, out.coordinates.col(j)));

  double fixedness = 0.0, products = 0.0, adjoints = 0.0;
  for (const auto& b : out.basis) {
    for (const auto& g : group.elements()) fixedness = std::max(fixedness, distance(apply(g, b), b));
    adjoints = std::max(adjoints, out.distance_to(b.adjoint()));
    for (const auto& c : out.basis) products = std::max(products, out.distance_to(b * c));
  }
  out.checks = {
      make_check("fixed_basis_invariant", "g(b) = b for b in B", fixedness, tol.eq),
      make_check("fixed_product_closed", "B closed under products", products, tol.eq),
      make_check("fixed_adjoint_closed", "B closed under adjoints", adjoints, tol.eq),
  };
  return out;
}

AlgebraElement ConditionalExpectation::operator()(const AlgebraElement& a) const {
  AlgebraElement sum = AlgebraElement::zero(a.descriptor());
  for (const auto& g : group_.elements()) sum += apply(g, a);
  return sum * cplx(1.0 / static_cast<double>(group_.size()), 0.0);
}

ConditionalExpectation cond_expectation(const State& psi, const FiniteGroup& group, const Tolerances& tol) {
  double worst = 0.0;
  for (const auto& g : group.elements())
    worst = std::max(worst, relative_residual(predual(g, psi.density()), psi.density()));
  if (worst > tol.eq) {
    std::ostringstream os;
    os << "cond_expectation: reference state is not G-invariant (residual " << worst << ")";
    throw PreconditionError(os.str());
  }
  return ConditionalExpectation(group);
}

CheckList verify_conditional_expectation(const ConditionalExpectation& phi_map, const State& psi,
                                         const FixedAlgebra& fixed, std::span<const AlgebraElement> probes,
                                         std::span<const AlgebraElement> psd_probes, const Tolerances& tol) {
  const AlgebraDescriptor& desc = psi.descriptor();
  std::vector<AlgebraElement> inputs = AlgebraElement::matrix_units(desc);
  inputs.insert(inputs.end(), probes.begin(), probes.end());

  double range = 0.0, idem = 0.0, invariant = 0.0, contract = 0.0, g_inv = 0.0, bimodule = 0.0, schwarz = 0.0;
  for (const auto& a : inputs) {
    const AlgebraElement pa = phi_map(a);
    range = std::max(range, fixed.distance_to(pa));
    idem = std::max(idem, relative_residual(phi_map(pa), pa));
    const cplx va = evaluate(psi, a);
    invariant = std::max(invariant, std::abs(evaluate(psi, pa) - va) / std::max(1.0, std::abs(va)));
    contract = std::max(contract, std::max(0.0, pa.norm() - a.norm()) / std::max(1.0, a.norm()));
    for (const auto& g : phi_map.group().elements()) g_inv = std::max(g_inv, relative_residual(phi_map(apply(g, a)), pa));
  }
  for (const auto& a : probes) {
    const AlgebraElement pa = phi_map(a);
    const AlgebraElement gap = hermitian_part(phi_map(a.adjoint() * a) - pa.adjoint() * pa);
    schwarz = std::max(schwarz, std::max(0.0, -gap.min_eigenvalue(1.0)) / std::max(1.0, a.norm() * a.norm()));
    // all left factors, a few right factors
    const std::size_t right = std::min<std::size_t>(fixed.basis.size(), 4);
    for (const auto& b : fixed.basis)
      for (std::size_t j = 0; j < right; ++j) {
        const AlgebraElement& c = fixed.basis[j];
        bimodule = std::max(bimodule, relative_residual(phi_map(b * a * c), b * pa * c));
      }
  }
  double positive = 0.0;
  for (const auto& p : psd_probes) {
    const AlgebraElement pp = hermitian_part(phi_map(p));
    positive = std::max(positive, std::max(0.0, -pp.min_eigenvalue(1.0)) / std::max(1.0, p.norm()));
  }
  const AlgebraElement one = AlgebraElement::identity(desc);
  return {
      make_check("phi_range_fixed", "Phi(a) in B", range, tol.eq),
      make_check("phi_idempotent", "Phi o Phi = Phi", idem, tol.eq),
      make_check("phi_unital", "Phi(1) = 1", relative_residual(phi_map(one), one), tol.eq),
      make_check("phi_positive", "Phi(a) >= 0 for a >= 0", positive, tol.eq),
      make_check("phi_preserves_psi", "psi = psi|_B o Phi", invariant, tol.eq),
      make_check("phi_bimodule", "Phi(b a c) = b Phi(a) c for b, c in B", bimodule, tol.eq),
      make_check("phi_contractive", "||Phi(a)|| <= ||a||", contract, tol.eq),
      make_check("phi_group_invariant", "Phi o g = Phi", g_inv, tol.eq),
      make_check("phi_schwarz", "Phi(a^* a) >= Phi(a)^* Phi(a)", schwarz, tol.eq),
  };
}

namespace {

Projection projection_from_range(const std::string& prefix, const AlgebraDescriptor& desc, CMatrix range,
                                 const Tolerances& tol) {
  const CMatrix p = range * range.adjoint();
  Projection out{{desc, p}, std::move(range), {}};
  out.checks = {
      make_check(prefix + "_idempotent", "E^2 = E", op_norm(p * p - p), tol.eq),
      make_check(prefix + "_selfadjoint", "E^* = E", op_norm(p.adjoint() - p), tol.eq),
  };
  return out;
}

}  // namespace

Projection e0_projection(const State& phi, const FiniteGroup& group, const Tolerances& tol) {
  const AlgebraDescriptor& desc = phi.descriptor();
  const int n = desc.l2_dim();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix stacked(n * static_cast<int>(group.size()), n);
  for (std::size_t g = 0; g < group.size(); ++g) stacked.middleRows(n * g, n) = u_g(phi, group.element(g), tol).matrix - id;
  return projection_from_range("e0", desc, nullspace(stacked, tol.pos), tol);
}

CheckList verify_ks(const State& phi, const CocycleTable& table, const InvariantCertificate& cert,
                    const Tolerances& tol) {
  const StrongQiReport strong = is_strongly_qi(phi, table, tol);
  if (!strong.strong) throw PreconditionError("verify_ks: state is not strongly quasi-invariant");
  const FiniteGroup& G = table.group;
  const AlgebraDescriptor& desc = phi.descriptor();
  const int n = desc.l2_dim();

  const ConditionalExpectation Phi = cond_expectation(cert.psi, G, tol);
  const Projection e0 = e0_projection(phi, G, tol);
  const CMatrix& E = e0.op.matrix;
  const AlgebraElement d_inv = cert.d.inverse(tol.pos);

  std::vector<L2Operator> us, us_inv;
  for (std::size_t g = 0; g < G.size(); ++g) us.push_back(u_g(phi, G.element(g), tol));
  for (std::size_t g = 0; g < G.size(); ++g) us_inv.push_back(us[G.inverse_of(g)]);

  const auto units = AlgebraElement::matrix_units(desc);
  std::vector<CMatrix> left_e;
  for (const auto& e : units) left_e.push_back(left_multiplication(e).matrix);

  // Columns vec(L_{e_j} E0): the map y -> L_y E0 on coordinates of y.
  CMatrix solve_for(static_cast<Eigen::Index>(n) * n, n);
  for (int j = 0; j < n; ++j) solve_for.col(j) = (left_e[j] * E).reshaped();
  Eigen::JacobiSVD<CMatrix> svd(solve_for, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double injectivity = sv(sv.size() - 1) / std::max(1.0, sv(0));

  double compress = 0.0, decomposition = 0.0, mean = 0.0, uniqueness = 0.0;
  for (std::size_t k = 0; k < units.size(); ++k) {
    const AlgebraElement& b = units[k];
    const AlgebraElement pb = Phi(b);
    const CMatrix lpb = left_multiplication(pb).matrix;
    const CMatrix ebe = E * left_e[k] * E;
    compress = std::max(compress, op_norm(lpb * E - ebe));

    const cplx lhs = evaluate(phi, b);
    const cplx rhs = evaluate(cert.psi, Phi(d_inv * b));
    decomposition = std::max(decomposition, std::abs(lhs - rhs));

    CMatrix avg = CMatrix::Zero(n, n);
    for (std::size_t g = 0; g < G.size(); ++g) avg += us_inv[g].matrix * left_e[k] * us[g].matrix;
    avg /= static_cast<double>(G.size());
    mean = std::max(mean, op_norm(lpb - avg));

    const CVector target = ebe.reshaped();
    const CVector y = svd.solve(target);
    uniqueness = std::max(uniqueness, relative_residual(AlgebraElement::unvectorize(desc, y), pb));
  }

  const L2Vector xi0(psd_sqrt(cert.d, tol) * psd_sqrt(phi.density(), tol));
  const CVector v0 = xi0.vectorize();
  double fixed_vec = (E * v0 - v0).norm();
  for (const auto& u : us) fixed_vec = std::max(fixed_vec, (u.matrix * v0 - v0).norm());

  return {
      make_check("ks_compression", "Phi(b) E0 = E0 b E0", compress, tol.eq),
      make_check("ks_decomposition", "phi = psi|_B o Phi(d^-1 .)", decomposition, tol.eq),
      make_check("ks_group_mean", "Phi(b) = mean_g U_{g^-1} b U_g", mean, tol.eq),
      make_check("ks_invariant_vector", "U_g d^1/2 rho^1/2 = d^1/2 rho^1/2 = E0 d^1/2 rho^1/2", fixed_vec, tol.eq),
      make_check("ks_uniqueness", "unique solution of y E0 = E0 b E0 equals Phi(b)",
                 injectivity > tol.pos ? uniqueness : 1.0 + uniqueness, tol.eq),
  };
}

std::vector<std::vector<CMatrix>> intertwiner_bases(const FixedAlgebra& fixed, const Tolerances& tol) {
  const AlgebraDescriptor& desc = fixed.descriptor;
  const std::size_t k = desc.block_count();
  std::vector<std::vector<CMatrix>> out(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const int ni = desc.dim(i), nj = desc.dim(j);
      const int unknowns = ni * nj;
      CMatrix stacked(unknowns * static_cast<int>(fixed.basis.size()), unknowns);
      for (std::size_t m = 0; m < fixed.basis.size(); ++m) {
        const CMatrix& bi = fixed.basis[m].block(i);
        const CMatrix& bj = fixed.basis[m].block(j);
        // vec(b_i X - X b_j) = (1 (x) b_i - b_j^T (x) 1) vec(X), column-major.
        CMatrix op = CMatrix::Zero(unknowns, unknowns);
        for (int q = 0; q < nj; ++q) op.block(q * ni, q * ni, ni, ni) = bi;
        for (int q = 0; q < nj; ++q)
          for (int s = 0; s < nj; ++s) op.block(q * ni, s * ni, ni, ni) -= bj(s, q) * CMatrix::Identity(ni, ni);
        stacked.middleRows(unknowns * m, unknowns) = op;
      }
      const CMatrix ker = fixed.basis.empty() ? CMatrix::Identity(unknowns, unknowns) : nullspace(stacked, tol.pos);
      for (Eigen::Index c = 0; c < ker.cols(); ++c) out[i * k + j].push_back(ker.col(c).reshaped(ni, nj));
    }
  return out;
}

CommutantProjection commutant_f0(const FixedAlgebra& fixed, const Projection& e0, bool assert_identity, int cap,
                                 const Tolerances& tol) {
  const AlgebraDescriptor& desc = fixed.descriptor;
  const int n = desc.l2_dim();
  if (n > cap) {
    std::ostringstream os;
    os << "commutant computation too large (l2 dimension " << n << " > cap " << cap << ")";
    throw PreconditionError(os.str());
  }
  const std::size_t k = desc.block_count();
  const auto inter = intertwiner_bases(fixed, tol);

  // An element of B' is a family of intertwiners between columns: column q of
  // block j is mapped by X in T_ij into column p of block i.
  std::size_t commutant_dim = 0;
  std::vector<CVector> images;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const int ni = desc.dim(i), nj = desc.dim(j);
      commutant_dim += inter[i * k + j].size() * ni * nj;
      for (const CMatrix& X : inter[i * k + j])
        for (Eigen::Index r = 0; r < e0.range.cols(); ++r) {
          const L2Vector xi = L2Vector::unvectorize(desc, e0.range.col(r));
          for (int q = 0; q < nj; ++q) {
            const CVector moved = X * xi.block(j).col(q);
            for (int p = 0; p < ni; ++p) {
              CVector v = CVector::Zero(n);
              v.segment(desc.l2_offset(i) + p * ni, ni) = moved;
              images.push_back(std::move(v));
            }
          }
        }
    }
  CMatrix span(n, static_cast<Eigen::Index>(images.size()));
  for (std::size_t c = 0; c < images.size(); ++c) span.col(c) = images[c];

  CommutantProjection out{projection_from_range("f0", desc, range_basis(span, tol.pos), tol), commutant_dim};
  const double dist = op_norm(out.f0.op.matrix - CMatrix::Identity(n, n));
  if (assert_identity)
    out.f0.checks.push_back(make_check("f0_identity", "F0 = [B' E0] = 1", dist, tol.eq));
  else
    out.f0.checks.push_back(make_diagnostic("f0_distance_to_identity", "||F0 - 1||", dist));
  return out;
}

}  // namespace qistate
