#include "qistate/actions.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace qistate {

Automorphism::Automorphism(AlgebraDescriptor desc, std::vector<int> perm, std::vector<CMatrix> unitaries,
                           double unitary_tol)
    : desc_(std::move(desc)), perm_(std::move(perm)), unitaries_(std::move(unitaries)) {
  const std::size_t k = desc_.block_count();
  if (perm_.size() != k) {
    std::ostringstream os;
    os << "automorphism: permutation has " << perm_.size() << " entries, algebra has " << k << " blocks";
    throw InputError(os.str());
  }
  std::vector<bool> hit(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    const int t = perm_[j];
    if (t < 0 || static_cast<std::size_t>(t) >= k || hit[t]) throw InputError("automorphism: perm is not a permutation");
    hit[t] = true;
    if (desc_.dim(t) != desc_.dim(j)) {
      std::ostringstream os;
      os << "automorphism: perm maps block " << j << " (dim " << desc_.dim(j) << ") to block " << t << " (dim "
         << desc_.dim(t) << ")";
      throw InputError(os.str());
    }
  }
  if (unitaries_.size() != k) throw InputError("automorphism: need one unitary per block");
  for (std::size_t i = 0; i < k; ++i) {
    const CMatrix& u = unitaries_[i];
    if (u.rows() != desc_.dim(i) || u.cols() != desc_.dim(i)) {
      std::ostringstream os;
      os << "automorphism: unitary " << i << " has wrong shape";
      throw InputError(os.str());
    }
    if (!all_finite(u)) throw InputError("automorphism: unitary has a non-finite entry");
    const double res = op_norm(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
    if (res > unitary_tol) {
      std::ostringstream os;
      os << "automorphism: unitary " << i << " is not unitary (residual " << res << ")";
      throw InputError(os.str());
    }
  }
}

Automorphism Automorphism::identity(const AlgebraDescriptor& desc) {
  std::vector<int> perm(desc.block_count());
  std::vector<CMatrix> us;
  for (std::size_t i = 0; i < desc.block_count(); ++i) {
    perm[i] = static_cast<int>(i);
    us.push_back(CMatrix::Identity(desc.dim(i), desc.dim(i)));
  }
  return {desc, std::move(perm), std::move(us)};
}

Automorphism Automorphism::inner(const AlgebraDescriptor& desc, std::vector<CMatrix> unitaries) {
  std::vector<int> perm(desc.block_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  return {desc, std::move(perm), std::move(unitaries)};
}

int Automorphism::perm_inverse(int i) const {
  for (std::size_t j = 0; j < perm_.size(); ++j)
    if (perm_[j] == i) return static_cast<int>(j);
  return -1;
}

AlgebraElement apply(const Automorphism& g, const AlgebraElement& a) {
  require_same(g.descriptor(), a.descriptor(), "apply");
  AlgebraElement out = AlgebraElement::zero(a.descriptor());
  for (std::size_t j = 0; j < g.perm().size(); ++j) {
    const int i = g.perm()[j];
    const CMatrix& u = g.unitaries()[i];
    out.block(i) = u * a.block(j) * u.adjoint();
  }
  return out;
}

Automorphism compose(const Automorphism& g, const Automorphism& h) {
  require_same(g.descriptor(), h.descriptor(), "compose");
  const std::size_t k = g.perm().size();
  std::vector<int> perm(k);
  std::vector<CMatrix> us(k);
  for (std::size_t j = 0; j < k; ++j) perm[j] = g.perm()[h.perm()[j]];
  for (std::size_t i = 0; i < k; ++i) us[i] = g.unitaries()[i] * h.unitaries()[g.perm_inverse(static_cast<int>(i))];
  return {g.descriptor(), std::move(perm), std::move(us), 1e-6};
}

Automorphism inverse(const Automorphism& g) {
  const std::size_t k = g.perm().size();
  std::vector<int> perm(k);
  std::vector<CMatrix> us(k);
  for (std::size_t j = 0; j < k; ++j) perm[g.perm()[j]] = static_cast<int>(j);
  for (std::size_t i = 0; i < k; ++i) us[i] = g.unitaries()[g.perm()[i]].adjoint();
  return {g.descriptor(), std::move(perm), std::move(us), 1e-6};
}

bool equal_as_maps(const Automorphism& g, const Automorphism& h, double tol) {
  require_same(g.descriptor(), h.descriptor(), "equal_as_maps");
  // A matrix unit of block j lands in block pi(j); differing targets already differ.
  if (g.perm() != h.perm()) return false;
  for (std::size_t j = 0; j < g.perm().size(); ++j) {
    const int i = g.perm()[j];
    const CMatrix& ug = g.unitaries()[i];
    const CMatrix& uh = h.unitaries()[i];
    const int n = g.descriptor().dim(j);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        const CMatrix lhs = ug.col(r) * ug.col(c).adjoint();
        const CMatrix rhs = uh.col(r) * uh.col(c).adjoint();
        if ((lhs - rhs).cwiseAbs().maxCoeff() > tol) return false;
      }
  }
  return true;
}

AlgebraElement predual(const Automorphism& g, const AlgebraElement& rho) {
  require_same(g.descriptor(), rho.descriptor(), "predual");
  AlgebraElement out = AlgebraElement::zero(rho.descriptor());
  for (std::size_t j = 0; j < g.perm().size(); ++j) {
    const int i = g.perm()[j];
    const CMatrix& u = g.unitaries()[i];
    out.block(j) = u.adjoint() * rho.block(i) * u;
  }
  return out;
}

CMatrix action_matrix(const Automorphism& g) {
  const AlgebraDescriptor& desc = g.descriptor();
  const int n = desc.l2_dim();
  CMatrix m(n, n);
  const auto units = AlgebraElement::matrix_units(desc);
  for (int k = 0; k < n; ++k) m.col(k) = apply(g, units[k]).vectorize();
  return m;
}

FiniteGroup::FiniteGroup(std::vector<Automorphism> elements, std::vector<std::vector<int>> mult,
                         std::vector<int> inverse)
    : elements_(std::move(elements)), mult_(std::move(mult)), inverse_(std::move(inverse)) {
  const std::size_t n = elements_.size();
  if (n == 0) throw InputError("finite group: no elements");
  if (mult_.size() != n || inverse_.size() != n) throw InputError("finite group: table sizes do not match");
  for (const auto& row : mult_)
    if (row.size() != n) throw InputError("finite group: multiplication table is not square");
}

namespace {

// Images of a fixed generic element: equal maps give equal fingerprints, so a
// cheap scalar comparison screens candidates before equal_as_maps.
class Fingerprinter {
 public:
  explicit Fingerprinter(const AlgebraDescriptor& desc) {
    std::vector<CMatrix> blocks;
    int k = 0;
    for (int n : desc.block_dims()) {
      CMatrix b(n, n);
      for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r, ++k) b(r, c) = cplx(std::sin(1.37 * k + 0.71), std::cos(2.11 * k + 0.29));
      blocks.push_back(b);
    }
    probe_ = AlgebraElement(desc, std::move(blocks));
    weights_ = CVector(desc.l2_dim());
    for (int j = 0; j < desc.l2_dim(); ++j) weights_(j) = cplx(std::cos(0.93 * j + 0.11), std::sin(1.71 * j + 0.41));
  }

  cplx operator()(const Automorphism& g) const { return weights_.dot(apply(g, probe_).vectorize()); }

 private:
  AlgebraElement probe_;
  CVector weights_;
};

int lookup(const std::vector<Automorphism>& elems, const std::vector<cplx>& prints, const Automorphism& g, cplx print,
           double tol) {
  const double screen = 1e-6 * (1.0 + std::abs(print));
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (std::abs(prints[i] - print) < screen && equal_as_maps(elems[i], g, tol)) return static_cast<int>(i);
  return -1;
}

}  // namespace

FiniteGroup close_group(std::span<const Automorphism> generators, std::size_t cap, double tol) {
  if (generators.empty()) throw InputError("close_group: no generators");
  const AlgebraDescriptor desc = generators.front().descriptor();
  for (const auto& g : generators) require_same(desc, g.descriptor(), "close_group");

  const Fingerprinter fp(desc);
  std::vector<Automorphism> elems{Automorphism::identity(desc)};
  std::vector<cplx> prints{fp(elems.front())};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    for (const auto& s : generators) {
      Automorphism cand = compose(s, elems[cur]);
      const cplx p = fp(cand);
      if (lookup(elems, prints, cand, p, tol) >= 0) continue;
      if (elems.size() >= cap) {
        std::ostringstream os;
        os << "group not finite at cap " << cap;
        throw PreconditionError(os.str());
      }
      elems.push_back(std::move(cand));
      prints.push_back(p);
      frontier.push_back(elems.size() - 1);
    }
  }

  const std::size_t n = elems.size();
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, -1));
  std::vector<int> inv(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Automorphism prod = compose(elems[i], elems[j]);
      const int idx = lookup(elems, prints, prod, fp(prod), tol);
      if (idx < 0) throw ConsistencyError("close_group: product fell outside the closure");
      mult[i][j] = idx;
      if (idx == 0) inv[i] = static_cast<int>(j);
    }
    if (inv[i] < 0) throw ConsistencyError("close_group: element without inverse");
  }
  return {std::move(elems), std::move(mult), std::move(inv)};
}

int find_element(const FiniteGroup& group, const Automorphism& g, double tol) {
  for (std::size_t i = 0; i < group.size(); ++i)
    if (equal_as_maps(group.element(i), g, tol)) return static_cast<int>(i);
  return -1;
}

}  // namespace qistate
