#include "qistate/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qistate {

AlgebraDescriptor::AlgebraDescriptor(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw InputError("algebra descriptor: block list is empty");
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1) {
      std::ostringstream os;
      os << "algebra descriptor: block " << i << " has dimension " << dims_[i];
      throw InputError(os.str());
    }
  }
}

int AlgebraDescriptor::l2_dim() const {
  int n = 0;
  for (int d : dims_) n += d * d;
  return n;
}

int AlgebraDescriptor::l2_offset(std::size_t block) const {
  int off = 0;
  for (std::size_t i = 0; i < block; ++i) off += dims_[i] * dims_[i];
  return off;
}

void require_same(const AlgebraDescriptor& a, const AlgebraDescriptor& b, const char* what) {
  if (!(a == b)) throw InputError(std::string(what) + ": algebra descriptors do not match");
}

AlgebraElement::AlgebraElement(AlgebraDescriptor desc, std::vector<CMatrix> blocks)
    : desc_(std::move(desc)), blocks_(std::move(blocks)) {
  if (blocks_.size() != desc_.block_count()) {
    std::ostringstream os;
    os << "algebra element: expected " << desc_.block_count() << " blocks, got " << blocks_.size();
    throw InputError(os.str());
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int n = desc_.dim(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n) {
      std::ostringstream os;
      os << "algebra element: block " << i << " is " << blocks_[i].rows() << "x" << blocks_[i].cols()
         << ", expected " << n << "x" << n;
      throw InputError(os.str());
    }
    if (!all_finite(blocks_[i])) {
      std::ostringstream os;
      os << "algebra element: block " << i << " has a non-finite entry";
      throw InputError(os.str());
    }
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraDescriptor& desc) {
  std::vector<CMatrix> b;
  for (int n : desc.block_dims()) b.push_back(CMatrix::Zero(n, n));
  return {desc, std::move(b)};
}

AlgebraElement AlgebraElement::identity(const AlgebraDescriptor& desc) { return scalar(desc, 1.0); }

AlgebraElement AlgebraElement::scalar(const AlgebraDescriptor& desc, cplx c) {
  std::vector<CMatrix> b;
  for (int n : desc.block_dims()) b.push_back(c * CMatrix::Identity(n, n));
  return {desc, std::move(b)};
}

AlgebraElement AlgebraElement::matrix_unit(const AlgebraDescriptor& desc, std::size_t block, int row, int col) {
  AlgebraElement e = zero(desc);
  e.blocks_.at(block)(row, col) = 1.0;
  return e;
}

std::vector<AlgebraElement> AlgebraElement::matrix_units(const AlgebraDescriptor& desc) {
  std::vector<AlgebraElement> out;
  out.reserve(desc.l2_dim());
  for (std::size_t b = 0; b < desc.block_count(); ++b)
    for (int c = 0; c < desc.dim(b); ++c)
      for (int r = 0; r < desc.dim(b); ++r) out.push_back(matrix_unit(desc, b, r, c));
  return out;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement out = *this;
  for (auto& b : out.blocks_) b = b.adjoint().eval();
  return out;
}

AlgebraElement AlgebraElement::inverse(double rel_cutoff) const {
  AlgebraElement out = *this;
  for (auto& b : out.blocks_) b = checked_inverse(b, rel_cutoff);
  return out;
}

double AlgebraElement::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, op_norm(b));
  return n;
}

double AlgebraElement::min_singular_value() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) s = std::min(s, qistate::min_singular_value(b));
  return s;
}

double AlgebraElement::hermiticity_residual() const {
  const double scale = norm();
  if (scale == 0.0) return 0.0;
  return distance(*this, adjoint()) / scale;
}

double AlgebraElement::min_eigenvalue(double tol_herm) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) m = std::min(m, herm_eig(b, tol_herm).values(0));
  return m;
}

double AlgebraElement::max_eigenvalue(double tol_herm) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) {
    const RVector v = herm_eig(b, tol_herm).values;
    m = std::max(m, v(v.size() - 1));
  }
  return m;
}

cplx AlgebraElement::block_trace_sum() const {
  cplx t = 0.0;
  for (const auto& b : blocks_) t += b.trace();
  return t;
}

CVector AlgebraElement::vectorize() const {
  CVector v(desc_.l2_dim());
  Eigen::Index k = 0;
  for (const auto& b : blocks_)
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      for (Eigen::Index r = 0; r < b.rows(); ++r) v(k++) = b(r, c);
  return v;
}

AlgebraElement AlgebraElement::unvectorize(const AlgebraDescriptor& desc, const CVector& v) {
  if (v.size() != desc.l2_dim()) throw InputError("unvectorize: length does not match the algebra");
  AlgebraElement out = zero(desc);
  Eigen::Index k = 0;
  for (auto& b : out.blocks_)
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = v(k++);
  return out;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same(desc_, o.desc_, "algebra element sum");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same(desc_, o.desc_, "algebra element difference");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.desc_, b.desc_, "algebra element product");
  AlgebraElement out = a;
  for (std::size_t i = 0; i < out.blocks_.size(); ++i) out.blocks_[i] = a.blocks_[i] * b.blocks_[i];
  return out;
}

AlgebraElement psd_sqrt(const AlgebraElement& a, const Tolerances& tol) {
  std::vector<CMatrix> b;
  for (const auto& m : a.blocks()) b.push_back(psd_sqrt(m, tol.pos, tol.herm));
  return {a.descriptor(), std::move(b)};
}

AlgebraElement imag_power(const AlgebraElement& a, cplx z, const Tolerances& tol) {
  std::vector<CMatrix> b;
  for (const auto& m : a.blocks()) b.push_back(imag_power(m, z, tol.pos, tol.herm));
  return {a.descriptor(), std::move(b)};
}

AlgebraElement hermitian_part(const AlgebraElement& a) { return 0.5 * (a + a.adjoint()); }

double distance(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).norm(); }

double commutator_norm(const AlgebraElement& a, const AlgebraElement& b) { return (a * b - b * a).norm(); }

State State::from_density(AlgebraElement density, const Tolerances& tol) {
  for (std::size_t i = 0; i < density.blocks().size(); ++i) {
    const CMatrix& b = density.block(i);
    const double res = hermiticity_residual(b);
    if (res > tol.herm) {
      std::ostringstream os;
      os << "state.density: block " << i << " is not Hermitian (relative residual " << res << ")";
      throw InputError(os.str());
    }
    const double m = herm_eig(b, tol.herm).values(0);
    if (m < -tol.pos) {
      std::ostringstream os;
      os << "state.density: block " << i << " is not positive semidefinite (min eigenvalue " << m << ")";
      throw InputError(os.str());
    }
  }
  const cplx tr = density.block_trace_sum();
  if (std::abs(tr - 1.0) > tol.eq) {
    std::ostringstream os;
    os << "state.density: total trace is " << tr.real() << (tr.imag() != 0.0 ? " (complex)" : "") << ", expected 1";
    throw InputError(os.str());
  }
  return State(hermitian_part(density));
}

cplx trace_pairing(const AlgebraElement& rho, const AlgebraElement& a) {
  require_same(rho.descriptor(), a.descriptor(), "trace pairing");
  cplx s = 0.0;
  for (std::size_t i = 0; i < rho.blocks().size(); ++i) s += (rho.block(i) * a.block(i)).trace();
  return s;
}

cplx evaluate(const State& phi, const AlgebraElement& a) { return trace_pairing(phi.density(), a); }

FaithfulnessReport is_faithful(const State& phi, double tol_pos) {
  FaithfulnessReport r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& b : phi.density().blocks()) {
    const double m = herm_eig(b, 1e-8).values(0);
    r.block_min_eigenvalues.push_back(m);
    r.min_eigenvalue = std::min(r.min_eigenvalue, m);
  }
  r.faithful = r.min_eigenvalue > tol_pos;
  return r;
}

void require_faithful(const State& phi, const Tolerances& tol, const char* what) {
  const FaithfulnessReport r = is_faithful(phi, tol.pos);
  if (!r.faithful) {
    std::ostringstream os;
    os << what << ": state is not faithful (min eigenvalue " << r.min_eigenvalue << ")";
    throw PreconditionError(os.str());
  }
}

const char* to_string(SupportRelation r) {
  switch (r) {
    case SupportRelation::equivalent: return "equivalent";
    case SupportRelation::first_dominated: return "first_dominated";
    case SupportRelation::second_dominated: return "second_dominated";
    case SupportRelation::incomparable: return "incomparable";
  }
  return "unknown";
}

AlgebraElement support_projection(const AlgebraElement& rho, const Tolerances& tol) {
  std::vector<CMatrix> b;
  for (const auto& m : rho.blocks()) {
    const HermEig eig = herm_eig(m, tol.herm);
    b.push_back(spectral_apply(eig, [&](double l) { return cplx(l > tol.pos ? 1.0 : 0.0, 0.0); }));
  }
  return {rho.descriptor(), std::move(b)};
}

SupportRelation support_comparison(const State& phi, const State& psi, const Tolerances& tol) {
  require_same(phi.descriptor(), psi.descriptor(), "support_comparison");
  const AlgebraElement p = support_projection(phi.density(), tol);
  const AlgebraElement q = support_projection(psi.density(), tol);
  // p <= q iff qp = p for projections.
  const double cut = 1e-8;
  const bool p_le_q = distance(q * p, p) < cut;
  const bool q_le_p = distance(p * q, q) < cut;
  if (p_le_q && q_le_p) return SupportRelation::equivalent;
  if (p_le_q) return SupportRelation::first_dominated;
  if (q_le_p) return SupportRelation::second_dominated;
  return SupportRelation::incomparable;
}

AlgebraElement modular_flow(const State& phi, const AlgebraElement& a, cplx z, const Tolerances& tol) {
  require_same(phi.descriptor(), a.descriptor(), "modular_flow");
  require_faithful(phi, tol, "modular_flow");
  const AlgebraElement left = imag_power(phi.density(), z, tol);
  const AlgebraElement right = imag_power(phi.density(), -z, tol);
  return left * a * right;
}

L2Vector::L2Vector(AlgebraDescriptor desc, std::vector<CMatrix> blocks) {
  AlgebraElement checked(std::move(desc), std::move(blocks));
  desc_ = checked.descriptor();
  blocks_ = checked.blocks();
}

L2Vector::L2Vector(const AlgebraElement& as_matrices)
    : desc_(as_matrices.descriptor()), blocks_(as_matrices.blocks()) {}

L2Vector L2Vector::unvectorize(const AlgebraDescriptor& desc, const CVector& v) {
  return L2Vector(AlgebraElement::unvectorize(desc, v));
}

cplx l2_inner(const L2Vector& xi, const L2Vector& eta) {
  require_same(xi.descriptor(), eta.descriptor(), "l2_inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < xi.blocks().size(); ++i) s += (xi.block(i).adjoint() * eta.block(i)).trace();
  return s;
}

double l2_norm(const L2Vector& xi) { return std::sqrt(std::max(0.0, l2_inner(xi, xi).real())); }

L2Vector gns_embed(const State& phi, const AlgebraElement& x, const Tolerances& tol) {
  require_same(phi.descriptor(), x.descriptor(), "gns_embed");
  require_faithful(phi, tol, "gns_embed");
  return L2Vector(x * psd_sqrt(phi.density(), tol));
}

std::vector<AlgebraElement> center_basis(const AlgebraDescriptor& desc) {
  std::vector<AlgebraElement> out;
  for (std::size_t j = 0; j < desc.block_count(); ++j) {
    AlgebraElement z = AlgebraElement::zero(desc);
    z.block(j) = CMatrix::Identity(desc.dim(j), desc.dim(j));
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace qistate
