#pragma once

// Finite-dimensional von Neumann algebras M_{n_1} (+) ... (+) M_{n_k}: elements,
// normal states given by block density matrices, and the Hilbert-Schmidt
// standard form L2 with cyclic vector rho^{1/2}.

#include <cstddef>
#include <vector>

#include "qistate/matcore.hpp"

namespace qistate {

class AlgebraDescriptor {
 public:
  AlgebraDescriptor() = default;
  explicit AlgebraDescriptor(std::vector<int> block_dims);

  const std::vector<int>& block_dims() const { return dims_; }
  std::size_t block_count() const { return dims_.size(); }
  int dim(std::size_t block) const { return dims_[block]; }

  /// sum_i n_i^2, the dimension of the algebra and of L2.
  int l2_dim() const;
  /// Offset of block `i` in the vectorized (block-major, column-major) layout.
  int l2_offset(std::size_t block) const;

  friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;

 private:
  std::vector<int> dims_;
};

void require_same(const AlgebraDescriptor& a, const AlgebraDescriptor& b, const char* what);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(AlgebraDescriptor desc, std::vector<CMatrix> blocks);

  static AlgebraElement zero(const AlgebraDescriptor& desc);
  static AlgebraElement identity(const AlgebraDescriptor& desc);
  static AlgebraElement scalar(const AlgebraDescriptor& desc, cplx c);
  /// Matrix unit e_{row,col} in block `block`.
  static AlgebraElement matrix_unit(const AlgebraDescriptor& desc, std::size_t block, int row, int col);
  /// All matrix units, ordered consistently with vectorize().
  static std::vector<AlgebraElement> matrix_units(const AlgebraDescriptor& desc);

  const AlgebraDescriptor& descriptor() const { return desc_; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const CMatrix& block(std::size_t i) const { return blocks_[i]; }
  CMatrix& block(std::size_t i) { return blocks_[i]; }

  AlgebraElement adjoint() const;
  /// Blockwise inverse; throws PreconditionError if some block has
  /// min singular value <= rel_cutoff * ||block||.
  AlgebraElement inverse(double rel_cutoff) const;

  /// max_i ||a_i|| (operator norm of the direct sum).
  double norm() const;
  double min_singular_value() const;
  /// Relative Hermiticity residual of the direct sum.
  double hermiticity_residual() const;
  /// Smallest eigenvalue over all blocks (Hermitian elements only).
  double min_eigenvalue(double tol_herm = 1e-10) const;
  double max_eigenvalue(double tol_herm = 1e-10) const;
  cplx block_trace_sum() const;

  /// Stacks blocks in the block-major, column-major order of length l2_dim().
  CVector vectorize() const;
  static AlgebraElement unvectorize(const AlgebraDescriptor& desc, const CVector& v);

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, cplx c) { return a *= c; }
  friend AlgebraElement operator*(cplx c, AlgebraElement a) { return a *= c; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

 private:
  AlgebraDescriptor desc_;
  std::vector<CMatrix> blocks_;
};

/// Blockwise psd_sqrt / imag_power.
AlgebraElement psd_sqrt(const AlgebraElement& a, const Tolerances& tol = {});
AlgebraElement imag_power(const AlgebraElement& a, cplx z, const Tolerances& tol = {});
/// Blockwise Hermitian part (a + a*)/2.
AlgebraElement hermitian_part(const AlgebraElement& a);
/// max_i ||a_i - b_i||.
double distance(const AlgebraElement& a, const AlgebraElement& b);
/// max_i ||a_i b_i - b_i a_i||.
double commutator_norm(const AlgebraElement& a, const AlgebraElement& b);

/// A normal state, stored by its density rho: phi(a) = sum_i tr(rho_i a_i).
class State {
 public:
  /// Validates Hermiticity, positivity (min eigenvalue >= -tol.pos) and unit
  /// total trace (within tol.eq); throws InputError naming the failure.
  static State from_density(AlgebraElement density, const Tolerances& tol = {});

  const AlgebraDescriptor& descriptor() const { return density_.descriptor(); }
  const AlgebraElement& density() const { return density_; }

 private:
  explicit State(AlgebraElement density) : density_(std::move(density)) {}
  AlgebraElement density_;
};

cplx evaluate(const State& phi, const AlgebraElement& a);
/// tr-pairing sum_i tr(rho_i a_i) for an arbitrary density-like element.
cplx trace_pairing(const AlgebraElement& rho, const AlgebraElement& a);

struct FaithfulnessReport {
  bool faithful = false;
  double min_eigenvalue = 0.0;
  std::vector<double> block_min_eigenvalues;
};

FaithfulnessReport is_faithful(const State& phi, double tol_pos = 1e-10);

/// Throws PreconditionError unless phi is faithful.
void require_faithful(const State& phi, const Tolerances& tol, const char* what);

enum class SupportRelation { equivalent, first_dominated, second_dominated, incomparable };

const char* to_string(SupportRelation r);

/// Compares support projections: first_dominated means phi << psi.
SupportRelation support_comparison(const State& phi, const State& psi, const Tolerances& tol = {});

/// Spectral projection of a PSD element onto eigenvalues > tol_pos.
AlgebraElement support_projection(const AlgebraElement& rho, const Tolerances& tol = {});

/// sigma_z(a) = rho^{iz} a rho^{-iz}, blockwise. Requires phi faithful.
AlgebraElement modular_flow(const State& phi, const AlgebraElement& a, cplx z, const Tolerances& tol = {});

/// Element of the Hilbert-Schmidt space L2 (same block shapes as the algebra).
class L2Vector {
 public:
  L2Vector() = default;
  L2Vector(AlgebraDescriptor desc, std::vector<CMatrix> blocks);
  explicit L2Vector(const AlgebraElement& as_matrices);

  const AlgebraDescriptor& descriptor() const { return desc_; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const CMatrix& block(std::size_t i) const { return blocks_[i]; }

  AlgebraElement as_element() const { return AlgebraElement(desc_, blocks_); }
  CVector vectorize() const { return as_element().vectorize(); }
  static L2Vector unvectorize(const AlgebraDescriptor& desc, const CVector& v);

 private:
  AlgebraDescriptor desc_;
  std::vector<CMatrix> blocks_;
};

/// <xi, eta> = sum_i tr(xi_i^* eta_i).
cplx l2_inner(const L2Vector& xi, const L2Vector& eta);
double l2_norm(const L2Vector& xi);

/// x |-> x rho^{1/2}. Requires phi faithful.
L2Vector gns_embed(const State& phi, const AlgebraElement& x, const Tolerances& tol = {});

/// Minimal central projections z_1..z_k.
std::vector<AlgebraElement> center_basis(const AlgebraDescriptor& desc);

}  // namespace qistate
