#pragma once

// *-automorphisms of block algebras and finite groups of them.
//
// An automorphism is a dimension-preserving block permutation pi together with
// one unitary per block, acting as g(a)_i = u_i a_{pi^{-1}(i)} u_i^*.
// `perm[j]` stores pi(j): block j of the argument lands in block pi(j).

#include <cstddef>
#include <span>
#include <vector>

#include "qistate/algebra.hpp"

namespace qistate {

class Automorphism {
 public:
  Automorphism() = default;
  /// Validates the permutation (bijective, dimension preserving) and that
  /// every u_i is unitary within `unitary_tol`.
  Automorphism(AlgebraDescriptor desc, std::vector<int> perm, std::vector<CMatrix> unitaries,
               double unitary_tol = 1e-9);

  static Automorphism identity(const AlgebraDescriptor& desc);
  /// Ad(u) with trivial block permutation.
  static Automorphism inner(const AlgebraDescriptor& desc, std::vector<CMatrix> unitaries);

  const AlgebraDescriptor& descriptor() const { return desc_; }
  const std::vector<int>& perm() const { return perm_; }
  const std::vector<CMatrix>& unitaries() const { return unitaries_; }
  int perm_inverse(int i) const;

 private:
  AlgebraDescriptor desc_;
  std::vector<int> perm_;
  std::vector<CMatrix> unitaries_;
};

AlgebraElement apply(const Automorphism& g, const AlgebraElement& a);

/// g o h, i.e. apply(compose(g, h), a) == apply(g, apply(h, a)).
Automorphism compose(const Automorphism& g, const Automorphism& h);
Automorphism inverse(const Automorphism& g);

/// True iff g and h agree on every matrix unit within `tol`.
bool equal_as_maps(const Automorphism& g, const Automorphism& h, double tol = 1e-9);

/// Predual (transpose) action on densities: tr(predual(g, rho) a) = tr(rho g(a)).
AlgebraElement predual(const Automorphism& g, const AlgebraElement& rho);

/// The matrix of a -> g(a) in the vectorized layout of AlgebraElement.
CMatrix action_matrix(const Automorphism& g);

/// A finite group of automorphisms with its Cayley table.
///
/// Element 0 is the identity; product(i, j) is the index of
/// element(i) o element(j).
class FiniteGroup {
 public:
  FiniteGroup(std::vector<Automorphism> elements, std::vector<std::vector<int>> mult, std::vector<int> inverse);

  std::size_t size() const { return elements_.size(); }
  const AlgebraDescriptor& descriptor() const { return elements_.front().descriptor(); }
  const Automorphism& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Automorphism>& elements() const { return elements_; }
  int product(std::size_t i, std::size_t j) const { return mult_[i][j]; }
  int inverse_of(std::size_t i) const { return inverse_[i]; }
  const std::vector<std::vector<int>>& mult_table() const { return mult_; }

 private:
  std::vector<Automorphism> elements_;
  std::vector<std::vector<int>> mult_;
  std::vector<int> inverse_;
};

inline constexpr std::size_t default_closure_cap = 10000;

/// Breadth-first closure of `generators` under composition, deduplicating
/// with equal_as_maps. Throws PreconditionError ("group not finite at cap")
/// when more than `cap` distinct elements appear.
FiniteGroup close_group(std::span<const Automorphism> generators, std::size_t cap = default_closure_cap,
                        double tol = 1e-9);

/// Index of the group element equal to g as a map, or -1.
int find_element(const FiniteGroup& group, const Automorphism& g, double tol = 1e-9);

}  // namespace qistate
