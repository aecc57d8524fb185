#pragma once

#include <cmath>

#include "qistate/actions.hpp"
#include "qistate/algebra.hpp"

namespace qistate::fixtures {

inline CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}
inline CMatrix pauli_x() { return mat2(0, 1, 1, 0); }
inline CMatrix pauli_z() { return mat2(1, 0, 0, -1); }
inline CMatrix hadamard() { return mat2(1, 1, 1, -1) / std::sqrt(2.0); }

inline AlgebraElement diag2(double a, double b) { return AlgebraElement(AlgebraDescriptor({2}), {mat2(a, 0, 0, b)}); }

/// M_2, rho = diag(1/3, 2/3)
inline State qubit_state() { return State::from_density(diag2(1.0 / 3, 2.0 / 3)); }
inline Automorphism ad_x() { return Automorphism::inner(AlgebraDescriptor({2}), {pauli_x()}); }

/// C + C with p = (1/4, 3/4) and the coordinate swap
inline AlgebraDescriptor c2() { return AlgebraDescriptor({1, 1}); }
inline State c2_state() {
  return State::from_density(
      AlgebraElement(c2(), {CMatrix::Constant(1, 1, cplx(0.25, 0.0)), CMatrix::Constant(1, 1, cplx(0.75, 0.0))}));
}
inline Automorphism c2_swap() {
  return Automorphism(c2(), {1, 0}, {CMatrix::Identity(1, 1), CMatrix::Identity(1, 1)});
}

inline AlgebraElement c2_element(double a, double b) {
  return AlgebraElement(c2(), {CMatrix::Constant(1, 1, cplx(a, 0.0)), CMatrix::Constant(1, 1, cplx(b, 0.0))});
}

}  // namespace qistate::fixtures
