#pragma once

// Dense complex matrix primitives shared by every other module.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qistate {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Numerical thresholds used across the library.
///
/// `herm` is relative to the operand norm, `pos` is absolute on eigenvalues
/// (and relative on singular values where noted), `eq` is the pass threshold
/// for identity residuals, relative to the operand scale.
struct Tolerances {
  double herm = 1e-10;
  double pos = 1e-10;
  double eq = 1e-9;
};

/// Malformed input data (shape mismatch, non-finite entries, bad files).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Mathematical precondition of an operation does not hold
/// (non-faithful state, non-Hermitian operand, singular element...).
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// An internal identity that must hold by construction failed to.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

bool all_finite(const CMatrix& a);

/// Throws InputError unless `a` is square with finite entries.
void require_square_finite(const CMatrix& a, const char* what);

/// Largest singular value.
double op_norm(const CMatrix& a);

double min_singular_value(const CMatrix& a);

/// ||a - a*|| / ||a|| (0 for the zero matrix).
double hermiticity_residual(const CMatrix& a);

struct HermEig {
  RVector values;   // ascending
  CMatrix vectors;  // columns are eigenvectors, unitary
};

/// Eigendecomposition a = V diag(values) V*. Throws PreconditionError when the
/// relative Hermiticity residual exceeds `tol_herm`.
HermEig herm_eig(const CMatrix& a, double tol_herm = 1e-10);

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-tol_pos, 0) are clipped to zero; anything below -tol_pos throws.
CMatrix psd_sqrt(const CMatrix& a, double tol_pos = 1e-10, double tol_herm = 1e-10);

/// a^{iz} for positive definite a, i.e. V diag(exp(iz ln lambda)) V*.
CMatrix imag_power(const CMatrix& a, cplx z, double tol_pos = 1e-10, double tol_herm = 1e-10);

/// Applies a real function to the spectrum of a Hermitian matrix.
template <class F>
CMatrix spectral_apply(const HermEig& eig, F&& f) {
  CVector mapped(eig.values.size());
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) mapped(j) = f(eig.values(j));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

/// Inverse via full-pivot LU; throws PreconditionError when the smallest
/// singular value is at or below `rel_cutoff * ||a||`.
CMatrix checked_inverse(const CMatrix& a, double rel_cutoff);

/// Orthonormal basis (columns) of ker(a), using singular values
/// <= rel_cutoff * max(1, sigma_max) as zero.
CMatrix nullspace(const CMatrix& a, double rel_cutoff);

/// Orthonormal basis (columns) of ran(a), same cutoff convention.
CMatrix range_basis(const CMatrix& a, double rel_cutoff);

}  // namespace qistate
