#include "qistate/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qistate {

bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

void require_square_finite(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw InputError(os.str());
  }
  if (!all_finite(a)) throw InputError(std::string(what) + ": non-finite entry");
}

double op_norm(const CMatrix& a) {
  require_square_finite(a, "op_norm");
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double hermiticity_residual(const CMatrix& a) {
  const double scale = op_norm(a);
  if (scale == 0.0) return 0.0;
  return op_norm(a - a.adjoint()) / scale;
}

HermEig herm_eig(const CMatrix& a, double tol_herm) {
  require_square_finite(a, "herm_eig");
  const double res = hermiticity_residual(a);
  if (res > tol_herm) {
    std::ostringstream os;
    os << "herm_eig: matrix is not Hermitian (Hermiticity residual " << res << " > " << tol_herm << ")";
    throw PreconditionError(os.str());
  }
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) throw ConsistencyError("herm_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix psd_sqrt(const CMatrix& a, double tol_pos, double tol_herm) {
  const HermEig eig = herm_eig(a, tol_herm);
  if (eig.values.size() > 0 && eig.values(0) < -tol_pos) {
    std::ostringstream os;
    os << "psd_sqrt: not positive semidefinite (min eigenvalue " << eig.values(0) << ")";
    throw PreconditionError(os.str());
  }
  return spectral_apply(eig, [](double l) { return cplx(std::sqrt(std::max(l, 0.0)), 0.0); });
}

CMatrix imag_power(const CMatrix& a, cplx z, double tol_pos, double tol_herm) {
  const HermEig eig = herm_eig(a, tol_herm);
  if (eig.values.size() > 0 && eig.values(0) <= tol_pos) {
    std::ostringstream os;
    os << "imag_power: not positive definite (min eigenvalue " << eig.values(0) << ")";
    throw PreconditionError(os.str());
  }
  const cplx iz = cplx(0.0, 1.0) * z;
  return spectral_apply(eig, [iz](double l) { return std::exp(iz * std::log(l)); });
}

CMatrix checked_inverse(const CMatrix& a, double rel_cutoff) {
  require_square_finite(a, "inverse");
  const double smin = min_singular_value(a);
  const double scale = op_norm(a);
  if (a.size() == 0 || smin <= rel_cutoff * scale) {
    std::ostringstream os;
    os << "inverse: matrix is numerically singular (min singular value " << smin << ", norm " << scale << ")";
    throw PreconditionError(os.str());
  }
  return a.fullPivLu().inverse();
}

CMatrix nullspace(const CMatrix& a, double rel_cutoff) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cutoff = rel_cutoff * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

CMatrix range_basis(const CMatrix& a, double rel_cutoff) {
  if (a.cols() == 0) return CMatrix(a.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  const double cutoff = rel_cutoff * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace qistate
