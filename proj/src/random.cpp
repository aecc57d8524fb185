#include "qistate/random.hpp"

#include <cmath>

namespace qistate {

CMatrix random_ginibre(int n, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(r, c) = cplx(re, im);
    }
  return m;
}

CMatrix random_hermitian(int n, Rng& rng) {
  const CMatrix g = random_ginibre(n, rng);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_unitary(int n, Rng& rng) {
  const CMatrix g = random_ginibre(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

CMatrix random_psd(int n, int rank, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix b(n, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = nd(rng);
      const double im = nd(rng);
      b(r, c) = cplx(re, im);
    }
  return b * b.adjoint();
}

AlgebraElement random_element(const AlgebraDescriptor& desc, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int n : desc.block_dims()) blocks.push_back(random_ginibre(n, rng));
  return {desc, std::move(blocks)};
}

AlgebraElement random_hermitian_element(const AlgebraDescriptor& desc, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int n : desc.block_dims()) blocks.push_back(random_hermitian(n, rng));
  return {desc, std::move(blocks)};
}

AlgebraElement random_psd_element(const AlgebraDescriptor& desc, Rng& rng, bool rank_one) {
  std::vector<CMatrix> blocks;
  for (int n : desc.block_dims()) blocks.push_back(random_psd(n, rank_one ? 1 : n, rng));
  return {desc, std::move(blocks)};
}

AlgebraElement random_density(const AlgebraDescriptor& desc, Rng& rng, double floor) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::vector<CMatrix> blocks;
  double total = 0.0;
  for (int n : desc.block_dims()) {
    const CMatrix u = random_unitary(n, rng);
    RVector ev(n);
    for (int j = 0; j < n; ++j) {
      ev(j) = floor + ud(rng);
      total += ev(j);
    }
    blocks.push_back(u * ev.cast<cplx>().asDiagonal() * u.adjoint());
  }
  for (auto& b : blocks) {
    b /= total;
    b = (0.5 * (b + b.adjoint())).eval();
  }
  return {desc, std::move(blocks)};
}

}  // namespace qistate
