#pragma once

// Seeded random matrices used for probe sets and test instances.

#include <random>

#include "qistate/algebra.hpp"

namespace qistate {

using Rng = std::mt19937_64;

/// Complex Ginibre matrix (i.i.d. standard normal real and imaginary parts).
CMatrix random_ginibre(int n, Rng& rng);
CMatrix random_hermitian(int n, Rng& rng);
/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
CMatrix random_unitary(int n, Rng& rng);
/// Random PSD matrix of the given rank (rank <= n).
CMatrix random_psd(int n, int rank, Rng& rng);

AlgebraElement random_element(const AlgebraDescriptor& desc, Rng& rng);
AlgebraElement random_hermitian_element(const AlgebraDescriptor& desc, Rng& rng);
/// Random PSD element; each block has full rank unless `rank_one` is set.
AlgebraElement random_psd_element(const AlgebraDescriptor& desc, Rng& rng, bool rank_one = false);
/// Random faithful density: full rank blocks, eigenvalues bounded below by
/// `floor` before normalization.
AlgebraElement random_density(const AlgebraDescriptor& desc, Rng& rng, double floor = 0.05);

}  // namespace qistate
