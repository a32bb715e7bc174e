// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hexwave/types.hpp"

namespace hexwave {

struct HermitianEigenpairs {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // columns, unit 2-norm
};

// Lowest `count` eigenpairs of a dense Hermitian matrix (lower triangle is read).
HermitianEigenpairs hermitian_eigen_lowest(const CMatrix& h, int count);

// Eigenpairs with ascending-order positions [first, last] (0-based, inclusive)
// of a Hermitian band matrix given in LAPACK lower band storage: band(d, j) holds
// H(j + d, j) for d = 0..kd.
HermitianEigenpairs banded_hermitian_eigen(const CMatrix& band, int first, int last);

double hermitian_defect(const CMatrix& h);

}  // namespace hexwave
