// SPDX-License-Identifier: Apache-2.0
#include "hexwave/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hexwave/error.hpp"

namespace hexwave {

namespace {

lapack_complex_double* as_lapack(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

HermitianEigenpairs hermitian_eigen_lowest(const CMatrix& h, int count) {
  const auto n = static_cast<lapack_int>(h.rows());
  if (h.cols() != h.rows()) throw InvalidArgument("hermitian_eigen_lowest: matrix not square");
  if (count < 1 || count > n) throw InvalidArgument("hermitian_eigen_lowest: count out of range");

  CMatrix a = h;
  HermitianEigenpairs out;
  out.values.resize(n);
  out.vectors.resize(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, as_lapack(a.data()), n, 0.0,
                                         0.0, 1, count, 0.0, &found, out.values.data(),
                                         as_lapack(out.vectors.data()), n, support.data());
  if (info != 0 || found != count)
    throw Error("zheevr failed (info=" + std::to_string(info) + ", found=" + std::to_string(found) + ")");
  out.values.conservativeResize(count);
  return out;
}

HermitianEigenpairs banded_hermitian_eigen(const CMatrix& band, int first, int last) {
  const auto n = static_cast<lapack_int>(band.cols());
  const auto kd = static_cast<lapack_int>(band.rows() - 1);
  if (first < 0 || last < first || last >= n) throw InvalidArgument("banded_hermitian_eigen: bad index range");

  // Eigenvalues by bisection on the tridiagonalized band matrix; the n x n
  // reduction unitary is never formed.
  CMatrix ab = band;
  const lapack_int count = last - first + 1;
  Eigen::VectorXd w(n);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  cplx q_dummy;
  cplx z_dummy;
  lapack_int info = LAPACKE_zhbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, as_lapack(ab.data()), kd + 1,
                                   as_lapack(&q_dummy), 1, 0.0, 0.0, first + 1, last + 1, abstol, &found,
                                   w.data(), as_lapack(&z_dummy), 1, ifail.data());
  if (info != 0 || found != count)
    throw Error("zhbevx failed (info=" + std::to_string(info) + ", found=" + std::to_string(found) + ")");

  HermitianEigenpairs out;
  out.values = w.head(count);
  out.vectors.resize(n, count);

  // Eigenvectors by shifted inverse iteration on the general band LU.
  // Storage for zgbtrf: kl = ku = kd, leading dimension 3kd + 1.
  const lapack_int ldab = 3 * kd + 1;
  double scale = 0.0;
  for (lapack_int j = 0; j < n; ++j) scale = std::max(scale, std::abs(band(0, j)));
  for (lapack_int d = 1; d <= kd; ++d)
    for (lapack_int j = 0; j + d < n; ++j) scale = std::max(scale, std::abs(band(d, j)));
  scale = std::max(scale, 1.0);

  for (lapack_int e = 0; e < count; ++e) {
    const double mu = out.values(e);
    const double shift = mu + 1e-13 * scale;
    CMatrix lu = CMatrix::Zero(ldab, n);
    for (lapack_int j = 0; j < n; ++j) {
      for (lapack_int d = 0; d <= kd && j + d < n; ++d) {
        const cplx h = band(d, j);  // H(j + d, j)
        // General band layout: A(i, j) -> lu(2kd + i - j, j).
        lu(2 * kd + d, j) = h - (d == 0 ? cplx(shift) : cplx(0.0));
        if (d > 0) lu(2 * kd - d, j + d) = std::conj(h);  // H(j, j + d)
      }
    }
    std::vector<lapack_int> piv(static_cast<std::size_t>(n));
    info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, as_lapack(lu.data()), ldab, piv.data());
    if (info < 0) throw Error("zgbtrf failed (info=" + std::to_string(info) + ")");

    CVector x(n);
    for (lapack_int i = 0; i < n; ++i) x(i) = cplx(1.0 + 0.5 * std::sin(0.7 * i + e), 0.3 * std::cos(1.3 * i));
    for (int it = 0; it < 4; ++it) {
      // Keep clustered vectors apart.
      for (lapack_int p = 0; p < e; ++p)
        if (std::abs(out.values(p) - mu) < 1e-8 * scale) x -= out.vectors.col(p) * out.vectors.col(p).dot(x);
      info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, kd, kd, 1, as_lapack(lu.data()), ldab, piv.data(),
                            as_lapack(x.data()), n);
      if (info != 0) throw Error("zgbtrs failed (info=" + std::to_string(info) + ")");
      x /= x.norm();
    }
    for (lapack_int p = 0; p < e; ++p)
      if (std::abs(out.values(p) - mu) < 1e-8 * scale) x -= out.vectors.col(p) * out.vectors.col(p).dot(x);
    x /= x.norm();
    out.vectors.col(e) = x;
  }
  return out;
}

double hermitian_defect(const CMatrix& h) { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace hexwave
