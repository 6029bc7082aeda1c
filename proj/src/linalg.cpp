// SPDX-License-Identifier: Apache-2.0

#include "hbf/linalg.hpp"

#include <cmath>

namespace hbf {

bool all_finite(const CMatrix& m) { return m.allFinite(); }

Svd thin_svd(const CMatrix& m) {
  if (!all_finite(m)) throw NumericalError("svd: input contains non-finite entries");
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("svd: solver did not converge");
  Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (!all_finite(out.u) || !all_finite(out.v) || !out.s.allFinite()) {
    throw NumericalError("svd: non-finite factors");
  }
  return out;
}

CMatrix principal_left_basis(const CMatrix& m, int n) {
  if (n < 1 || n > std::min(m.rows(), m.cols())) {
    throw NumericalError("principal_left_basis: requested " + std::to_string(n) +
                         " vectors from a " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " matrix");
  }
  return thin_svd(m).u.leftCols(n);
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eig(const CMatrix& m) {
  if (!all_finite(m)) throw NumericalError("eigendecomposition: non-finite input");
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition did not converge");
  return eig;
}

}  // namespace

CMatrix hermitian_sqrt(const CMatrix& m) {
  const auto eig = hermitian_eig(m);
  const RVector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

CMatrix hermitian_inv_sqrt(const CMatrix& m, double rel_floor) {
  const auto eig = hermitian_eig(m);
  const RVector& lambda = eig.eigenvalues();  // ascending
  const double largest = lambda(lambda.size() - 1);
  if (!(largest > 0.0) || lambda(0) < rel_floor * largest) {
    throw NumericalError("matrix is rank deficient (smallest eigenvalue " +
                         std::to_string(lambda(0)) + ", largest " + std::to_string(largest) + ")");
  }
  const RVector inv_roots = lambda.cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_roots.cast<Complex>().asDiagonal() *
         eig.eigenvectors().adjoint();
}

double phase_of(Complex z) { return z == Complex(0.0, 0.0) ? 0.0 : std::arg(z); }

CMatrix constant_modulus_projection(const CMatrix& m) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(m.rows()));
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = std::polar(scale, phase_of(m(i, j)));
  }
  return out;
}

double log2_det_identity_plus(const CMatrix& m) {
  const CMatrix a = CMatrix::Identity(m.rows(), m.cols()) + 0.5 * (m + m.adjoint());
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("log det: matrix not positive definite");
  const auto d = llt.matrixLLT().diagonal();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) acc += 2.0 * std::log2(d(i).real());
  return acc;
}

CMatrix hconcat(const MatrixStack& blocks) {
  if (blocks.empty()) return {};
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  CMatrix out(blocks.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

}  // namespace hbf
