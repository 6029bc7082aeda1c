// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hbf/types.hpp"

namespace hbf {

/// Thin SVD, singular values descending.
struct Svd {
  CMatrix u;
  RVector s;
  CMatrix v;
};

/// Throws NumericalError on non-finite input or solver failure.
Svd thin_svd(const CMatrix& m);

/// First n left singular vectors of m.
CMatrix principal_left_basis(const CMatrix& m, int n);

/// Principal (Hermitian PSD) square root. Negative eigenvalues from rounding
/// are clamped to zero.
CMatrix hermitian_sqrt(const CMatrix& m);

/// (m)^{-1/2} for Hermitian positive definite m. Eigenvalues below
/// rel_floor * largest eigenvalue raise NumericalError.
CMatrix hermitian_inv_sqrt(const CMatrix& m, double rel_floor = 1e-12);

/// Phase of z with the convention angle(0) = 0.
double phase_of(Complex z);

/// Entry-wise exp(j * angle(m_ij)) / sqrt(rows): the nearest constant-modulus
/// matrix to m in Frobenius norm.
CMatrix constant_modulus_projection(const CMatrix& m);

/// log2 det(I + m) for Hermitian PSD m.
double log2_det_identity_plus(const CMatrix& m);

bool all_finite(const CMatrix& m);

/// Horizontal concatenation [m_0 m_1 ... m_{K-1}].
CMatrix hconcat(const MatrixStack& blocks);

}  // namespace hbf
