// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used only by the tests. None of these
// call into the library routines they are used to check.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hbf/rng.hpp"
#include "hbf/types.hpp"

namespace hbf::oracle {

/// Naive double-loop DFT of delay taps, entry by entry.
inline MatrixStack naive_dft(const MatrixStack& taps, int n_sub) {
  const auto rows = taps.front().rows();
  const auto cols = taps.front().cols();
  MatrixStack out(n_sub, CMatrix::Zero(rows, cols));
  for (int k = 0; k < n_sub; ++k) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        Complex acc = 0.0;
        for (std::size_t d = 0; d < taps.size(); ++d) {
          const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(d) / n_sub;
          acc += taps[d](r, c) * Complex(std::cos(ang), std::sin(ang));
        }
        out[k](r, c) = acc;
      }
    }
  }
  return out;
}

/// Water level by bisection on the budget equation.
inline double bisection_water_level(const std::vector<double>& gains, double n_streams,
                                    double budget) {
  auto used = [&](double mu) {
    double s = 0.0;
    for (const double g : gains) {
      if (g > 0.0) s += std::max(mu - n_streams / (g * g), 0.0);
    }
    return s;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (used(hi) < budget) hi *= 2.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (used(mid) < budget ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline CMatrix random_complex(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal(1.0);
  return m;
}

/// Orthonormal basis of the column space of a Gaussian matrix (QR).
inline CMatrix random_orthonormal(int rows, int cols, Rng& rng) {
  const CMatrix g = random_complex(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(rows, cols);
}

/// Random matrix with entries of modulus 1/sqrt(rows).
inline CMatrix random_constant_modulus(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  const double s = 1.0 / std::sqrt(static_cast<double>(rows));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::polar(s, rng.uniform(0.0, 2.0 * kPi));
  return m;
}

/// Orthonormal basis of span(m) via Gram-Schmidt.
inline CMatrix orthonormalize(const CMatrix& m) {
  CMatrix q = m;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    q.col(j) /= q.col(j).norm();
  }
  return q;
}

/// sum_k ||blocks[k]^H q||_F^2 for orthonormal q.
inline double projection_objective(const MatrixStack& blocks, const CMatrix& q) {
  double s = 0.0;
  for (const auto& b : blocks) s += (b.adjoint() * q).squaredNorm();
  return s;
}

inline double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Exact bit-error probability of Gray 16-QAM (unit average energy) in
/// complex AWGN with per-symbol SNR es_n0.
inline double qam16_awgn_ber(double es_n0) {
  // half the minimum distance over the per-dimension noise std
  const double x = std::sqrt(es_n0 / 10.0) * std::sqrt(2.0);
  return (3.0 * qfunc(x) + 2.0 * qfunc(3.0 * x) - qfunc(5.0 * x)) / 4.0;
}

/// Sine of the largest principal angle between the column spans of a and b
/// (equal dimension), from the residual of projecting one basis on the other.
inline double max_principal_angle_sin(const CMatrix& a, const CMatrix& b) {
  const CMatrix qa = orthonormalize(a);
  const CMatrix qb = orthonormalize(b);
  const CMatrix residual = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<CMatrix> svd(residual);
  return svd.singularValues()(0);
}

}  // namespace hbf::oracle
