// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "hbf/combiner.hpp"
#include "hbf/config.hpp"
#include "hbf/precoder.hpp"
#include "hbf/types.hpp"

namespace hbf {

/// Candidate RF beams, one unit-norm constant-modulus column per atom.
struct Dictionary {
  CMatrix atoms;                                 // N x G
  std::vector<std::pair<double, double>> labels; // (azimuth, elevation) or DFT (h, v) indices

  int size() const { return static_cast<int>(atoms.cols()); }
};

/// Steering vectors on the midpoint grid
///   -pi/2 + (i + 1/2) pi / grid, i = 0 .. grid-1
/// over azimuth x elevation; atom index = i_az * grid_el + i_el.
Dictionary build_steering_dictionary(const ArrayGeometry& geometry, int grid_az, int grid_el);

/// Kronecker product of the N_h-point and N_v-point unitary DFT bases.
Dictionary dft_codebook(const ArrayGeometry& geometry);

struct SparseSelection {
  CMatrix rf;                          // selected atoms, N x n_select
  MatrixStack coefficients;            // LS coefficients per subcarrier
  std::vector<int> selected;           // atom indices in pick order
  std::vector<double> residual_norms;  // total residual Frobenius norm after each pick
};

/// Simultaneous OMP: each iteration picks the unused atom maximizing
/// sum_k ||a^H R_k||^2, then refits all targets by least squares onto the
/// atoms picked so far.
SparseSelection somp_select(const MatrixStack& targets, const Dictionary& dictionary,
                            int n_select);

/// Same greedy loop over the DFT codebook of `geometry`.
SparseSelection dft_codebook_select(const MatrixStack& targets, const ArrayGeometry& geometry,
                                    int n_select);

/// Uses the LS coefficients as baseband precoders, scaled by one common
/// factor so the total transmit power is K * N_s.
HybridPrecoder precoder_from_selection(const SparseSelection& selection, int n_streams);

}  // namespace hbf
