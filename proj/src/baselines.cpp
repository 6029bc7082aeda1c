// SPDX-License-Identifier: Apache-2.0

#include "hbf/baselines.hpp"

#include <cmath>

#include "hbf/channel.hpp"

namespace hbf {

Dictionary build_steering_dictionary(const ArrayGeometry& geometry, int grid_az, int grid_el) {
  if (grid_az < 1 || grid_el < 1) throw ConfigError("steering dictionary: grid sizes must be >= 1");
  Dictionary d;
  d.atoms.resize(geometry.size(), static_cast<Eigen::Index>(grid_az) * grid_el);
  for (int a = 0; a < grid_az; ++a) {
    const double az = -kPi / 2.0 + (a + 0.5) * kPi / grid_az;
    for (int e = 0; e < grid_el; ++e) {
      const double el = -kPi / 2.0 + (e + 0.5) * kPi / grid_el;
      d.atoms.col(a * grid_el + e) = steering_vector(az, el, geometry);
      d.labels.emplace_back(az, el);
    }
  }
  return d;
}

namespace {

CMatrix unitary_dft(int n) {
  CMatrix m(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = std::polar(scale, -2.0 * kPi * ((r * c) % n) / n);
    }
  }
  return m;
}

}  // namespace

Dictionary dft_codebook(const ArrayGeometry& geometry) {
  const int nh = geometry.n_horizontal;
  const int nv = geometry.n_vertical;
  const CMatrix dh = unitary_dft(nh);
  const CMatrix dv = unitary_dft(nv);
  Dictionary d;
  d.atoms.resize(nh * nv, nh * nv);
  for (int a = 0; a < nh; ++a) {
    for (int b = 0; b < nv; ++b) {
      for (int m = 0; m < nh; ++m) {
        for (int n = 0; n < nv; ++n) d.atoms(m * nv + n, a * nv + b) = dh(m, a) * dv(n, b);
      }
      d.labels.emplace_back(a, b);
    }
  }
  return d;
}

SparseSelection somp_select(const MatrixStack& targets, const Dictionary& dictionary,
                            int n_select) {
  if (targets.empty()) throw ConfigError("somp_select: no targets");
  if (n_select < 1) throw ConfigError("somp_select: n_select must be >= 1");
  if (n_select > dictionary.size()) {
    throw ConfigError("somp_select: dictionary exhausted (" + std::to_string(dictionary.size()) +
                      " atoms, " + std::to_string(n_select) + " requested)");
  }
  const auto& atoms = dictionary.atoms;
  MatrixStack residual = targets;
  std::vector<bool> used(dictionary.size(), false);

  SparseSelection out;
  out.rf.resize(atoms.rows(), 0);
  for (int it = 0; it < n_select; ++it) {
    RVector score = RVector::Zero(dictionary.size());
    for (const auto& r : residual) score += (atoms.adjoint() * r).rowwise().squaredNorm();
    int best = -1;
    for (int g = 0; g < dictionary.size(); ++g) {
      if (used[g]) continue;
      if (best < 0 || score(g) > score(best)) best = g;
    }
    used[best] = true;
    out.selected.push_back(best);
    out.rf.conservativeResize(Eigen::NoChange, it + 1);
    out.rf.col(it) = atoms.col(best);

    const auto qr = out.rf.colPivHouseholderQr();
    out.coefficients.clear();
    double norm2 = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      CMatrix coeff = qr.solve(targets[k]);
      residual[k] = targets[k] - out.rf * coeff;
      norm2 += residual[k].squaredNorm();
      out.coefficients.push_back(std::move(coeff));
    }
    out.residual_norms.push_back(std::sqrt(norm2));
  }
  return out;
}

SparseSelection dft_codebook_select(const MatrixStack& targets, const ArrayGeometry& geometry,
                                    int n_select) {
  if (n_select > geometry.size()) {
    throw ConfigError("dft_codebook_select: n_select exceeds the number of antennas");
  }
  return somp_select(targets, dft_codebook(geometry), n_select);
}

HybridPrecoder precoder_from_selection(const SparseSelection& selection, int n_streams) {
  const int n_sub = static_cast<int>(selection.coefficients.size());
  double power = 0.0;
  for (const auto& c : selection.coefficients) power += (selection.rf * c).squaredNorm();
  if (!(power > 0.0)) throw NumericalError("precoder_from_selection: zero baseband power");
  const double scale = std::sqrt(static_cast<double>(n_sub) * n_streams / power);

  HybridPrecoder out;
  out.rf = selection.rf;
  out.allocations.resize(n_sub, n_streams);
  for (int k = 0; k < n_sub; ++k) {
    out.baseband.push_back(scale * selection.coefficients[k]);
    out.allocations.row(k) = (selection.rf * out.baseband.back()).colwise().squaredNorm();
  }
  return out;
}

}  // namespace hbf
