#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "modinv/modinv.hpp"
#include "oracle.hpp"

namespace testutil {

inline modinv::MatI to_eigen(const oracle::Mat& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  modinv::MatI out = modinv::MatI::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

inline oracle::Mat from_eigen(const modinv::MatI& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()),
                  std::vector<int>(static_cast<std::size_t>(m.cols()), 0));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          m(i, j);
    }
  }
  return out;
}

// Three abelian sectors with a conjugate pair, the smallest data whose
// charge conjugation is not the identity.
inline modinv::ModularData abelian_three() {
  using modinv::cplx;
  modinv::ModularData md;
  md.labels = {"0", "q", "qbar"};
  md.c = 2.0;
  md.h = {0.0, 1.0 / 3.0, 1.0 / 3.0};
  const cplx w = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 3.0));
  const double s = 1.0 / std::sqrt(3.0);
  md.S = modinv::MatC(3, 3);
  md.S << s, s, s, s, s * w, s * w * w, s, s * w * w, s * w;
  md.t = modinv::t_diagonal_from_weights(md.h, md.c);
  return md;
}

}  // namespace testutil
