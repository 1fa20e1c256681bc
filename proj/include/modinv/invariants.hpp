#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "modinv/modular_data.hpp"
#include "modinv/statistics.hpp"
#include "modinv/types.hpp"

namespace modinv {

struct SupportOptions {
  // Strict mode compares T eigenvalues, which ties the two central charges
  // mod 24. Relaxed mode divides the charge phase out and compares the
  // twists exp(2pi i h) only, so theories whose charges differ mod 24 can
  // still couple.
  bool relaxed = false;
  double tol = kDefaultTol;
};

// Positions (i, j) a coupling matrix may occupy if it is to commute with T.
inline std::vector<std::pair<int, int>> t_compatible_support(
    const ModularData& L, const ModularData& R, SupportOptions opt = {}) {
  const auto phase = [&](const ModularData& md, int i) {
    if (!opt.relaxed) return md.t[i];
    return std::exp(
        cplx(0.0, 2.0 * std::numbers::pi * md.h[static_cast<std::size_t>(i)]));
  };
  std::vector<std::pair<int, int>> sup;
  for (int i = 0; i < L.n(); ++i) {
    for (int j = 0; j < R.n(); ++j) {
      if (std::abs(phase(L, i) - phase(R, j)) <= opt.tol) sup.emplace_back(i, j);
    }
  }
  return sup;
}

struct CouplingReport {
  double s_residual = 0.0;  // S_L Z - Z S_R
  double t_residual = 0.0;  // T_L Z - Z T_R
  bool s_pass = false;
  bool t_pass = false;
  bool pass() const { return s_pass && t_pass; }
};

inline CouplingReport check_modular_invariance(const ModularData& L,
                                               const MatI& Z,
                                               const ModularData& R,
                                               double tol = kDefaultTol) {
  if (Z.rows() != L.n() || Z.cols() != R.n()) {
    throw std::invalid_argument(
        "check_modular_invariance: coupling matrix shape mismatch");
  }
  const MatD Zd = Z.cast<double>();
  CouplingReport rep;
  rep.s_residual = max_abs(MatC(L.S * Zd - Zd * R.S));
  rep.t_residual = max_abs(MatC(L.T() * Zd - Zd * R.T()));
  rep.s_pass = rep.s_residual <= tol;
  rep.t_pass = rep.t_residual <= tol;
  return rep;
}

struct XIntertwiningReport {
  double residual = 0.0;  // X_L Z - Z X_R
  bool pass = false;
};

// The phase half of the statistics symmetry on its own. It follows from
// locality alone, so callers sometimes want it without the Y relation.
inline XIntertwiningReport check_x_intertwining(const StatisticsData& L,
                                                const StatisticsData& R,
                                                const MatI& Z,
                                                double tol = kDefaultTol) {
  if (Z.rows() != L.n() || Z.cols() != R.n()) {
    throw std::invalid_argument(
        "check_x_intertwining: coupling matrix shape mismatch");
  }
  const MatD Zd = Z.cast<double>();
  XIntertwiningReport rep;
  rep.residual = max_abs(MatC(L.X * Zd - Zd * R.X));
  rep.pass = rep.residual <= tol;
  return rep;
}

struct StatisticsSymmetryReport {
  double lambda_left = 0.0;   // sum_i Z_i0 d_i
  double lambda_right = 0.0;  // sum_j Z_0j d_j
  double x_residual = 0.0;    // X_L Z - Z X_R
  double y_residual = 0.0;    // Y_L Z / lambda_L - Z Y_R / lambda_R
  bool x_pass = false;
  bool y_pass = false;
  bool pass() const { return x_pass && y_pass; }
};

// The two halves of the statistics symmetry of a coupling matrix. The Y
// relation is checked in its index-normalized form, so it is meaningful
// even when the vacuum couples to more than the vacuum. A vanishing lambda
// leaves the Y relation undefined; that is reported as an infinite
// residual rather than an error.
inline StatisticsSymmetryReport check_statistics_symmetry(
    const StatisticsData& L, const StatisticsData& R, const MatI& Z,
    double tol = kDefaultTol) {
  if (Z.rows() != L.n() || Z.cols() != R.n()) {
    throw std::invalid_argument(
        "check_statistics_symmetry: coupling matrix shape mismatch");
  }
  StatisticsSymmetryReport rep;
  for (int i = 0; i < L.n(); ++i) rep.lambda_left += Z(i, 0) * L.d[i];
  for (int j = 0; j < R.n(); ++j) rep.lambda_right += Z(0, j) * R.d[j];
  const MatD Zd = Z.cast<double>();
  rep.x_residual = max_abs(MatC(L.X * Zd - Zd * R.X));
  rep.x_pass = rep.x_residual <= tol;
  if (rep.lambda_left > tol && rep.lambda_right > tol) {
    rep.y_residual = max_abs(
        MatC(L.Y * Zd / rep.lambda_left - Zd * R.Y / rep.lambda_right));
  } else {
    rep.y_residual = std::numeric_limits<double>::infinity();
  }
  rep.y_pass = rep.y_residual <= tol;
  return rep;
}

}  // namespace modinv
