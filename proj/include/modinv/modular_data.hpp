#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "modinv/types.hpp"

namespace modinv {

// Modular data of a rational chiral theory: the S matrix, conformal weights
// h_i, and central charge c. Index 0 is always the vacuum sector. T is stored
// as its diagonal; it is determined by h and c via T_ii = exp(2pi i (h_i - c/24)).
struct ModularData {
  std::vector<std::string> labels;
  double c = 0.0;
  std::vector<double> h;
  MatC S;
  VecC t;  // diagonal of T

  int n() const { return static_cast<int>(h.size()); }

  MatC T() const {
    MatC m = MatC::Zero(t.size(), t.size());
    m.diagonal() = t;
    return m;
  }
};

inline VecC t_diagonal_from_weights(const std::vector<double>& h, double c) {
  VecC t(static_cast<Eigen::Index>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    t[static_cast<Eigen::Index>(i)] =
        std::exp(cplx(0.0, 2.0 * std::numbers::pi * (h[i] - c / 24.0)));
  }
  return t;
}

// SU(2) level k: n = k+1 sectors labeled by the integrable weight a = 0..k
// (spin j = a/2). S and h follow the standard Kac-Peterson normalization.
inline ModularData su2_modular_data(int k) {
  if (k < 1) throw std::invalid_argument("su2_modular_data: level must be >= 1");
  const int n = k + 1;
  const double q = k + 2.0;
  ModularData md;
  md.c = 3.0 * k / q;
  md.labels.reserve(n);
  md.h.reserve(n);
  for (int a = 0; a < n; ++a) {
    md.labels.push_back("a=" + std::to_string(a));
    md.h.push_back(a * (a + 2.0) / (4.0 * q));
  }
  md.S = MatC(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      md.S(a, b) = std::sqrt(2.0 / q) *
                   std::sin(std::numbers::pi * (a + 1.0) * (b + 1.0) / q);
    }
  }
  md.t = t_diagonal_from_weights(md.h, md.c);
  return md;
}

struct ValidationIssue {
  std::string invariant;
  double residual = 0.0;
};

struct ValidationReport {
  bool pass = true;
  std::vector<ValidationIssue> issues;

  const ValidationIssue& worst() const {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < issues.size(); ++i) {
      if (issues[i].residual > issues[arg].residual) arg = i;
    }
    return issues[arg];
  }
};

namespace detail {

// Extracts an integer permutation matrix from a numerically-near-permutation
// complex matrix. Returns false if entries do not round to {0,1} forming a
// permutation; residual reports the worst rounding error found.
inline bool round_to_permutation(const MatC& m, MatI& out, double& residual) {
  const Eigen::Index n = m.rows();
  out = MatI::Zero(n, n);
  residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = m(i, j).real();
      const long r = std::lround(re);
      residual = std::max(residual,
                          std::max(std::abs(re - r), std::abs(m(i, j).imag())));
      if (r != 0 && r != 1) return false;
      out(i, j) = static_cast<int>(r);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.row(i).sum() != 1 || out.col(i).sum() != 1) return false;
  }
  return true;
}

}  // namespace detail

inline ValidationReport validate_modular_data(const ModularData& md,
                                              double tol = kDefaultTol) {
  ValidationReport rep;
  auto add = [&](const std::string& name, double residual) {
    rep.issues.push_back({name, residual});
    if (residual > tol) rep.pass = false;
  };

  const int n = md.n();
  if (n == 0 || md.S.rows() != n || md.S.cols() != n || md.t.size() != n ||
      static_cast<int>(md.labels.size()) != n) {
    rep.pass = false;
    rep.issues.push_back({"shape consistency (labels, h, S, T)", 1.0});
    return rep;
  }

  add("vacuum weight h[0] = 0", std::abs(md.h[0]));
  add("S symmetric", max_abs(md.S - md.S.transpose()));
  add("S unitary",
      max_abs(MatC(md.S * md.S.adjoint() - MatC::Identity(n, n))));

  double im = 0.0, min_re = md.S(0, 0).real();
  for (int i = 0; i < n; ++i) {
    im = std::max(im, std::abs(md.S(0, i).imag()));
    min_re = std::min(min_re, md.S(0, i).real());
  }
  add("vacuum row of S real and strictly positive",
      std::max(im, min_re > 0.0 ? 0.0 : 1.0 + std::abs(min_re)));

  double mod = 0.0;
  for (int i = 0; i < n; ++i) mod = std::max(mod, std::abs(std::abs(md.t[i]) - 1.0));
  add("T diagonal of unit modulus", mod);
  add("T consistent with h and c",
      max_abs(MatC((md.t - t_diagonal_from_weights(md.h, md.c)).asDiagonal())));

  const MatC C = md.S * md.S;
  MatI Cint;
  double round_res = 0.0;
  const bool is_perm = detail::round_to_permutation(C, Cint, round_res);
  add("charge conjugation C = S^2 is a permutation",
      is_perm ? round_res : 1.0 + round_res);
  if (is_perm) {
    add("C is an involution", (Cint * Cint - MatI::Identity(n, n))
                                  .cwiseAbs()
                                  .maxCoeff());
    add("C fixes the vacuum", std::abs(Cint(0, 0) - 1));
  }

  const MatC TS = md.T() * md.S;
  add("defining relation (TS)^3 = S^2", max_abs(MatC(TS * TS * TS - C)));

  return rep;
}

inline void ensure_valid(const ModularData& md, double tol = kDefaultTol) {
  const ValidationReport rep = validate_modular_data(md, tol);
  if (!rep.pass) {
    const ValidationIssue& w = rep.worst();
    throw validation_error(w.invariant, w.residual);
  }
}

// C = S^2, rounded to an integer permutation matrix.
inline MatI charge_conjugation(const ModularData& md, double tol = kDefaultTol) {
  MatI C;
  double residual = 0.0;
  if (!detail::round_to_permutation(md.S * md.S, C, residual) || residual > tol) {
    throw validation_error("charge conjugation C = S^2 is a permutation",
                           residual);
  }
  return C;
}

// d_i = S_0i / S_00. Valid data has the vacuum row real positive, so the
// real part is the whole story; the imaginary part is a validation issue.
inline VecD quantum_dimensions(const ModularData& md) {
  const double s00 = md.S(0, 0).real();
  if (!(s00 > 0.0)) {
    throw validation_error("vacuum row of S real and strictly positive", 1.0);
  }
  VecD d(md.n());
  for (int i = 0; i < md.n(); ++i) d[i] = md.S(0, i).real() / s00;
  return d;
}

struct Sl2zReport {
  double defining_residual = 0.0;  // TSTST - S
  double ct_residual = 0.0;        // CT - TC
  double cs_residual = 0.0;        // CS - S^{-1}
  double c2_residual = 0.0;        // C^2 - 1
  bool pass = false;

  double max_residual() const {
    return std::max(std::max(defining_residual, ct_residual),
                    std::max(cs_residual, c2_residual));
  }
};

// Checks the SL(2,Z) generator relations with C := S^2:
// TSTST = S, CT = TC, CS = SC = S^{-1}, C^2 = 1.
inline Sl2zReport verify_sl2z_relations(const MatC& S, const MatC& T,
                                        double tol = kDefaultTol) {
  if (S.rows() != S.cols() || T.rows() != T.cols() || S.rows() != T.rows()) {
    throw std::invalid_argument("verify_sl2z_relations: dimension mismatch");
  }
  const Eigen::Index n = S.rows();
  const MatC C = S * S;
  Sl2zReport rep;
  rep.defining_residual = max_abs(MatC(T * S * T * S * T - S));
  rep.ct_residual = max_abs(MatC(C * T - T * C));
  const MatC Sinv = S.inverse();
  rep.cs_residual = std::max(max_abs(MatC(C * S - Sinv)),
                             max_abs(MatC(S * C - Sinv)));
  rep.c2_residual = max_abs(MatC(C * C - MatC::Identity(n, n)));
  rep.pass = rep.max_residual() <= tol;
  return rep;
}

inline Sl2zReport verify_sl2z_relations(const ModularData& md,
                                        double tol = kDefaultTol) {
  return verify_sl2z_relations(md.S, md.T(), tol);
}

}  // namespace modinv
