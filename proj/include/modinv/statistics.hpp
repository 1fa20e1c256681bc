#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "modinv/fusion.hpp"
#include "modinv/modular_data.hpp"
#include "modinv/types.hpp"

namespace modinv {

// Statistics data of a sector system Delta: twists kappa_i, statistical
// dimensions d_i, and the monodromy matrix
//   Y_ij = sum_k N_ij^k (kappa_i kappa_j / kappa_k) d_k.
// The system may be a proper subsystem of a larger ring, in which case
// `members` records the ambient indices and `closed` whether Delta is
// closed under the ambient fusion.
struct StatisticsData {
  std::vector<int> members;
  VecC kappa;
  VecD d;
  MatC X;  // diag(kappa)
  MatC Y;
  cplx z = 0.0;   // sum_i kappa_i d_i^2
  double w = 0.0; // sum_i d_i^2
  bool closed = true;
  bool degenerate = false;
  double sigma_min = 0.0;  // smallest singular value of Y
  std::optional<std::vector<int>> conj;  // positions within Delta, if closed under it
  std::optional<double> c;

  int n() const { return static_cast<int>(members.size()); }

  MatI C() const {
    if (!conj) {
      throw inapplicable_error(
          "statistics data: subsystem is not closed under conjugation");
    }
    const int m = n();
    MatI out = MatI::Zero(m, m);
    for (int i = 0; i < m; ++i) out((*conj)[i], i) = 1;
    return out;
  }
};

namespace detail {

inline void finish_statistics(StatisticsData& sd) {
  const int m = sd.n();
  sd.X = MatC::Zero(m, m);
  sd.X.diagonal() = sd.kappa;
  sd.z = 0.0;
  sd.w = 0.0;
  for (int i = 0; i < m; ++i) {
    sd.z += sd.kappa[i] * sd.d[i] * sd.d[i];
    sd.w += sd.d[i] * sd.d[i];
  }
  Eigen::JacobiSVD<MatC> svd(sd.Y);
  sd.sigma_min = svd.singularValues().size() == 0
                     ? 0.0
                     : svd.singularValues().minCoeff();
  sd.degenerate = sd.sigma_min <= std::sqrt(sd.w) * kDegeneracyScale;
}

}  // namespace detail

// Statistics data of a subset Delta of a modular theory's sectors. The
// monodromies are those of the full theory: the k-sum in Y runs over the
// whole ring, and the result is then restricted to rows and columns in
// Delta. An empty subset means the full ring.
inline StatisticsData statistics_from_modular_data(
    const ModularData& md, const FusionRing& fr, std::vector<int> members = {}) {
  const int n = md.n();
  if (fr.n != n) {
    throw std::invalid_argument(
        "statistics_from_modular_data: fusion ring size mismatch");
  }
  if (members.empty()) {
    members.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = i;
  }
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int a : members) {
    if (a < 0 || a >= n) {
      throw std::invalid_argument(
          "statistics_from_modular_data: member index out of range");
    }
    in[static_cast<std::size_t>(a)] = 1;
  }

  const VecD d_full = quantum_dimensions(md);
  VecC kappa_full(n);
  for (int i = 0; i < n; ++i) {
    kappa_full[i] = std::exp(cplx(0.0, 2.0 * std::numbers::pi * md.h[static_cast<std::size_t>(i)]));
  }

  const int m = static_cast<int>(members.size());
  StatisticsData sd;
  sd.members = std::move(members);
  sd.kappa = VecC(m);
  sd.d = VecD(m);
  for (int p = 0; p < m; ++p) {
    sd.kappa[p] = kappa_full[sd.members[static_cast<std::size_t>(p)]];
    sd.d[p] = d_full[sd.members[static_cast<std::size_t>(p)]];
  }

  sd.Y = MatC::Zero(m, m);
  sd.closed = true;
  for (int p = 0; p < m; ++p) {
    const int i = sd.members[static_cast<std::size_t>(p)];
    for (int q = 0; q < m; ++q) {
      const int j = sd.members[static_cast<std::size_t>(q)];
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const int mult = fr.N(i, j, k);
        if (mult == 0) continue;
        if (!in[static_cast<std::size_t>(k)]) sd.closed = false;
        acc += static_cast<double>(mult) * kappa_full[i] * kappa_full[j] /
               kappa_full[k] * d_full[k];
      }
      sd.Y(p, q) = acc;
    }
  }

  std::vector<int> cpos(static_cast<std::size_t>(m), -1);
  bool conj_closed = true;
  for (int p = 0; p < m && conj_closed; ++p) {
    const int ci = fr.conj[sd.members[static_cast<std::size_t>(p)]];
    const auto it = std::find(sd.members.begin(), sd.members.end(), ci);
    if (it == sd.members.end()) {
      conj_closed = false;
    } else {
      cpos[static_cast<std::size_t>(p)] =
          static_cast<int>(it - sd.members.begin());
    }
  }
  if (conj_closed) sd.conj = std::move(cpos);

  sd.c = md.c;
  detail::finish_statistics(sd);
  return sd;
}

// Statistics data assembled from raw components (the file-input path). Here
// the k-sum in Y can only run over the sectors actually given, so for a
// proper subsystem this is genuinely different data than a restriction of
// the ambient Y. The supplied ring is taken at face value.
inline StatisticsData statistics_from_components(VecC kappa, VecD d,
                                                 const FusionRing& fr,
                                                 std::optional<double> c = {},
                                                 double tol = kDefaultTol) {
  const int m = fr.n;
  if (kappa.size() != m || d.size() != m) {
    throw std::invalid_argument(
        "statistics_from_components: component size mismatch");
  }
  for (int i = 0; i < m; ++i) {
    if (std::abs(std::abs(kappa[i]) - 1.0) > tol) {
      throw validation_error("twists of unit modulus",
                             std::abs(std::abs(kappa[i]) - 1.0));
    }
    if (!(d[i] > 0.0)) {
      throw validation_error("statistical dimensions strictly positive", 1.0);
    }
  }
  if (std::abs(kappa[0] - 1.0) > tol || std::abs(d[0] - 1.0) > tol) {
    throw validation_error("vacuum sector has kappa = d = 1",
                           std::max(std::abs(kappa[0] - 1.0),
                                    std::abs(d[0] - 1.0)));
  }

  StatisticsData sd;
  sd.members.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) sd.members[static_cast<std::size_t>(i)] = i;
  sd.kappa = std::move(kappa);
  sd.d = std::move(d);
  sd.Y = MatC::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < m; ++k) {
        const int mult = fr.N(i, j, k);
        if (mult == 0) continue;
        acc += static_cast<double>(mult) * sd.kappa[i] * sd.kappa[j] /
               sd.kappa[k] * sd.d[k];
      }
      sd.Y(i, j) = acc;
    }
  }
  sd.closed = true;
  sd.conj = fr.conj;
  sd.c = c;
  detail::finish_statistics(sd);
  return sd;
}

struct StatisticsRelationsReport {
  double hexagon_residual = 0.0;    // XYXYX - zY
  double gauss_residual = 0.0;      // |z|^2 - w
  double cx_residual = 0.0;         // CX - XC
  double cy_residual = 0.0;         // CY - YC and CY - conj(Y)
  double y_symmetric_residual = 0.0;
  bool pass = false;                // matrix relations against tol

  double max_matrix_residual() const {
    return std::max(std::max(hexagon_residual, cx_residual),
                    std::max(cy_residual, y_symmetric_residual));
  }
};

// The algebraic relations the pair (X, Y) of a closed system must satisfy.
// The Gauss-sum residual |z|^2 - w is reported but not folded into `pass`:
// it scales with w, and callers hold it to their own tolerance.
inline StatisticsRelationsReport verify_statistics_relations(
    const StatisticsData& sd, double tol = kDefaultTol) {
  const MatC C = sd.C().cast<cplx>();
  StatisticsRelationsReport rep;
  rep.hexagon_residual =
      max_abs(MatC(sd.X * sd.Y * sd.X * sd.Y * sd.X - sd.z * sd.Y));
  rep.gauss_residual = std::abs(std::norm(sd.z) - sd.w);
  rep.cx_residual = max_abs(MatC(C * sd.X - sd.X * C));
  rep.cy_residual = std::max(max_abs(MatC(C * sd.Y - sd.Y * C)),
                             max_abs(MatC(C * sd.Y - sd.Y.conjugate())));
  rep.y_symmetric_residual = max_abs(MatC(sd.Y - sd.Y.transpose()));
  rep.pass = rep.max_matrix_residual() <= tol;
  return rep;
}

struct StatisticsRepresentation {
  MatC S;
  MatC T;
  cplx root;  // the cube root of z/|z| that was divided out of X
};

// Nondegenerate statistics data represents SL(2,Z) through
//   S = w^{-1/2} Y,  T = root^{-1} X,  root^3 = z/|z|.
// The cube root is ambiguous by a third root of unity; when the central
// charge is known the branch is fixed by matching T_00 against
// exp(-2pi i c/24), otherwise the principal root is taken.
inline StatisticsRepresentation statistics_representation(
    const StatisticsData& sd) {
  if (sd.degenerate) {
    throw degeneracy_error(
        "statistics representation: Y is degenerate (smallest singular "
        "value " + std::to_string(sd.sigma_min) + ")");
  }
  if (std::abs(sd.z) <= std::sqrt(sd.w) * kDegeneracyScale) {
    throw degeneracy_error("statistics representation: z is degenerate");
  }
  const cplx phase = sd.z / std::abs(sd.z);
  cplx root = std::exp(cplx(0.0, std::arg(phase) / 3.0));
  if (sd.c) {
    const cplx target =
        std::exp(cplx(0.0, 2.0 * std::numbers::pi * (*sd.c) / 24.0));
    cplx best = root;
    double best_dist = std::abs(root - target);
    for (int j = 1; j < 3; ++j) {
      const cplx cand =
          root * std::exp(cplx(0.0, 2.0 * std::numbers::pi * j / 3.0));
      const double dist = std::abs(cand - target);
      if (dist < best_dist) {
        best = cand;
        best_dist = dist;
      }
    }
    root = best;
  }
  StatisticsRepresentation rep;
  rep.root = root;
  rep.S = sd.Y / std::sqrt(sd.w);
  rep.T = sd.X / root;
  return rep;
}

}  // namespace modinv
