#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "modinv/modular_data.hpp"
#include "modinv/types.hpp"

namespace modinv {

// Fusion ring on n sectors: nonnegative integer structure constants N_ij^k
// with sector 0 the unit, plus the conjugation permutation determined by
// N_ij^0 = delta_{j, conj(i)}.
struct FusionRing {
  int n = 0;
  std::vector<int> tensor;  // flattened, (i*n + j)*n + k
  std::vector<int> conj;

  int N(int i, int j, int k) const {
    return tensor[static_cast<std::size_t>((i * n + j) * n + k)];
  }
  int& N(int i, int j, int k) {
    return tensor[static_cast<std::size_t>((i * n + j) * n + k)];
  }
};

namespace detail {

// Derives conj from the tensor and checks the structural invariants that do
// not need S: unit sector, commutativity, conjugation well-defined.
inline void finish_fusion_ring(FusionRing& fr) {
  const int n = fr.n;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (fr.N(0, j, k) != (j == k ? 1 : 0) ||
          fr.N(j, 0, k) != (j == k ? 1 : 0)) {
        throw fusion_error("fusion ring: sector 0 is not a unit", 1.0);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (fr.N(i, j, k) != fr.N(j, i, k)) {
          throw fusion_error("fusion ring: N is not commutative", 1.0);
        }
      }
    }
  }
  fr.conj.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = fr.N(i, j, 0);
      if (v == 0) continue;
      if (v != 1 || fr.conj[i] != -1) {
        throw fusion_error("fusion ring: conjugation is not a bijection", 1.0);
      }
      fr.conj[i] = j;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (fr.conj[i] < 0 || fr.conj[fr.conj[i]] != i) {
      throw fusion_error("fusion ring: conjugation is not an involution", 1.0);
    }
  }
}

}  // namespace detail

// Verlinde formula: N_ij^k = sum_m S_im S_jm conj(S_km) / S_0m.
// Every coefficient must land within tol of a nonnegative integer.
inline FusionRing verlinde_fusion(const ModularData& md,
                                  double tol = kDefaultTol) {
  const int n = md.n();
  FusionRing fr;
  fr.n = n;
  fr.tensor.assign(static_cast<std::size_t>(n) * n * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int m = 0; m < n; ++m) {
          acc += md.S(i, m) * md.S(j, m) * std::conj(md.S(k, m)) / md.S(0, m);
        }
        const long r = std::lround(acc.real());
        const double residual =
            std::max(std::abs(acc.real() - r), std::abs(acc.imag()));
        if (residual > tol) {
          throw fusion_error("Verlinde coefficient is not integral", residual);
        }
        if (r < 0) {
          throw fusion_error("Verlinde coefficient is negative",
                             static_cast<double>(-r));
        }
        fr.N(i, j, k) = static_cast<int>(r);
      }
    }
  }
  detail::finish_fusion_ring(fr);
  return fr;
}

// Builds a ring from raw structure constants (file input). Checks the same
// structural invariants as the Verlinde path but not associativity: data for
// a non-closed subsystem is deliberately allowed through here.
inline FusionRing fusion_ring_from_tensor(int n, std::vector<int> tensor) {
  if (n <= 0 || tensor.size() != static_cast<std::size_t>(n) * n * n) {
    throw std::invalid_argument("fusion_ring_from_tensor: bad tensor shape");
  }
  for (int v : tensor) {
    if (v < 0) throw fusion_error("fusion ring: negative multiplicity", -v);
  }
  FusionRing fr;
  fr.n = n;
  fr.tensor = std::move(tensor);
  detail::finish_fusion_ring(fr);
  return fr;
}

// First (i,j,k,l) with sum_m N_ij^m N_mk^l != sum_m N_jk^m N_im^l, if any.
inline std::optional<std::array<int, 4>> find_associativity_violation(
    const FusionRing& fr) {
  const int n = fr.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          int lhs = 0, rhs = 0;
          for (int m = 0; m < n; ++m) {
            lhs += fr.N(i, j, m) * fr.N(m, k, l);
            rhs += fr.N(j, k, m) * fr.N(i, m, l);
          }
          if (lhs != rhs) return std::array<int, 4>{i, j, k, l};
        }
      }
    }
  }
  return std::nullopt;
}

inline bool is_associative(const FusionRing& fr) {
  return !find_associativity_violation(fr).has_value();
}

}  // namespace modinv
