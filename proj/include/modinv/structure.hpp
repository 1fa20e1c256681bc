#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modinv/fusion.hpp"
#include "modinv/invariants.hpp"
#include "modinv/modular_data.hpp"
#include "modinv/statistics.hpp"
#include "modinv/types.hpp"

namespace modinv {

struct NormalityReport {
  bool vacuum_entry_one = false;
  bool vacuum_row_trivial = false;  // Z_0j = delta_0j
  bool vacuum_col_trivial = false;  // Z_i0 = delta_i0
  bool pass() const {
    return vacuum_entry_one && vacuum_row_trivial && vacuum_col_trivial;
  }
};

// A coupling is normal when the vacuum couples only to the vacuum, i.e.
// neither chiral side is extended.
inline NormalityReport check_normality(const MatI& Z) {
  NormalityReport rep;
  if (Z.rows() == 0 || Z.cols() == 0) return rep;
  rep.vacuum_entry_one = Z(0, 0) == 1;
  rep.vacuum_row_trivial = true;
  rep.vacuum_col_trivial = true;
  for (Eigen::Index j = 1; j < Z.cols(); ++j) {
    if (Z(0, j) != 0) rep.vacuum_row_trivial = false;
  }
  for (Eigen::Index i = 1; i < Z.rows(); ++i) {
    if (Z(i, 0) != 0) rep.vacuum_col_trivial = false;
  }
  return rep;
}

struct PermutationIsoReport {
  std::vector<int> perm;  // sigma on the support, -1 off it
  bool full = false;      // every row and every column carries a 1
  bool fixes_vacuum = false;
  bool support_closed = false;  // both supports closed under fusion and conj
  bool preserves_fusion = false;
  std::optional<std::array<int, 3>> violated;  // first failing triple
  bool pass() const {
    return fixes_vacuum && support_closed && preserves_fusion;
  }
};

// Reads the bijection off the support of a sub-permutation coupling and
// tests it for a fusion isomorphism between the supported subsystems.
// Exact integer arithmetic throughout. Anything other than a 0/1 matrix
// with at most one 1 per row and column is rejected up front, since no
// bijection can be extracted from it.
inline PermutationIsoReport check_permutation_fusion_iso(
    const MatI& Z, const FusionRing& frL, const FusionRing& frR) {
  const int nL = static_cast<int>(Z.rows());
  const int nR = static_cast<int>(Z.cols());
  if (nL != frL.n || nR != frR.n) {
    throw std::invalid_argument(
        "check_permutation_fusion_iso: coupling shape does not match the "
        "fusion rings");
  }
  PermutationIsoReport rep;
  rep.perm.assign(static_cast<std::size_t>(nL), -1);
  std::vector<char> col_hit(static_cast<std::size_t>(nR), 0);
  for (int i = 0; i < nL; ++i) {
    for (int j = 0; j < nR; ++j) {
      if (Z(i, j) == 0) continue;
      if (Z(i, j) != 1 || rep.perm[static_cast<std::size_t>(i)] != -1 ||
          col_hit[static_cast<std::size_t>(j)]) {
        throw inapplicable_error(
            "check_permutation_fusion_iso: Z is not a sub-permutation "
            "matrix");
      }
      rep.perm[static_cast<std::size_t>(i)] = j;
      col_hit[static_cast<std::size_t>(j)] = 1;
    }
  }

  std::vector<int> supL;
  std::vector<char> inL(static_cast<std::size_t>(nL), 0);
  std::vector<char> inR(static_cast<std::size_t>(nR), 0);
  for (int i = 0; i < nL; ++i) {
    if (rep.perm[static_cast<std::size_t>(i)] < 0) continue;
    supL.push_back(i);
    inL[static_cast<std::size_t>(i)] = 1;
    inR[static_cast<std::size_t>(rep.perm[static_cast<std::size_t>(i)])] = 1;
  }
  rep.full = static_cast<int>(supL.size()) == nL && nL == nR;
  rep.fixes_vacuum = nL > 0 && rep.perm[0] == 0;

  rep.support_closed = true;
  for (int i : supL) {
    if (!inL[static_cast<std::size_t>(frL.conj[static_cast<std::size_t>(i)])]) {
      rep.support_closed = false;
    }
    const int si = rep.perm[static_cast<std::size_t>(i)];
    if (!inR[static_cast<std::size_t>(frR.conj[static_cast<std::size_t>(si)])]) {
      rep.support_closed = false;
    }
    for (int j : supL) {
      const int sj = rep.perm[static_cast<std::size_t>(j)];
      for (int k = 0; k < nL; ++k) {
        if (frL.N(i, j, k) > 0 && !inL[static_cast<std::size_t>(k)]) {
          rep.support_closed = false;
        }
      }
      for (int k = 0; k < nR; ++k) {
        if (frR.N(si, sj, k) > 0 && !inR[static_cast<std::size_t>(k)]) {
          rep.support_closed = false;
        }
      }
    }
  }

  rep.preserves_fusion = true;
  for (int i : supL) {
    for (int j : supL) {
      for (int k : supL) {
        if (frL.N(i, j, k) !=
            frR.N(rep.perm[static_cast<std::size_t>(i)],
                  rep.perm[static_cast<std::size_t>(j)],
                  rep.perm[static_cast<std::size_t>(k)])) {
          rep.preserves_fusion = false;
          if (!rep.violated) rep.violated = std::array<int, 3>{i, j, k};
        }
      }
    }
  }
  return rep;
}

// Z written as a sum of rank-one blocks u_t v_t^T with nonnegative integer
// branching vectors. The stored matrices always satisfy
//   b_left^T * zmax * b_right = Z
// exactly. When the left and right rows agree as multisets with the vacuum
// rows matched, both sides branch from one extension: b_right = b_left,
// sigma records the matching v_t = u_{sigma(t)}, and zmax is sigma's
// permutation matrix. Otherwise row t of b_right is v_t and zmax is the
// identity.
struct BlockFactorization {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;
  MatI b_left;
  MatI b_right;
  MatI zmax;
  std::optional<std::vector<int>> sigma;
  bool type_one = false;  // every block has u_t == v_t
};

enum class BlockSearchStatus { found, none, undecided };

struct BlockSearchOptions {
  int max_blocks = 8;
  int max_entry = 2;
  std::uint64_t node_budget = 200000;
  double tol = kDefaultTol;  // groups sectors into equal-twist classes
};

struct BlockSearchResult {
  BlockSearchStatus status = BlockSearchStatus::none;
  std::optional<BlockFactorization> factorization;
  std::uint64_t nodes = 0;
};

namespace detail {

inline bool primitive(const std::vector<int>& v) {
  int g = 0;
  for (int x : v) g = std::gcd(g, x);
  return g == 1;
}

// Sectors with the same T eigenvalue; only these can share a block, since a
// block is the restriction of a single sector of the extension.
inline std::vector<std::vector<int>> twist_classes(const ModularData& md,
                                                   double tol) {
  std::vector<std::vector<int>> cls(static_cast<std::size_t>(md.n()));
  for (int i = 0; i < md.n(); ++i) {
    for (int j = 0; j < md.n(); ++j) {
      if (std::abs(md.t[i] - md.t[j]) <= tol) {
        cls[static_cast<std::size_t>(i)].push_back(j);
      }
    }
  }
  return cls;
}

// Greedy matching of right rows to equal left rows, preferring the
// identity. Equality classes make greedy exact: a perfect matching exists
// iff each distinct row appears equally often on both sides. The vacuum
// rows must pair with each other, since the matching identifies the two
// vacuum extensions.
inline std::optional<std::vector<int>> match_sigma(
    const std::vector<std::pair<std::vector<int>, std::vector<int>>>& blocks) {
  const int m = static_cast<int>(blocks.size());
  std::vector<int> sigma(static_cast<std::size_t>(m), -1);
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (int t = 0; t < m; ++t) {
    const auto& v = blocks[static_cast<std::size_t>(t)].second;
    if (!used[static_cast<std::size_t>(t)] &&
        blocks[static_cast<std::size_t>(t)].first == v) {
      sigma[static_cast<std::size_t>(t)] = t;
      used[static_cast<std::size_t>(t)] = 1;
      continue;
    }
    bool ok = false;
    for (int s = 0; s < m; ++s) {
      if (!used[static_cast<std::size_t>(s)] &&
          blocks[static_cast<std::size_t>(s)].first == v) {
        sigma[static_cast<std::size_t>(t)] = s;
        used[static_cast<std::size_t>(s)] = 1;
        ok = true;
        break;
      }
    }
    if (!ok) return std::nullopt;
  }
  if (m > 0 && sigma[0] != 0) return std::nullopt;
  return sigma;
}

struct BlockSearch {
  const BlockSearchOptions& opt;
  std::vector<std::vector<int>> clsL, clsR;
  int nL = 0, nR = 0;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;
  std::vector<int> u0, v0;    // the forced vacuum block
  bool require_sigma = false;  // accept only matchable factorizations

  bool exhausted_budget() {
    if (++nodes > opt.node_budget) budget_hit = true;
    return budget_hit;
  }

  // All nonnegative vectors supported on `sup` with entries bounded by
  // `cap`, a strictly positive entry at `anchor`, and gcd 1.
  void candidates(const std::vector<int>& sup, const std::vector<int>& cap,
                  int anchor, std::vector<std::vector<int>>& out,
                  int dim) const {
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    enumerate_candidates(sup, cap, anchor, 0, cur, out);
  }

  void enumerate_candidates(const std::vector<int>& sup,
                            const std::vector<int>& cap, int anchor,
                            std::size_t pos, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) const {
    if (pos == sup.size()) {
      if (cur[static_cast<std::size_t>(anchor)] > 0 && primitive(cur)) {
        out.push_back(cur);
      }
      return;
    }
    const int a = sup[pos];
    const int top = std::min(opt.max_entry, cap[pos]);
    for (int v = 0; v <= top; ++v) {
      cur[static_cast<std::size_t>(a)] = v;
      enumerate_candidates(sup, cap, anchor, pos + 1, cur, out);
    }
    cur[static_cast<std::size_t>(a)] = 0;
  }

  bool search(MatI& R, int remaining) {
    int ai = -1, aj = -1;
    for (int i = 0; i < nL && ai < 0; ++i) {
      for (int j = 0; j < nR; ++j) {
        if (R(i, j) > 0) {
          ai = i;
          aj = j;
          break;
        }
      }
    }
    if (ai < 0) {  // R is zero, factorization complete
      if (!require_sigma) return true;
      std::vector<std::pair<std::vector<int>, std::vector<int>>> all;
      all.reserve(blocks.size() + 1);
      all.emplace_back(u0, v0);
      for (const auto& b : blocks) all.push_back(b);
      return match_sigma(all).has_value();
    }
    if (remaining == 0) return false;

    std::vector<int> supL, capL;
    for (int a : clsL[static_cast<std::size_t>(ai)]) {
      if (R(a, aj) > 0) {
        supL.push_back(a);
        capL.push_back(R(a, aj));
      }
    }
    std::vector<std::vector<int>> us;
    candidates(supL, capL, ai, us, nL);

    for (const auto& u : us) {
      std::vector<int> supR, capR;
      for (int b : clsR[static_cast<std::size_t>(aj)]) {
        int cap = opt.max_entry;
        for (int a = 0; a < nL; ++a) {
          if (u[static_cast<std::size_t>(a)] > 0) {
            cap = std::min(cap, R(a, b) / u[static_cast<std::size_t>(a)]);
          }
        }
        if (cap > 0) {
          supR.push_back(b);
          capR.push_back(cap);
        }
      }
      if (std::find(supR.begin(), supR.end(), aj) == supR.end()) continue;
      std::vector<std::vector<int>> vs;
      candidates(supR, capR, aj, vs, nR);
      for (const auto& v : vs) {
        if (exhausted_budget()) return false;
        for (int a = 0; a < nL; ++a) {
          for (int b = 0; b < nR; ++b) {
            R(a, b) -= u[static_cast<std::size_t>(a)] *
                       v[static_cast<std::size_t>(b)];
          }
        }
        blocks.emplace_back(u, v);
        if (search(R, remaining - 1)) return true;
        blocks.pop_back();
        for (int a = 0; a < nL; ++a) {
          for (int b = 0; b < nR; ++b) {
            R(a, b) += u[static_cast<std::size_t>(a)] *
                       v[static_cast<std::size_t>(b)];
          }
        }
        if (budget_hit) return false;
      }
    }
    return false;
  }
};

inline BlockFactorization assemble_factorization(
    std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks, int nL,
    int nR) {
  BlockFactorization f;
  f.blocks = std::move(blocks);
  const int m = static_cast<int>(f.blocks.size());
  f.b_left = MatI::Zero(m, nL);
  f.b_right = MatI::Zero(m, nR);
  for (int t = 0; t < m; ++t) {
    for (int i = 0; i < nL; ++i) {
      f.b_left(t, i) = f.blocks[static_cast<std::size_t>(t)].first
                           [static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < nR; ++j) {
      f.b_right(t, j) = f.blocks[static_cast<std::size_t>(t)].second
                            [static_cast<std::size_t>(j)];
    }
  }

  // When both sides branch from one extension the presentation switches to
  // a single branching matrix with zmax carrying the sector matching.
  if (const auto sigma = match_sigma(f.blocks)) {
    f.sigma = *sigma;
    f.type_one = true;
    for (int t = 0; t < m; ++t) {
      if ((*sigma)[static_cast<std::size_t>(t)] != t) f.type_one = false;
    }
    f.b_right = f.b_left;
    f.zmax = MatI::Zero(m, m);
    for (int t = 0; t < m; ++t) {
      f.zmax(t, (*sigma)[static_cast<std::size_t>(t)]) = 1;
    }
  } else {
    f.zmax = MatI::Identity(m, m);
  }
  return f;
}

// The product identity every returned factorization must satisfy,
// recomputed from scratch in integer arithmetic.
inline bool factorization_product_matches(const BlockFactorization& f,
                                          const MatI& Z) {
  if (f.b_left.cols() != Z.rows() || f.b_right.cols() != Z.cols()) {
    return false;
  }
  if (f.zmax.rows() != f.b_left.rows() || f.zmax.cols() != f.b_right.rows()) {
    return false;
  }
  const MatI prod = f.b_left.transpose() * f.zmax * f.b_right;
  return prod == Z;
}

}  // namespace detail

// Searches for a branching presentation of Z. The vacuum block is forced:
// the extended vacuum restricts to Z's vacuum column on the left and Z's
// vacuum row on the right. Remaining blocks are built over equal-twist
// sector classes with primitive rows and entries up to max_entry, by
// iterative deepening in the block count, so the first factorization found
// has the fewest blocks. Permutation couplings short-circuit to their
// one-block-per-sector presentation.
inline BlockSearchResult find_block_structure(const MatI& Z,
                                              const ModularData& L,
                                              const ModularData& R,
                                              BlockSearchOptions opt = {}) {
  const int nL = static_cast<int>(Z.rows());
  const int nR = static_cast<int>(Z.cols());
  if (nL != L.n() || nR != R.n()) {
    throw std::invalid_argument("find_block_structure: Z shape mismatch");
  }
  BlockSearchResult res;
  if (nL == 0 || nR == 0 || Z(0, 0) != 1) return res;

  {
    bool perm = nL == nR;
    std::vector<int> img(static_cast<std::size_t>(nL), -1);
    for (int i = 0; i < nL && perm; ++i) {
      for (int j = 0; j < nR; ++j) {
        if (Z(i, j) == 0) continue;
        if (Z(i, j) != 1 || img[static_cast<std::size_t>(i)] != -1) {
          perm = false;
          break;
        }
        img[static_cast<std::size_t>(i)] = j;
      }
      if (perm && img[static_cast<std::size_t>(i)] < 0) perm = false;
    }
    if (perm) {
      std::vector<char> hit(static_cast<std::size_t>(nR), 0);
      for (int i = 0; i < nL && perm; ++i) {
        if (hit[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])]) {
          perm = false;
        }
        hit[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])] = 1;
      }
      if (perm) {
        std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;
        for (int i = 0; i < nL; ++i) {
          std::vector<int> u(static_cast<std::size_t>(nL), 0);
          std::vector<int> v(static_cast<std::size_t>(nR), 0);
          u[static_cast<std::size_t>(i)] = 1;
          v[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])] = 1;
          blocks.emplace_back(std::move(u), std::move(v));
        }
        res.status = BlockSearchStatus::found;
        res.factorization =
            detail::assemble_factorization(std::move(blocks), nL, nR);
        if (!detail::factorization_product_matches(*res.factorization, Z)) {
          throw internal_error(
              "find_block_structure: assembled factorization does not "
              "reproduce Z");
        }
        return res;
      }
    }
  }

  std::vector<int> u0(static_cast<std::size_t>(nL), 0);
  std::vector<int> v0(static_cast<std::size_t>(nR), 0);
  for (int i = 0; i < nL; ++i) u0[static_cast<std::size_t>(i)] = Z(i, 0);
  for (int j = 0; j < nR; ++j) v0[static_cast<std::size_t>(j)] = Z(0, j);

  MatI R0 = Z;
  for (int i = 0; i < nL; ++i) {
    for (int j = 0; j < nR; ++j) {
      R0(i, j) -= u0[static_cast<std::size_t>(i)] *
                  v0[static_cast<std::size_t>(j)];
      if (R0(i, j) < 0) return res;  // vacuum block alone overshoots
    }
  }

  detail::BlockSearch bs{opt,
                         detail::twist_classes(L, opt.tol),
                         detail::twist_classes(R, opt.tol),
                         nL,
                         nR,
                         0,
                         false,
                         {},
                         u0,
                         v0,
                         false};
  // Two rounds of iterative deepening in the block count. The first admits
  // only factorizations whose two branching-row multisets match, so the
  // minimal one-extension presentation wins whenever any exists; only when
  // none does at any depth is an asymmetric presentation reported.
  for (const bool require_sigma : {true, false}) {
    bs.require_sigma = require_sigma;
    for (int depth = 0; depth + 1 <= opt.max_blocks; ++depth) {
      MatI work = R0;
      bs.blocks.clear();
      if (bs.search(work, depth)) {
        std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;
        blocks.emplace_back(std::move(u0), std::move(v0));
        for (auto& b : bs.blocks) blocks.push_back(std::move(b));
        res.status = BlockSearchStatus::found;
        res.factorization =
            detail::assemble_factorization(std::move(blocks), nL, nR);
        if (!detail::factorization_product_matches(*res.factorization, Z)) {
          throw internal_error(
              "find_block_structure: assembled factorization does not "
              "reproduce Z");
        }
        res.nodes = bs.nodes;
        return res;
      }
      if (bs.budget_hit) break;
    }
    if (bs.budget_hit) break;
  }
  res.nodes = bs.nodes;
  res.status = bs.budget_hit ? BlockSearchStatus::undecided
                             : BlockSearchStatus::none;
  return res;
}

struct BranchingReport {
  double residual = 0.0;
  bool pass = false;
};

// Intertwining of the branching matrix between a system's monodromy Y and
// the extension's Ymax: (1/lambda) B Y = Ymax B.
inline BranchingReport check_branching_intertwining(const MatI& B,
                                                    const MatC& Y,
                                                    const MatC& Ymax,
                                                    double lambda,
                                                    double tol = kDefaultTol) {
  if (B.rows() != Ymax.rows() || Ymax.rows() != Ymax.cols() ||
      B.cols() != Y.rows() || Y.rows() != Y.cols()) {
    throw std::invalid_argument(
        "check_branching_intertwining: shape mismatch");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(
        "check_branching_intertwining: lambda must be positive");
  }
  const MatD Bd = B.cast<double>();
  BranchingReport rep;
  rep.residual = max_abs(MatC(Bd * Y / lambda - Ymax * Bd));
  rep.pass = rep.residual <= tol;
  return rep;
}

enum class TypeTag {
  diagonal,
  conjugate_diagonal,
  permutation,
  block_type_i,
  block_type_ii,
  unfactored,
};

inline const char* to_string(TypeTag t) {
  switch (t) {
    case TypeTag::diagonal: return "diagonal";
    case TypeTag::conjugate_diagonal: return "conjugate-diagonal";
    case TypeTag::permutation: return "permutation";
    case TypeTag::block_type_i: return "block-type-I";
    case TypeTag::block_type_ii: return "block-type-II";
    case TypeTag::unfactored: return "unfactored";
  }
  return "unfactored";
}

// Names the diagonal exponent pattern of a self-coupling of the level
// k = n-1 theory: the multiset {i+1 : Z_ii > 0, with multiplicity Z_ii}
// against the exponents of the simply laced graphs with Coxeter number
// n + 1.
inline std::optional<std::string> ade_name(const MatI& Z) {
  const int n = static_cast<int>(Z.rows());
  if (n == 0 || Z.cols() != n) return std::nullopt;
  const int cox = n + 1;
  std::vector<int> diag;
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < Z(i, i); ++r) diag.push_back(i + 1);
  }
  const auto matches = [&diag](std::vector<int> exps) {
    std::sort(exps.begin(), exps.end());
    return diag == exps;
  };

  {
    std::vector<int> exps;
    for (int e = 1; e <= n; ++e) exps.push_back(e);
    if (matches(exps)) return "A" + std::to_string(n);
  }
  if (cox % 2 == 0) {
    const int m = (cox + 2) / 2;
    std::vector<int> exps;
    for (int e = 1; e <= 2 * m - 3; e += 2) exps.push_back(e);
    exps.push_back(m - 1);
    if (matches(exps)) return "D" + std::to_string(m);
  }
  if (cox == 12 && matches({1, 4, 5, 7, 8, 11})) return "E6";
  if (cox == 18 && matches({1, 5, 7, 9, 11, 13, 17})) return "E7";
  if (cox == 30 && matches({1, 7, 11, 13, 17, 19, 23, 29})) return "E8";
  return std::nullopt;
}

struct ClassificationReport {
  CouplingReport modular_invariant;
  StatisticsSymmetryReport statistics_symmetry;
  bool normal = false;
  std::optional<BlockFactorization> factorization;
  BlockSearchStatus search_status = BlockSearchStatus::none;
  TypeTag type_tag = TypeTag::unfactored;
  std::optional<std::string> ade;
  std::vector<std::string> notes;
};

namespace detail {

// An order-two sector of dimension one; fusing with it permutes the
// sectors left unchanged by the coupling of a type I pair.
inline std::optional<std::vector<int>> order_two_simple_current(
    const FusionRing& fr, const VecD& d) {
  for (int s = 1; s < fr.n; ++s) {
    if (std::abs(d[s] - 1.0) > 1e-6 || fr.N(s, s, 0) != 1) continue;
    std::vector<int> act(static_cast<std::size_t>(fr.n), -1);
    bool good = true;
    for (int i = 0; i < fr.n && good; ++i) {
      for (int j = 0; j < fr.n; ++j) {
        if (fr.N(s, i, j) == 0) continue;
        if (fr.N(s, i, j) != 1 || act[static_cast<std::size_t>(i)] != -1) {
          good = false;
          break;
        }
        act[static_cast<std::size_t>(i)] = j;
      }
      if (act[static_cast<std::size_t>(i)] < 0) good = false;
    }
    if (good) return act;
  }
  return std::nullopt;
}

}  // namespace detail

// One report per coupling matrix: validity checks (modular invariance,
// statistics symmetry, normality) alongside the structural taxonomy
// (factorization, type tag, ADE name). The ADE name only makes sense for a
// self-pairing; a heterotic pair keeps the taxonomy and gets a note
// instead.
inline ClassificationReport classify(const MatI& Z, const ModularData& L,
                                     const ModularData& R,
                                     const FusionRing& frL,
                                     const FusionRing& frR,
                                     const StatisticsData& sdL,
                                     const StatisticsData& sdR,
                                     double tol = kDefaultTol,
                                     BlockSearchOptions opt = {}) {
  ClassificationReport out;
  out.modular_invariant = check_modular_invariance(L, Z, R, tol);
  out.statistics_symmetry = check_statistics_symmetry(sdL, sdR, Z, tol);
  out.normal = check_normality(Z).pass();

  const int n = static_cast<int>(Z.rows());
  const bool square = n == static_cast<int>(Z.cols());
  const bool heterotic = L.labels != R.labels;
  if (square && !heterotic) {
    out.ade = ade_name(Z);
    if (!out.ade) {
      out.notes.push_back(
          "diagonal multiset matches no simply laced exponent list");
    }
  } else {
    out.notes.push_back(
        "heterotic pairing: ADE naming skipped and the Type I/II "
        "distinction carries no meaning");
  }

  const BlockSearchResult bs = find_block_structure(Z, L, R, opt);
  out.search_status = bs.status;
  out.factorization = bs.factorization;

  bool tagged = false;
  if (square && n == L.n() && n == R.n()) {
    if (Z == MatI::Identity(n, n)) {
      out.type_tag = TypeTag::diagonal;
      tagged = true;
    } else {
      bool conj_diag = true;
      for (int i = 0; i < n && conj_diag; ++i) {
        for (int j = 0; j < n; ++j) {
          if (Z(i, j) !=
              (j == frL.conj[static_cast<std::size_t>(i)] ? 1 : 0)) {
            conj_diag = false;
            break;
          }
        }
      }
      if (conj_diag) {
        out.type_tag = TypeTag::conjugate_diagonal;
        tagged = true;
      }
    }
  }
  if (!tagged) {
    bool sub_perm = true;
    bool any_gap = n != static_cast<int>(Z.cols());
    std::vector<char> col_hit(static_cast<std::size_t>(Z.cols()), 0);
    for (int i = 0; i < n && sub_perm; ++i) {
      int hits = 0;
      for (int j = 0; j < static_cast<int>(Z.cols()); ++j) {
        if (Z(i, j) == 0) continue;
        if (Z(i, j) != 1 || ++hits > 1 || col_hit[static_cast<std::size_t>(j)]) {
          sub_perm = false;
          break;
        }
        col_hit[static_cast<std::size_t>(j)] = 1;
      }
      if (hits == 0) any_gap = true;
    }
    if (sub_perm && !any_gap) {
      out.type_tag = TypeTag::permutation;
      tagged = true;
      const PermutationIsoReport iso =
          check_permutation_fusion_iso(Z, frL, frR);
      if (!iso.pass()) {
        out.notes.push_back(
            "permutation does not implement a fusion isomorphism");
      }
    }
  }
  if (!tagged) {
    if (bs.status != BlockSearchStatus::found) {
      out.type_tag = TypeTag::unfactored;
      out.notes.push_back(bs.status == BlockSearchStatus::undecided
                              ? "block search budget exhausted"
                              : "no branching presentation within the "
                                "search constraints");
    } else if (out.factorization->sigma) {
      out.type_tag = out.factorization->type_one ? TypeTag::block_type_i
                                                 : TypeTag::block_type_ii;
    } else {
      out.type_tag = TypeTag::block_type_ii;
      out.notes.push_back(
          "left and right branching rows differ as multisets");
    }
  }

  if (out.type_tag == TypeTag::block_type_i && L.n() == R.n()) {
    const auto current =
        detail::order_two_simple_current(frL, quantum_dimensions(L));
    if (current) {
      bool all_orbits = true;
      for (const auto& [u, v] : out.factorization->blocks) {
        for (int i = 0; i < L.n() && all_orbits; ++i) {
          if (u[static_cast<std::size_t>(i)] == 0) continue;
          const int si = (*current)[static_cast<std::size_t>(i)];
          bool within = true;
          for (int a = 0; a < L.n(); ++a) {
            if (u[static_cast<std::size_t>(a)] > 0 && a != i && a != si) {
              within = false;
            }
          }
          if (!within) all_orbits = false;
        }
        if (!all_orbits) break;
      }
      if (all_orbits) {
        out.notes.push_back(
            "blocks follow the orbits of an order-two simple current");
      }
    }
  }
  return out;
}

}  // namespace modinv
