#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "modinv/invariants.hpp"
#include "modinv/modular_data.hpp"
#include "modinv/types.hpp"

namespace modinv {

struct EnumerationOptions {
  double tol = kDefaultTol;
  bool relaxed_t = false;
  int workers = 1;
  int entry_cap = 0;               // extra per-entry bound, 0 means budget only
  std::uint64_t node_budget = 0;   // 0 means unlimited
  std::size_t max_candidates = 0;  // solutions + suspects, 0 means unlimited
};

struct Candidate {
  MatI Z;
  double s_residual = 0.0;
  double t_residual = 0.0;
};

struct EnumerationResult {
  std::vector<Candidate> solutions;  // s_residual <= tol
  std::vector<Candidate> suspects;   // tol < s_residual <= tol * kSuspectFactor
  bool complete = true;
  std::string truncation_reason;
  std::uint64_t nodes = 0;
  double bound = 0.0;  // 1 / (S_L00 * S_R00), the weighted entry budget
  std::vector<std::pair<int, int>> support;
  std::vector<std::string> notes;
};

namespace detail {

// Row-major lexicographic order on the integer matrices. Results are sorted
// with this so a complete enumeration prints identically for any worker
// count.
inline bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.Z.rows() != b.Z.rows()) return a.Z.rows() < b.Z.rows();
  if (a.Z.cols() != b.Z.cols()) return a.Z.cols() < b.Z.cols();
  for (Eigen::Index i = 0; i < a.Z.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.Z.cols(); ++j) {
      if (a.Z(i, j) != b.Z(i, j)) return a.Z(i, j) < b.Z(i, j);
    }
  }
  return false;
}

struct SearchShared {
  const ModularData& L;
  const ModularData& R;
  EnumerationOptions opt;
  std::vector<std::pair<int, int>> order;  // support minus the vacuum entry
  std::vector<double> cost;                // d_L(i) * d_R(j) per position
  VecD dL, dR;
  double bound = 0.0;
  double prune_tol = 0.0;  // opt.tol * kSuspectFactor

  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::size_t> found{0};
  std::atomic<bool> stop_budget{false};
  std::atomic<bool> stop_candidates{false};
};

// Slack when turning the remaining real-valued budget into an integer cap.
// The costs are sums of O(n^2) double products, so this only needs to beat
// accumulated roundoff.
inline constexpr double kBudgetSlack = 1e-6;

class SearchWorker {
 public:
  SearchWorker(SearchShared& sh, int id)
      : sh_(sh),
        id_(id),
        Z_(MatI::Zero(sh.L.n(), sh.R.n())),
        row_left_(static_cast<std::size_t>(sh.L.n()), 0),
        col_left_(static_cast<std::size_t>(sh.R.n()), 0) {
    Z_(0, 0) = 1;
    for (const auto& [i, j] : sh_.order) {
      ++row_left_[static_cast<std::size_t>(i)];
      ++col_left_[static_cast<std::size_t>(j)];
    }
  }

  std::vector<Candidate> solutions;
  std::vector<Candidate> suspects;

  void run() {
    if (sh_.order.empty()) {
      if (id_ == 0) leaf();
      return;
    }
    descend(0, 1.0);
  }

 private:
  bool stopped() const {
    return sh_.stop_budget.load(std::memory_order_relaxed) ||
           sh_.stop_candidates.load(std::memory_order_relaxed);
  }

  // Final value of (S_L Z - Z S_R)_{ij}; valid once column j and row i of Z
  // hold their final values.
  double entry_residual(int i, int j) const {
    cplx acc = 0.0;
    for (int m = 0; m < sh_.L.n(); ++m) {
      acc += sh_.L.S(i, m) * static_cast<double>(Z_(m, j));
    }
    for (int m = 0; m < sh_.R.n(); ++m) {
      acc -= static_cast<double>(Z_(i, m)) * sh_.R.S(m, j);
    }
    return std::abs(acc);
  }

  void leaf() {
    const MatD Zd = Z_.cast<double>();
    const double s_res = max_abs(MatC(sh_.L.S * Zd - Zd * sh_.R.S));
    if (s_res > sh_.prune_tol) return;
    Candidate cand;
    cand.Z = Z_;
    cand.s_residual = s_res;
    cand.t_residual = max_abs(MatC(sh_.L.T() * Zd - Zd * sh_.R.T()));
    (s_res <= sh_.opt.tol ? solutions : suspects).push_back(std::move(cand));
    const std::size_t total =
        sh_.found.fetch_add(1, std::memory_order_relaxed) + 1;
    if (sh_.opt.max_candidates != 0 && total >= sh_.opt.max_candidates) {
      sh_.stop_candidates.store(true, std::memory_order_relaxed);
    }
  }

  void descend(std::size_t pos, double used) {
    if (pos == sh_.order.size()) {
      leaf();
      return;
    }
    const auto [i, j] = sh_.order[pos];
    const double cost = sh_.cost[pos];
    int cap = static_cast<int>((sh_.bound - used + kBudgetSlack) / cost);
    if (sh_.opt.entry_cap > 0) cap = std::min(cap, sh_.opt.entry_cap);

    // Workers split the search at the root: worker w takes the values of
    // the first position congruent to w mod workers.
    const bool split = pos == 0 && sh_.opt.workers > 1;
    const int first = split ? id_ : 0;
    const int step = split ? sh_.opt.workers : 1;

    --row_left_[static_cast<std::size_t>(i)];
    --col_left_[static_cast<std::size_t>(j)];
    for (int v = first; v <= cap; v += step) {
      if (stopped()) break;
      const std::uint64_t seen =
          sh_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
      if (sh_.opt.node_budget != 0 && seen > sh_.opt.node_budget) {
        sh_.stop_budget.store(true, std::memory_order_relaxed);
        break;
      }
      Z_(i, j) = v;
      if (finished_lines_consistent(i, j)) descend(pos + 1, used + v * cost);
    }
    Z_(i, j) = 0;
    ++row_left_[static_cast<std::size_t>(i)];
    ++col_left_[static_cast<std::size_t>(j)];
  }

  // Once a row or column holds its final values, every fully determined
  // entry of S_L Z - Z S_R crossing it is checked. Anything worse than the
  // suspect window can never become a reported candidate.
  bool finished_lines_consistent(int i, int j) const {
    if (row_left_[static_cast<std::size_t>(i)] == 0) {
      for (int b = 0; b < sh_.R.n(); ++b) {
        if (col_left_[static_cast<std::size_t>(b)] == 0 &&
            entry_residual(i, b) > sh_.prune_tol) {
          return false;
        }
      }
    }
    if (col_left_[static_cast<std::size_t>(j)] == 0) {
      for (int a = 0; a < sh_.L.n(); ++a) {
        if (row_left_[static_cast<std::size_t>(a)] == 0 &&
            entry_residual(a, j) > sh_.prune_tol) {
          return false;
        }
      }
    }
    return true;
  }

  SearchShared& sh_;
  int id_;
  MatI Z_;
  std::vector<int> row_left_, col_left_;
};

}  // namespace detail

// Exhaustive search for nonnegative integer matrices Z with Z_00 = 1,
// S_L Z = Z S_R and T_L Z = Z T_R. Positions outside the T-compatible
// support are zero; the rest are filled by depth-first search in order of
// decreasing weight d_L(i) d_R(j) against the budget
//   sum_ij Z_ij d_L(i) d_R(j) = 1 / (S_L00 S_R00),
// which every solution meets exactly. Leaves within tol of S-commutation
// are solutions; leaves within kSuspectFactor * tol are reported as
// suspects rather than dropped.
inline EnumerationResult enumerate_invariants(const ModularData& L,
                                              const ModularData& R,
                                              EnumerationOptions opt = {}) {
  ensure_valid(L, std::max(opt.tol, kDefaultTol));
  ensure_valid(R, std::max(opt.tol, kDefaultTol));
  if (opt.workers < 1) {
    throw std::invalid_argument("enumerate_invariants: workers must be >= 1");
  }

  EnumerationResult res;
  res.bound = 1.0 / (L.S(0, 0).real() * R.S(0, 0).real());
  res.support = t_compatible_support(L, R, {opt.relaxed_t, opt.tol});
  if (opt.relaxed_t) {
    res.notes.push_back(
        "relaxed T matching: supports compare twists exp(2pi i h), central "
        "charges may differ mod 24");
    const double dc = std::fmod(std::fmod(L.c - R.c, 24.0) + 24.0, 24.0);
    if (std::min(dc, 24.0 - dc) > opt.tol) {
      res.notes.push_back("central charges differ by " + std::to_string(dc) +
                          " mod 24; strict T matching would reject these "
                          "pairings");
    }
  }

  const bool vacuum_ok =
      std::any_of(res.support.begin(), res.support.end(),
                  [](const auto& p) { return p.first == 0 && p.second == 0; });
  if (!vacuum_ok) {
    res.notes.push_back(
        "vacuum sectors are not T-compatible, so no coupling with Z_00 = 1 "
        "exists");
    return res;
  }

  detail::SearchShared sh{L, R, opt, {}, {}, quantum_dimensions(L),
                          quantum_dimensions(R)};
  sh.bound = res.bound;
  sh.prune_tol = opt.tol * kSuspectFactor;
  for (const auto& p : res.support) {
    if (p.first == 0 && p.second == 0) continue;
    sh.order.push_back(p);
  }
  std::sort(sh.order.begin(), sh.order.end(),
            [&](const std::pair<int, int>& a, const std::pair<int, int>& b) {
              const double ca = sh.dL[a.first] * sh.dR[a.second];
              const double cb = sh.dL[b.first] * sh.dR[b.second];
              if (ca != cb) return ca > cb;
              return a < b;
            });
  sh.cost.reserve(sh.order.size());
  for (const auto& [i, j] : sh.order) sh.cost.push_back(sh.dL[i] * sh.dR[j]);

  const int nw = opt.workers;
  std::vector<detail::SearchWorker> workers;
  workers.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) workers.emplace_back(sh, w);
  if (nw == 1) {
    workers[0].run();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(nw));
    for (auto& w : workers) threads.emplace_back([&w] { w.run(); });
    for (auto& t : threads) t.join();
  }

  for (auto& w : workers) {
    std::move(w.solutions.begin(), w.solutions.end(),
              std::back_inserter(res.solutions));
    std::move(w.suspects.begin(), w.suspects.end(),
              std::back_inserter(res.suspects));
  }
  std::sort(res.solutions.begin(), res.solutions.end(), detail::candidate_less);
  std::sort(res.suspects.begin(), res.suspects.end(), detail::candidate_less);

  res.nodes = sh.nodes.load();
  if (sh.stop_budget.load()) {
    res.complete = false;
    res.truncation_reason = "node budget exceeded";
  } else if (sh.stop_candidates.load()) {
    res.complete = false;
    res.truncation_reason = "candidate limit reached";
  }
  return res;
}

}  // namespace modinv
