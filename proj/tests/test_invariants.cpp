#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "golden.hpp"
#include "helpers.hpp"

using namespace modinv;

namespace {

struct Theory {
  ModularData md;
  FusionRing fr;
  StatisticsData sd;
};

Theory theory(int k) {
  Theory t{su2_modular_data(k), {}, {}};
  t.fr = verlinde_fusion(t.md);
  t.sd = statistics_from_modular_data(t.md, t.fr);
  return t;
}

// Rank-one pairing of the vacuum block of the two-sector subsystem {0, 6}
// at level 10. T-compatible but not modular invariant.
MatI vacuum_block_coupling() {
  MatI Z = MatI::Zero(11, 11);
  Z(0, 0) = 1;
  Z(0, 6) = 1;
  Z(6, 0) = 1;
  Z(6, 6) = 1;
  return Z;
}

}  // namespace

TEST_CASE("mismatched central charges empty the strict support") {
  const ModularData L = su2_modular_data(1);
  const ModularData R = su2_modular_data(2);
  CHECK(t_compatible_support(L, R).empty());

  SupportOptions relaxed;
  relaxed.relaxed = true;
  const auto sup = t_compatible_support(L, R, relaxed);
  REQUIRE(sup.size() == 1);
  CHECK(sup[0] == std::pair<int, int>(0, 0));
}

TEST_CASE("integer spin pairs enter the support") {
  const ModularData md = su2_modular_data(4);
  const auto sup = t_compatible_support(md, md);
  const auto has = [&](int i, int j) {
    for (const auto& p : sup) {
      if (p.first == i && p.second == j) return true;
    }
    return false;
  };
  CHECK(has(0, 0));
  CHECK(has(0, 4));
  CHECK(has(4, 0));
  CHECK(has(4, 4));
  CHECK_FALSE(has(0, 1));
  CHECK_FALSE(has(1, 0));
}

TEST_CASE("the identity coupling is modular invariant at every level") {
  for (int k = 1; k <= 16; ++k) {
    const ModularData md = su2_modular_data(k);
    const MatI Z = MatI::Identity(md.n(), md.n());
    const CouplingReport rep = check_modular_invariance(md, Z, md);
    INFO("level " << k);
    CHECK(rep.pass());
    CHECK(rep.s_residual < 1e-12);
    CHECK(rep.t_residual < 1e-12);
  }
}

TEST_CASE("the vacuum block coupling commutes with T but not with S") {
  const ModularData md = su2_modular_data(10);
  const MatI Z = vacuum_block_coupling();
  const CouplingReport rep = check_modular_invariance(md, Z, md);
  CHECK(rep.t_pass);
  CHECK(rep.t_residual < 1e-12);
  CHECK_FALSE(rep.s_pass);
  CHECK(rep.s_residual ==
        Catch::Approx(0.7071067811865478).margin(1e-12));
}

TEST_CASE("the vacuum block coupling fails the Y half of the symmetry") {
  const Theory t = theory(10);
  const MatI Z = vacuum_block_coupling();

  const auto x = check_x_intertwining(t.sd, t.sd, Z);
  CHECK(x.pass);
  CHECK(x.residual < 1e-12);

  const auto sym = check_statistics_symmetry(t.sd, t.sd, Z);
  CHECK(sym.x_pass);
  CHECK_FALSE(sym.y_pass);
  CHECK(sym.lambda_left == Catch::Approx(4.732050807568877).margin(1e-12));
  CHECK(sym.lambda_right == Catch::Approx(4.732050807568877).margin(1e-12));
  CHECK(sym.y_residual ==
        Catch::Approx(1.4142135623730954).margin(1e-12));
}

TEST_CASE("genuine invariants satisfy both halves of the symmetry") {
  const Theory t = theory(10);
  for (const auto& z : golden::golden_set(10)) {
    const MatI Z = testutil::to_eigen(z);
    const auto sym = check_statistics_symmetry(t.sd, t.sd, Z);
    CHECK(sym.pass());
    CHECK(sym.x_residual < 1e-9);
    CHECK(sym.y_residual < 1e-9);
  }

  // The exceptional at level ten couples the vacuum to sector six, so its
  // index is 1 + d_6 on both sides.
  const MatI e6 = testutil::to_eigen(golden::e6());
  const auto sym = check_statistics_symmetry(t.sd, t.sd, e6);
  const double expected = 3.0 + std::sqrt(3.0);
  CHECK(sym.lambda_left == Catch::Approx(expected).margin(1e-12));
  CHECK(sym.lambda_right == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("a coupling that shifts the twist fails the X half") {
  const Theory t = theory(2);
  MatI Z = MatI::Zero(3, 3);
  Z(1, 0) = 1;
  const auto x = check_x_intertwining(t.sd, t.sd, Z);
  CHECK_FALSE(x.pass);
  CHECK(x.residual > 0.1);

  const auto sym = check_statistics_symmetry(t.sd, t.sd, Z);
  CHECK_FALSE(sym.x_pass);
  CHECK(std::isinf(sym.y_residual));
  CHECK_FALSE(sym.y_pass);
}

TEST_CASE("a vanishing index is reported, not thrown") {
  const Theory t = theory(1);
  const MatI Z = MatI::Zero(2, 2);
  const auto sym = check_statistics_symmetry(t.sd, t.sd, Z);
  CHECK(sym.x_pass);
  CHECK(std::isinf(sym.y_residual));
  CHECK_FALSE(sym.pass());
}

TEST_CASE("shape mismatches are rejected up front") {
  const ModularData L = su2_modular_data(1);
  const ModularData R = su2_modular_data(2);
  const MatI Z = MatI::Identity(2, 2);
  CHECK_THROWS_AS(check_modular_invariance(L, Z, R), std::invalid_argument);

  const Theory a = theory(1);
  const Theory b = theory(2);
  CHECK_THROWS_AS(check_statistics_symmetry(a.sd, b.sd, Z),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_x_intertwining(a.sd, b.sd, Z), std::invalid_argument);
}
