#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"

using namespace modinv;

namespace {

// Z2 group ring: the only nontrivial fusion is 1 x 1 = 0.
FusionRing z2_ring() {
  std::vector<int> tensor(8, 0);
  auto at = [&](int i, int j, int k) -> int& {
    return tensor[static_cast<std::size_t>((i * 2 + j) * 2 + k)];
  };
  at(0, 0, 0) = 1;
  at(0, 1, 1) = 1;
  at(1, 0, 1) = 1;
  at(1, 1, 0) = 1;
  return fusion_ring_from_tensor(2, std::move(tensor));
}

StatisticsData full_statistics(int k) {
  const ModularData md = su2_modular_data(k);
  return statistics_from_modular_data(md, verlinde_fusion(md));
}

}  // namespace

TEST_CASE("level two monodromy matrix by hand") {
  const StatisticsData sd = full_statistics(2);
  const cplx kappa1 = std::exp(cplx(0.0, 2.0 * std::numbers::pi * 3.0 / 16.0));

  REQUIRE(sd.n() == 3);
  CHECK(std::abs(sd.kappa[0] - 1.0) < 1e-12);
  CHECK(std::abs(sd.kappa[1] - kappa1) < 1e-12);
  CHECK(std::abs(sd.kappa[2] + 1.0) < 1e-12);
  CHECK(sd.d[0] == Catch::Approx(1.0));
  CHECK(sd.d[1] == Catch::Approx(std::sqrt(2.0)));
  CHECK(sd.d[2] == Catch::Approx(1.0));

  MatC expected(3, 3);
  const double r2 = std::sqrt(2.0);
  expected << 1.0, r2, 1.0, r2, 0.0, -r2, 1.0, -r2, 1.0;
  CHECK(max_abs(MatC(sd.Y - expected)) < 1e-12);

  CHECK(sd.w == Catch::Approx(4.0));
  CHECK(std::abs(sd.z - 2.0 * kappa1) < 1e-12);
  CHECK(std::abs(std::abs(sd.z) - 2.0) < 1e-12);
  CHECK_FALSE(sd.degenerate);
}

TEST_CASE("monodromy relations hold across levels") {
  for (int k = 1; k <= 16; ++k) {
    const StatisticsData sd = full_statistics(k);
    const auto rep = verify_statistics_relations(sd);
    INFO("level " << k << " hexagon " << rep.hexagon_residual << " gauss "
                  << rep.gauss_residual);
    CHECK(rep.pass);
    CHECK(rep.max_matrix_residual() <= 1e-9);
    CHECK(rep.gauss_residual <= 1e-6);
  }
}

TEST_CASE("Y is the rescaled S matrix and carries the dimensions") {
  for (int k : {1, 2, 5, 10, 16}) {
    const ModularData md = su2_modular_data(k);
    const StatisticsData sd =
        statistics_from_modular_data(md, verlinde_fusion(md));
    INFO("level " << k);
    CHECK(max_abs(MatC(sd.Y - std::sqrt(sd.w) * md.S)) < 1e-9);
    for (int i = 0; i < sd.n(); ++i) {
      CHECK(std::abs(sd.Y(0, i) - sd.d[i]) < 1e-9);
    }
    const MatC gram = sd.Y * sd.Y.adjoint();
    CHECK(max_abs(MatC(gram - sd.w * MatC::Identity(sd.n(), sd.n()))) < 1e-9);
  }
}

TEST_CASE("the statistics operators recover S and T") {
  for (int k = 1; k <= 16; ++k) {
    const ModularData md = su2_modular_data(k);
    const StatisticsData sd =
        statistics_from_modular_data(md, verlinde_fusion(md));
    const StatisticsRepresentation rep = statistics_representation(sd);
    INFO("level " << k);
    CHECK(max_abs(MatC(rep.S - md.S)) < 1e-9);
    CHECK(max_abs(MatC(rep.T - md.T())) < 1e-9);
    const auto sl2z = verify_sl2z_relations(rep.S, rep.T);
    CHECK(sl2z.pass);
  }
}

TEST_CASE("the cube root branch follows the declared central charge") {
  const ModularData md = su2_modular_data(1);
  const StatisticsData honest =
      statistics_from_modular_data(md, verlinde_fusion(md));
  const cplx honest_root = statistics_representation(honest).root;
  CHECK(std::abs(honest_root -
                 std::exp(cplx(0.0, 2.0 * std::numbers::pi / 24.0))) < 1e-12);

  // Declaring c = 17 shifts the preferred branch by two thirds of a turn.
  StatisticsData shifted = honest;
  shifted.c = 17.0;
  const cplx shifted_root = statistics_representation(shifted).root;
  CHECK(std::abs(shifted_root -
                 std::exp(cplx(0.0, 2.0 * std::numbers::pi * 17.0 / 24.0))) <
        1e-12);
}

TEST_CASE("trivial twists on a two element ring are degenerate") {
  VecC kappa(2);
  kappa << 1.0, 1.0;
  VecD d(2);
  d << 1.0, 1.0;
  const StatisticsData sd = statistics_from_components(kappa, d, z2_ring());
  CHECK(sd.degenerate);
  CHECK(sd.sigma_min < 1e-12);
  MatC expected(2, 2);
  expected << 1.0, 1.0, 1.0, 1.0;
  CHECK(max_abs(MatC(sd.Y - expected)) < 1e-12);
  CHECK_THROWS_AS(statistics_representation(sd), degeneracy_error);
}

TEST_CASE("component input is validated") {
  const FusionRing ring = z2_ring();
  VecD d(2);
  d << 1.0, 1.0;

  VecC off_circle(2);
  off_circle << 1.0, cplx(0.5, 0.0);
  CHECK_THROWS_AS(statistics_from_components(off_circle, d, ring),
                  validation_error);

  VecC twisted_vacuum(2);
  twisted_vacuum << std::exp(cplx(0.0, 0.3)), 1.0;
  CHECK_THROWS_AS(statistics_from_components(twisted_vacuum, d, ring),
                  validation_error);

  VecC ok(2);
  ok << 1.0, -1.0;
  VecD negative(2);
  negative << 1.0, -2.0;
  CHECK_THROWS_AS(statistics_from_components(ok, negative, ring),
                  validation_error);
}

TEST_CASE("a closed subsystem restricts consistently") {
  const ModularData md = su2_modular_data(4);
  const FusionRing fr = verlinde_fusion(md);
  const StatisticsData sub = statistics_from_modular_data(md, fr, {0, 4});
  CHECK(sub.closed);
  REQUIRE(sub.conj.has_value());

  VecC kappa(2);
  kappa << 1.0, 1.0;
  VecD d(2);
  d << 1.0, 1.0;
  const StatisticsData built = statistics_from_components(kappa, d, z2_ring());
  CHECK(max_abs(MatC(sub.Y - built.Y)) < 1e-9);
  CHECK(sub.degenerate);
  CHECK(built.degenerate);
}

TEST_CASE("a non closed subsystem is flagged") {
  const ModularData md = su2_modular_data(10);
  const FusionRing fr = verlinde_fusion(md);
  const StatisticsData sub = statistics_from_modular_data(md, fr, {0, 6});
  CHECK_FALSE(sub.closed);
}
