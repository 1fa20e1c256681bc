#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace modinv;

TEST_CASE("level one fuses like a two-element group") {
  const FusionRing fr = verlinde_fusion(su2_modular_data(1));
  CHECK(fr.N(1, 1, 0) == 1);
  CHECK(fr.N(1, 1, 1) == 0);
  CHECK(fr.N(0, 1, 1) == 1);
  CHECK(fr.conj == std::vector<int>{0, 1});
}

TEST_CASE("level two middle sector squares to both ends") {
  const FusionRing fr = verlinde_fusion(su2_modular_data(2));
  CHECK(fr.N(1, 1, 0) == 1);
  CHECK(fr.N(1, 1, 2) == 1);
  CHECK(fr.N(1, 1, 1) == 0);
  CHECK(fr.N(2, 2, 0) == 1);
  CHECK(fr.N(2, 1, 1) == 1);
}

TEST_CASE("structure constants satisfy the ring axioms across levels") {
  for (int k = 1; k <= 16; ++k) {
    const ModularData md = su2_modular_data(k);
    const FusionRing fr = verlinde_fusion(md);
    INFO("level " << k);
    CHECK(is_associative(fr));
    CHECK_FALSE(find_associativity_violation(fr).has_value());

    const MatI C = charge_conjugation(md);
    for (int i = 0; i < fr.n; ++i) {
      for (int j = 0; j < fr.n; ++j) {
        CHECK(fr.N(i, j, 0) == C(i, j));
      }
    }

    const VecD d = quantum_dimensions(md);
    for (int i = 0; i < fr.n; ++i) {
      for (int j = 0; j < fr.n; ++j) {
        double acc = 0.0;
        for (int m = 0; m < fr.n; ++m) acc += fr.N(i, j, m) * d[m];
        CHECK(acc == Catch::Approx(d[i] * d[j]).margin(1e-9));
      }
    }
  }
}

TEST_CASE("conjugation structure survives a round trip through the tensor") {
  const FusionRing fr = verlinde_fusion(su2_modular_data(5));
  const FusionRing back = fusion_ring_from_tensor(fr.n, fr.tensor);
  CHECK(back.conj == fr.conj);
  CHECK(back.tensor == fr.tensor);
}

TEST_CASE("associativity violations are found and reported") {
  FusionRing fr = verlinde_fusion(su2_modular_data(3));
  std::vector<int> tensor = fr.tensor;
  // Bump N(1,2,1) symmetrically so the ring still passes the cheap
  // structural checks and only associativity can catch the corruption.
  tensor[static_cast<std::size_t>((1 * fr.n + 2) * fr.n + 1)] += 1;
  tensor[static_cast<std::size_t>((2 * fr.n + 1) * fr.n + 1)] += 1;
  const FusionRing bad = fusion_ring_from_tensor(fr.n, tensor);
  const auto violation = find_associativity_violation(bad);
  REQUIRE(violation.has_value());
  CHECK_FALSE(is_associative(bad));
}

TEST_CASE("a sector with a conjugate pair keeps conjugation an involution") {
  const FusionRing fr = verlinde_fusion(testutil::abelian_three());
  CHECK(fr.conj == std::vector<int>{0, 2, 1});
  CHECK(fr.N(1, 2, 0) == 1);
  CHECK(fr.N(1, 1, 2) == 1);
  CHECK(is_associative(fr));
}

TEST_CASE("non integral spectra are rejected") {
  ModularData md = su2_modular_data(2);
  md.S(1, 1) += 0.05;
  CHECK_THROWS_AS(verlinde_fusion(md), fusion_error);
}
