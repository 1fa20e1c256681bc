#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "golden.hpp"
#include "helpers.hpp"

using namespace modinv;

TEST_CASE("modular data survives a round trip") {
  const ModularData md = su2_modular_data(3);
  const json j = to_json(md);
  CHECK(j["kind"] == "modular_data");

  const ModularData back = modular_data_from_json(j);
  CHECK(back.labels == md.labels);
  CHECK(back.c == Catch::Approx(md.c));
  CHECK(back.h == md.h);
  CHECK(max_abs(MatC(back.S - md.S)) < 1e-15);
  CHECK(max_abs(VecC(back.t - md.t)) < 1e-15);
}

TEST_CASE("a missing T diagonal is rebuilt from the weights") {
  const ModularData md = su2_modular_data(7);
  json j = to_json(md);
  j.erase("T");
  const ModularData back = load_modular_data(j);
  CHECK(max_abs(VecC(back.t - md.t)) < 1e-12);
}

TEST_CASE("missing labels fall back to the sector index") {
  json j = to_json(su2_modular_data(2));
  j.erase("labels");
  const ModularData back = modular_data_from_json(j);
  CHECK(back.labels == std::vector<std::string>{"0", "1", "2"});
}

TEST_CASE("coupling matrices survive a dense round trip") {
  const MatI Z = testutil::to_eigen(golden::e6());
  const CouplingDocument doc = coupling_from_json(coupling_to_json(Z));
  CHECK(doc.Z == Z);
  CHECK_FALSE(doc.spin_labeled);
}

TEST_CASE("the bundled vacuum block file matches the in-code matrix") {
  const CouplingDocument doc =
      coupling_from_json(load_json_file("data/vacuum_block_k10.json"));
  CHECK(doc.spin_labeled);
  MatI expected = MatI::Zero(11, 11);
  expected(0, 0) = 1;
  expected(0, 6) = 1;
  expected(6, 0) = 1;
  expected(6, 6) = 1;
  CHECK(doc.Z == expected);
}

TEST_CASE("spin labels must be half integers") {
  json j;
  j["kind"] = "coupling";
  j["shape"] = {3, 3};
  j["labeling"] = "spin";
  j["entries"] = json::array({json{{"left", 0.25}, {"right", 0}}});
  CHECK_THROWS_AS(coupling_from_json(j), parse_error);

  j["labeling"] = "weight";
  j["entries"] = json::array({json{{"left", 0.5}, {"right", 0}}});
  CHECK_THROWS_AS(coupling_from_json(j), parse_error);
}

TEST_CASE("malformed documents are rejected with parse errors") {
  json wrong_kind;
  wrong_kind["kind"] = "coupling";
  CHECK_THROWS_AS(modular_data_from_json(wrong_kind), parse_error);

  json no_s;
  no_s["kind"] = "modular_data";
  no_s["c"] = 1.0;
  no_s["h"] = {0.0, 0.25};
  CHECK_THROWS_AS(modular_data_from_json(no_s), parse_error);

  json bad_cell = to_json(su2_modular_data(1));
  bad_cell["S"][0][0] = 0.5;
  CHECK_THROWS_AS(modular_data_from_json(bad_cell), parse_error);

  json negative;
  negative["kind"] = "coupling";
  negative["Z"] = {{1, 0}, {0, -1}};
  CHECK_THROWS_AS(coupling_from_json(negative), parse_error);

  json ragged;
  ragged["kind"] = "coupling";
  ragged["Z"] = json::array({json::array({1, 0}), json::array({0})});
  CHECK_THROWS_AS(coupling_from_json(ragged), parse_error);

  json neither;
  neither["kind"] = "coupling";
  neither["shape"] = {2, 2};
  CHECK_THROWS_AS(coupling_from_json(neither), parse_error);
}

TEST_CASE("fusion tensors survive a round trip") {
  const FusionRing fr = verlinde_fusion(su2_modular_data(4));
  const FusionRing back = fusion_from_json(fusion_to_json(fr), "test");
  CHECK(back.n == fr.n);
  CHECK(back.tensor == fr.tensor);
  CHECK(back.conj == fr.conj);
}

TEST_CASE("non cubical or negative tensors are parse errors") {
  json flat = json::array({json::array({1, 0}), json::array({0, 1})});
  CHECK_THROWS_AS(fusion_from_json(flat, "test"), parse_error);

  const FusionRing fr = verlinde_fusion(su2_modular_data(1));
  json j = fusion_to_json(fr);
  j[1][1][0] = -1;
  CHECK_THROWS_AS(fusion_from_json(j, "test"), parse_error);

  // A tensor without a unit sector is structurally bad, also a parse error.
  j[1][1][0] = 1;
  j[0][1][1] = 0;
  CHECK_THROWS_AS(fusion_from_json(j, "test"), parse_error);
}

TEST_CASE("statistics documents survive a round trip") {
  const ModularData md = su2_modular_data(3);
  const FusionRing fr = verlinde_fusion(md);
  const StatisticsData sd = statistics_from_modular_data(md, fr);

  const json j = statistics_to_json(sd, fr);
  CHECK(j["kind"] == "statistics");
  const StatisticsDocument doc = statistics_from_json(j);
  CHECK(doc.ring.tensor == fr.tensor);
  CHECK(max_abs(VecC(doc.data.kappa - sd.kappa)) < 1e-12);
  CHECK(max_abs(MatC(doc.data.Y - sd.Y)) < 1e-9);
  REQUIRE(doc.data.c.has_value());
  CHECK(*doc.data.c == Catch::Approx(md.c));
}

TEST_CASE("statistics component validation surfaces as a parse error") {
  const ModularData md = su2_modular_data(1);
  const FusionRing fr = verlinde_fusion(md);
  const StatisticsData sd = statistics_from_modular_data(md, fr);
  json j = statistics_to_json(sd, fr);
  j["d"][1] = -1.0;
  CHECK_THROWS_AS(statistics_from_json(j), parse_error);
}

TEST_CASE("the bundled three sector file validates and conjugates") {
  const ModularData md =
      load_modular_data(load_json_file("data/su3_level1.json"));
  const ModularData ref = testutil::abelian_three();
  CHECK(md.n() == 3);
  CHECK(max_abs(MatC(md.S - ref.S)) < 1e-12);
  const MatI C = charge_conjugation(md);
  CHECK(C != MatI::Identity(3, 3));
  CHECK(MatI(C * C) == MatI::Identity(3, 3));
}

TEST_CASE("documents pass through the filesystem unchanged") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "modinv_io_roundtrip.json";
  const json out = coupling_to_json(testutil::to_eigen(golden::e7()));
  save_json_file(path.string(), out);
  const json in = load_json_file(path.string());
  CHECK(in == out);
  fs::remove(path);

  CHECK_THROWS_AS(load_json_file((path / "missing").string()), parse_error);
}
