#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "modinv/fusion.hpp"
#include "modinv/modular_data.hpp"
#include "modinv/statistics.hpp"
#include "modinv/types.hpp"

namespace modinv {

using json = nlohmann::ordered_json;

// Complex values are stored as {re, im} objects; a complex matrix is an
// array of arrays of them. Field names are pinned in docs/formats.md.

namespace detail {

inline json complex_cell(const cplx& v) {
  json c;
  c["re"] = v.real();
  c["im"] = v.imag();
  return c;
}

inline cplx complex_cell_from_json(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") ||
      !j["re"].is_number() || !j["im"].is_number()) {
    throw parse_error(what + ": expected an {re, im} object");
  }
  return {j["re"].get<double>(), j["im"].get<double>()};
}

inline json complex_grid(const MatC& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_cell(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline MatC complex_grid_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw parse_error(what + ": expected an array of rows of {re, im}");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatC m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw parse_error(what + ": ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = complex_cell_from_json(row[static_cast<std::size_t>(k)], what);
    }
  }
  return m;
}

inline json complex_list(const VecC& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_cell(v[i]));
  }
  return out;
}

inline VecC complex_list_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) {
    throw parse_error(what + ": expected an array of {re, im}");
  }
  VecC v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_cell_from_json(j[i], what);
  }
  return v;
}

inline void expect_kind(const json& j, const std::string& kind) {
  if (!j.is_object()) throw parse_error("document is not a JSON object");
  if (j.contains("kind") && j["kind"] != kind) {
    throw parse_error("document kind is '" + j["kind"].get<std::string>() +
                      "', expected '" + kind + "'");
  }
}

}  // namespace detail

inline json to_json(const ModularData& md) {
  json j;
  j["kind"] = "modular_data";
  j["labels"] = md.labels;
  j["c"] = md.c;
  j["h"] = md.h;
  j["S"] = detail::complex_grid(md.S);
  j["T"] = detail::complex_list(md.t);
  return j;
}

inline ModularData modular_data_from_json(const json& j) {
  detail::expect_kind(j, "modular_data");
  if (!j.contains("c") || !j["c"].is_number()) {
    throw parse_error("modular_data: missing numeric c");
  }
  if (!j.contains("h") || !j["h"].is_array()) {
    throw parse_error("modular_data: missing h list");
  }
  if (!j.contains("S")) throw parse_error("modular_data: missing S");

  ModularData md;
  md.c = j["c"].get<double>();
  for (const json& x : j["h"]) {
    if (!x.is_number()) throw parse_error("modular_data: non-numeric h entry");
    md.h.push_back(x.get<double>());
  }
  md.S = detail::complex_grid_from_json(j["S"], "modular_data.S");
  const int n = md.n();
  if (md.S.rows() != n || md.S.cols() != n) {
    throw parse_error("modular_data: S shape does not match h");
  }
  if (j.contains("labels")) {
    if (!j["labels"].is_array() || static_cast<int>(j["labels"].size()) != n) {
      throw parse_error("modular_data: labels length does not match h");
    }
    for (const json& x : j["labels"]) {
      if (!x.is_string()) throw parse_error("modular_data: non-string label");
      md.labels.push_back(x.get<std::string>());
    }
  } else {
    for (int i = 0; i < n; ++i) md.labels.push_back(std::to_string(i));
  }
  if (j.contains("T")) {
    md.t = detail::complex_list_from_json(j["T"], "modular_data.T");
    if (md.t.size() != n) {
      throw parse_error("modular_data: T length does not match h");
    }
  } else {
    md.t = t_diagonal_from_weights(md.h, md.c);
  }
  return md;
}

// Loads and validates in one step, as documents from outside have no other
// guarantee of consistency.
inline ModularData load_modular_data(const json& j, double tol = kDefaultTol) {
  ModularData md = modular_data_from_json(j);
  ensure_valid(md, tol);
  return md;
}

// Coupling documents carry the integer matrix either as a dense "Z" grid
// (rows indexed by the left theory's sectors) or as a sparse "entries"
// list with a [rows, cols] "shape". Sparse entries are labeled by sector
// index ("weight", the default) or by spin j with index 2j ("spin").
inline json coupling_to_json(const MatI& Z) {
  json j;
  j["kind"] = "coupling";
  j["shape"] = {Z.rows(), Z.cols()};
  json rows = json::array();
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < Z.cols(); ++k) row.push_back(Z(i, k));
    rows.push_back(std::move(row));
  }
  j["Z"] = std::move(rows);
  return j;
}

struct CouplingDocument {
  MatI Z;
  bool spin_labeled = false;  // true when the document used spin labels
};

inline CouplingDocument coupling_from_json(const json& j) {
  detail::expect_kind(j, "coupling");
  CouplingDocument doc;
  if (j.contains("Z")) {
    const json& rows = j["Z"];
    if (!rows.is_array() || rows.empty()) {
      throw parse_error("coupling: Z must be a non-empty array of rows");
    }
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = static_cast<Eigen::Index>(rows[0].size());
    doc.Z = MatI(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != nc) {
        throw parse_error("coupling: ragged Z rows");
      }
      for (Eigen::Index k = 0; k < nc; ++k) {
        const json& cell = row[static_cast<std::size_t>(k)];
        if (!cell.is_number_integer() || cell.get<long long>() < 0) {
          throw parse_error(
              "coupling: Z entries must be nonnegative integers");
        }
        doc.Z(i, k) = static_cast<int>(cell.get<long long>());
      }
    }
    return doc;
  }

  if (!j.contains("entries")) {
    throw parse_error("coupling: need either a dense Z or an entries list");
  }
  if (!j.contains("shape") || !j["shape"].is_array() ||
      j["shape"].size() != 2 || !j["shape"][0].is_number_integer() ||
      !j["shape"][1].is_number_integer()) {
    throw parse_error("coupling: sparse entries need a [rows, cols] shape");
  }
  const auto nr = static_cast<Eigen::Index>(j["shape"][0].get<long long>());
  const auto nc = static_cast<Eigen::Index>(j["shape"][1].get<long long>());
  if (nr <= 0 || nc <= 0) throw parse_error("coupling: bad shape");

  const std::string labeling = j.value("labeling", std::string("weight"));
  if (labeling != "weight" && labeling != "spin") {
    throw parse_error("coupling: labeling must be 'weight' or 'spin'");
  }
  doc.spin_labeled = labeling == "spin";
  const auto index_of = [&](const json& v, const char* side) -> Eigen::Index {
    if (!v.is_number()) {
      throw parse_error(std::string("coupling: non-numeric ") + side +
                        " label");
    }
    const double raw = v.get<double>() * (doc.spin_labeled ? 2.0 : 1.0);
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9) {
      throw parse_error(std::string("coupling: ") + side +
                        (doc.spin_labeled ? " spin must be a half-integer"
                                          : " weight must be an integer"));
    }
    return static_cast<Eigen::Index>(rounded);
  };

  doc.Z = MatI::Zero(nr, nc);
  if (!j["entries"].is_array()) {
    throw parse_error("coupling: entries must be an array");
  }
  for (const json& e : j["entries"]) {
    if (!e.is_object() || !e.contains("left") || !e.contains("right")) {
      throw parse_error("coupling: each entry needs left and right labels");
    }
    const Eigen::Index r = index_of(e["left"], "left");
    const Eigen::Index c = index_of(e["right"], "right");
    if (r < 0 || r >= nr || c < 0 || c >= nc) {
      throw parse_error("coupling: entry label out of range");
    }
    const json v = e.value("value", json(1));
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw parse_error("coupling: entry values must be nonnegative integers");
    }
    doc.Z(r, c) = static_cast<int>(v.get<long long>());
  }
  return doc;
}

inline json fusion_to_json(const FusionRing& fr) {
  json tensor = json::array();
  for (int i = 0; i < fr.n; ++i) {
    json plane = json::array();
    for (int a = 0; a < fr.n; ++a) {
      json row = json::array();
      for (int k = 0; k < fr.n; ++k) row.push_back(fr.N(i, a, k));
      plane.push_back(std::move(row));
    }
    tensor.push_back(std::move(plane));
  }
  return tensor;
}

inline FusionRing fusion_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw parse_error(what + ": expected an n x n x n tensor");
  }
  const int n = static_cast<int>(j.size());
  std::vector<int> tensor(static_cast<std::size_t>(n) * n * n, 0);
  for (int i = 0; i < n; ++i) {
    const json& plane = j[static_cast<std::size_t>(i)];
    if (!plane.is_array() || static_cast<int>(plane.size()) != n) {
      throw parse_error(what + ": tensor is not cubical");
    }
    for (int a = 0; a < n; ++a) {
      const json& row = plane[static_cast<std::size_t>(a)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw parse_error(what + ": tensor is not cubical");
      }
      for (int k = 0; k < n; ++k) {
        const json& cell = row[static_cast<std::size_t>(k)];
        if (!cell.is_number_integer() || cell.get<long long>() < 0) {
          throw parse_error(
              what + ": multiplicities must be nonnegative integers");
        }
        tensor[static_cast<std::size_t>((i * n + a) * n + k)] =
            static_cast<int>(cell.get<long long>());
      }
    }
  }
  try {
    return fusion_ring_from_tensor(n, std::move(tensor));
  } catch (const fusion_error& e) {
    throw parse_error(what + ": " + e.what());
  }
}

// Statistics documents describe a sector system by its raw components:
// twists kappa, dimensions d, and fusion multiplicities N. The monodromies
// are rebuilt from exactly these, so a truncated system keeps its own
// arithmetic rather than inheriting an ambient theory's.
inline json statistics_to_json(const StatisticsData& sd,
                               const FusionRing& fr) {
  json j;
  j["kind"] = "statistics";
  j["kappa"] = detail::complex_list(sd.kappa);
  j["d"] = std::vector<double>(sd.d.data(), sd.d.data() + sd.d.size());
  j["N"] = fusion_to_json(fr);
  if (sd.c) j["c"] = *sd.c;
  return j;
}

struct StatisticsDocument {
  StatisticsData data;
  FusionRing ring;
};

inline StatisticsDocument statistics_from_json(const json& j,
                                               double tol = kDefaultTol) {
  detail::expect_kind(j, "statistics");
  if (!j.contains("kappa") || !j.contains("d") || !j.contains("N")) {
    throw parse_error("statistics: need kappa, d and N");
  }
  const VecC kappa =
      detail::complex_list_from_json(j["kappa"], "statistics.kappa");
  if (!j["d"].is_array() ||
      static_cast<Eigen::Index>(j["d"].size()) != kappa.size()) {
    throw parse_error("statistics: d length does not match kappa");
  }
  VecD d(kappa.size());
  for (std::size_t i = 0; i < j["d"].size(); ++i) {
    if (!j["d"][i].is_number()) {
      throw parse_error("statistics: non-numeric dimension");
    }
    d[static_cast<Eigen::Index>(i)] = j["d"][i].get<double>();
  }
  StatisticsDocument doc{{}, fusion_from_json(j["N"], "statistics.N")};
  if (doc.ring.n != kappa.size()) {
    throw parse_error("statistics: N shape does not match kappa");
  }
  std::optional<double> c;
  if (j.contains("c")) {
    if (!j["c"].is_number()) throw parse_error("statistics: non-numeric c");
    c = j["c"].get<double>();
  }
  try {
    doc.data = statistics_from_components(kappa, d, doc.ring, c, tol);
  } catch (const validation_error& e) {
    throw parse_error(std::string("statistics: ") + e.what());
  }
  return doc;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace modinv
