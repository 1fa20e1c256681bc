#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modinv/enumerate.hpp"
#include "modinv/fusion.hpp"
#include "modinv/invariants.hpp"
#include "modinv/io.hpp"
#include "modinv/modular_data.hpp"
#include "modinv/statistics.hpp"
#include "modinv/structure.hpp"
#include "modinv/types.hpp"

namespace modinv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;     // parse and validation failures
inline constexpr int kExitBudget = 3;    // a search ran out of budget
inline constexpr int kExitInternal = 4;  // internal consistency failure

struct RunConfig {
  std::string command;
  int su2_left = 0;  // 0 means "not a built-in algebra"
  int su2_right = 0;
  std::string left_path;
  std::string right_path;
  std::vector<std::string> matrix_paths;
  double tol = kDefaultTol;
  std::string out_path;  // empty writes to the stream handed to run()
  std::string format = "structured";
  bool relaxed_t = false;
  int workers = 1;
  std::uint64_t node_budget = 0;
  int entry_cap = 0;
  int max_blocks = 8;
};

namespace detail {

struct Side {
  ModularData md;
  std::string desc;
};

inline Side load_side(int su2, const std::string& path, double tol,
                      const char* which) {
  if (su2 > 0 && !path.empty()) {
    throw std::invalid_argument(std::string(which) +
                                " side given both --su2 and a file path");
  }
  if (su2 > 0) {
    return {su2_modular_data(su2), "su2:" + std::to_string(su2)};
  }
  if (!path.empty()) {
    return {load_modular_data(load_json_file(path), tol), path};
  }
  throw std::invalid_argument(std::string(which) + " algebra not specified");
}

inline const char* verdict(bool pass) { return pass ? "pass" : "fail"; }

// Residuals can be infinite (undefined Y normalization); JSON has no
// encoding for that, so they serialize as null and the verdict field
// carries the failure.
inline json residual(double v) {
  if (!std::isfinite(v)) return json(nullptr);
  return json(v);
}

inline json int_grid(const MatI& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json coupling_json(const CouplingReport& r) {
  json j;
  j["verdict"] = verdict(r.pass());
  j["s_part"] = verdict(r.s_pass);
  j["t_part"] = verdict(r.t_pass);
  j["s_residual"] = residual(r.s_residual);
  j["t_residual"] = residual(r.t_residual);
  return j;
}

inline json symmetry_json(const StatisticsSymmetryReport& r) {
  json j;
  j["verdict"] = verdict(r.pass());
  j["x_part"] = verdict(r.x_pass);
  j["y_part"] = verdict(r.y_pass);
  j["x_residual"] = residual(r.x_residual);
  j["y_residual"] = residual(r.y_residual);
  j["lambda_left"] = r.lambda_left;
  j["lambda_right"] = r.lambda_right;
  return j;
}

inline json factorization_json(const BlockFactorization& f) {
  json j;
  j["blocks"] = static_cast<int>(f.blocks.size());
  j["type_one"] = f.type_one;
  if (f.sigma) {
    j["sigma"] = *f.sigma;
  } else {
    j["sigma"] = nullptr;
  }
  j["b_left"] = int_grid(f.b_left);
  j["zmax"] = int_grid(f.zmax);
  j["b_right"] = int_grid(f.b_right);
  return j;
}

inline const char* search_status_name(BlockSearchStatus s) {
  switch (s) {
    case BlockSearchStatus::found: return "found";
    case BlockSearchStatus::none: return "none";
    case BlockSearchStatus::undecided: return "undecided";
  }
  return "none";
}

inline json classification_json(const ClassificationReport& r) {
  json j;
  j["modular_invariant"] = coupling_json(r.modular_invariant);
  j["statistics_symmetry"] = symmetry_json(r.statistics_symmetry);
  j["normal"] = r.normal;
  j["type_tag"] = to_string(r.type_tag);
  if (r.ade) {
    j["ade_name"] = *r.ade;
  } else {
    j["ade_name"] = nullptr;
  }
  if (r.factorization) {
    j["factorization"] = factorization_json(*r.factorization);
  } else {
    j["factorization"] = nullptr;
  }
  j["search_status"] = search_status_name(r.search_status);
  j["notes"] = r.notes;
  return j;
}

// The loaded coupling plus the bookkeeping the report wants to show.
struct LoadedMatrix {
  MatI Z;
  std::string path;
  bool spin_converted = false;
};

inline std::vector<LoadedMatrix> load_matrices(const RunConfig& cfg,
                                               const ModularData& L,
                                               const ModularData& R) {
  if (cfg.matrix_paths.empty()) {
    throw std::invalid_argument("no --matrix file given");
  }
  std::vector<LoadedMatrix> out;
  for (const auto& path : cfg.matrix_paths) {
    CouplingDocument doc = coupling_from_json(load_json_file(path));
    if (doc.Z.rows() != L.n() || doc.Z.cols() != R.n()) {
      throw parse_error("coupling matrix in " + path + " is " +
                        std::to_string(doc.Z.rows()) + "x" +
                        std::to_string(doc.Z.cols()) +
                        " but the algebras have " + std::to_string(L.n()) +
                        " and " + std::to_string(R.n()) + " sectors");
    }
    out.push_back({std::move(doc.Z), path, doc.spin_labeled});
  }
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

// Fixed-width text table; lossy by design and says so.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << std::left << std::setw(static_cast<int>(width[c]) + 2)
         << cells[c];
    }
    os << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  os << "(table output is lossy; use --format structured for the full "
        "report)\n";
  return os.str();
}

inline void emit_text(const RunConfig& cfg, const std::string& text,
                      std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) {
    throw std::invalid_argument("cannot open output file " + cfg.out_path);
  }
  f << text;
}

inline void emit(const RunConfig& cfg, const json& doc, std::ostream& out) {
  emit_text(cfg, doc.dump(2) + "\n", out);
}

inline std::string level_label(const RunConfig& cfg) {
  if (cfg.su2_left > 0) return std::to_string(cfg.su2_left);
  return "-";
}

}  // namespace detail

// Executes one parsed command against the given output stream. Returns the
// process exit code; all artifacts are written before returning.
inline int run(const RunConfig& cfg, std::ostream& out,
               std::ostream& err = std::cerr) {
  using namespace detail;
  try {
    if (cfg.format != "structured" && cfg.format != "table") {
      throw std::invalid_argument("unknown format " + cfg.format);
    }
    if (cfg.tol <= 0.0) {
      throw std::invalid_argument("tolerance must be positive");
    }

    const Side left = load_side(cfg.su2_left, cfg.left_path, cfg.tol, "left");
    const Side right =
        (cfg.su2_right > 0 || !cfg.right_path.empty())
            ? load_side(cfg.su2_right, cfg.right_path, cfg.tol, "right")
            : left;

    // The data-producing commands emit the document itself, so their
    // output feeds straight back into --left and --matrix workflows.
    if (cfg.command == "gen") {
      ensure_valid(left.md, cfg.tol);
      if (cfg.format == "table") {
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < left.md.n(); ++i) {
          rows.push_back({left.md.labels[static_cast<std::size_t>(i)],
                          format_double(left.md.h[static_cast<std::size_t>(i)]),
                          format_double(std::abs(left.md.S(0, i)))});
        }
        emit_text(cfg,
                  "modular data " + left.desc + " (c = " +
                      format_double(left.md.c) + ")\n" +
                      render_table({"sector", "h", "|S_0i|"}, rows),
                  out);
        return kExitOk;
      }
      emit(cfg, to_json(left.md), out);
      return kExitOk;
    }

    if (cfg.command == "fusion") {
      const FusionRing fr = verlinde_fusion(left.md, cfg.tol);
      if (cfg.format == "table") {
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < fr.n; ++i) {
          for (int j = 0; j < fr.n; ++j) {
            for (int k = 0; k < fr.n; ++k) {
              if (fr.N(i, j, k) != 0) {
                rows.push_back({std::to_string(i), std::to_string(j),
                                std::to_string(k),
                                std::to_string(fr.N(i, j, k))});
              }
            }
          }
        }
        emit_text(cfg,
                  "fusion rules " + left.desc + "\n" +
                      render_table({"i", "j", "k", "N"}, rows),
                  out);
        return kExitOk;
      }
      emit(cfg, fusion_to_json(fr), out);
      return kExitOk;
    }

    if (cfg.command == "stats") {
      const FusionRing fr = verlinde_fusion(left.md, cfg.tol);
      const StatisticsData sd = statistics_from_modular_data(left.md, fr);
      if (cfg.format == "table") {
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < sd.n(); ++i) {
          rows.push_back({left.md.labels[static_cast<std::size_t>(i)],
                          format_double(sd.d[i]),
                          format_double(std::arg(sd.kappa[i]))});
        }
        emit_text(cfg,
                  "statistics data " + left.desc + " (|z| = " +
                      format_double(std::abs(sd.z)) + ", w = " +
                      format_double(sd.w) + ")\n" +
                      render_table({"sector", "d", "arg kappa"}, rows),
                  out);
        return kExitOk;
      }
      emit(cfg, statistics_to_json(sd, fr), out);
      return kExitOk;
    }

    // The remaining commands produce one report document per run.
    json report;
    report["kind"] = "report";
    report["command"] = cfg.command;
    report["left"] = left.desc;
    report["right"] = right.desc;
    json config;
    config["tolerance"] = cfg.tol;
    config["relaxed_t"] = cfg.relaxed_t;
    config["node_budget"] = cfg.node_budget;
    config["entry_cap"] = cfg.entry_cap;
    config["max_blocks"] = cfg.max_blocks;
    report["config"] = std::move(config);
    json notes = json::array();

    const FusionRing frL = verlinde_fusion(left.md, cfg.tol);
    const FusionRing frR = verlinde_fusion(right.md, cfg.tol);
    const StatisticsData sdL = statistics_from_modular_data(left.md, frL);
    const StatisticsData sdR = statistics_from_modular_data(right.md, frR);
    BlockSearchOptions bopt;
    bopt.max_blocks = cfg.max_blocks;
    bopt.tol = cfg.tol;

    int code = kExitOk;
    json results = json::array();

    if (cfg.command == "enumerate") {
      EnumerationOptions eo;
      eo.tol = cfg.tol;
      eo.relaxed_t = cfg.relaxed_t;
      eo.workers = cfg.workers;
      eo.entry_cap = cfg.entry_cap;
      eo.node_budget = cfg.node_budget;
      const EnumerationResult res =
          enumerate_invariants(left.md, right.md, eo);
      for (const auto& n : res.notes) notes.push_back(n);
      report["bound"] = res.bound;
      report["support_size"] = res.support.size();
      report["nodes"] = res.nodes;
      report["complete"] = res.complete;
      if (!res.complete) report["truncation_reason"] = res.truncation_reason;

      if (res.complete) {
        // Conjugation carries solutions to solutions; a complete list that
        // is not closed under it means the search itself is broken.
        const MatI CL = charge_conjugation(left.md);
        const MatI CR = charge_conjugation(right.md);
        const auto present = [&res](const MatI& Z) {
          Candidate probe;
          probe.Z = Z;
          return std::binary_search(res.solutions.begin(),
                                    res.solutions.end(), probe,
                                    ::modinv::detail::candidate_less);
        };
        for (const auto& sol : res.solutions) {
          if (!present(MatI(CL * sol.Z)) || !present(MatI(sol.Z * CR))) {
            throw internal_error(
                "enumeration output is not closed under charge "
                "conjugation");
          }
        }
      }

      for (const auto& sol : res.solutions) {
        const ClassificationReport cls =
            classify(sol.Z, left.md, right.md, frL, frR, sdL, sdR, cfg.tol,
                     bopt);
        json entry;
        entry["Z"] = int_grid(sol.Z);
        entry["s_residual"] = residual(sol.s_residual);
        entry["t_residual"] = residual(sol.t_residual);
        entry["classification"] = classification_json(cls);
        results.push_back(std::move(entry));
      }
      json suspects = json::array();
      for (const auto& sus : res.suspects) {
        json entry;
        entry["Z"] = int_grid(sus.Z);
        entry["s_residual"] = residual(sus.s_residual);
        entry["t_residual"] = residual(sus.t_residual);
        suspects.push_back(std::move(entry));
      }
      report["suspects"] = std::move(suspects);
      if (!res.complete) {
        code = kExitBudget;
        report["error"] = {{"code", code},
                           {"message", "search truncated: " +
                                           res.truncation_reason}};
      }
    } else if (cfg.command == "check") {
      const auto matrices = load_matrices(cfg, left.md, right.md);
      for (const auto& m : matrices) {
        if (m.spin_converted) {
          notes.push_back("matrix " + m.path +
                          ": spin labels converted to weight labels");
        }
        const CouplingReport inv =
            check_modular_invariance(left.md, m.Z, right.md, cfg.tol);
        const StatisticsSymmetryReport sym =
            check_statistics_symmetry(sdL, sdR, m.Z, cfg.tol);
        const NormalityReport norm = check_normality(m.Z);
        json entry;
        entry["matrix"] = m.path;
        entry["modular_invariant"] = verdict(inv.pass());
        entry["s_part"] = verdict(inv.s_pass);
        entry["t_part"] = verdict(inv.t_pass);
        entry["s_residual"] = residual(inv.s_residual);
        entry["t_residual"] = residual(inv.t_residual);
        entry["x_part"] = verdict(sym.x_pass);
        entry["y_part"] = verdict(sym.y_pass);
        entry["x_residual"] = residual(sym.x_residual);
        entry["y_residual"] = residual(sym.y_residual);
        entry["lambda_left"] = sym.lambda_left;
        entry["lambda_right"] = sym.lambda_right;
        entry["normal"] = norm.pass();
        results.push_back(std::move(entry));
      }
    } else if (cfg.command == "classify") {
      const auto matrices = load_matrices(cfg, left.md, right.md);
      for (const auto& m : matrices) {
        if (m.spin_converted) {
          notes.push_back("matrix " + m.path +
                          ": spin labels converted to weight labels");
        }
        const ClassificationReport cls = classify(
            m.Z, left.md, right.md, frL, frR, sdL, sdR, cfg.tol, bopt);
        json entry;
        entry["matrix"] = m.path;
        json body = classification_json(cls);
        for (auto& [key, value] : body.items()) {
          entry[key] = std::move(value);
        }
        results.push_back(std::move(entry));
        if (cls.search_status == BlockSearchStatus::undecided) {
          code = kExitBudget;
        }
      }
      if (code == kExitBudget) {
        report["error"] = {
            {"code", code},
            {"message", "block structure search ran out of budget"}};
      }
    } else {
      throw std::invalid_argument("unknown command " + cfg.command);
    }

    report["notes"] = std::move(notes);
    report["results"] = std::move(results);

    if (cfg.format == "table") {
      std::vector<std::string> header;
      std::vector<std::vector<std::string>> rows;
      const auto opt_str = [](const json& v) {
        return v.is_null() ? std::string("-") : v.get<std::string>();
      };
      if (cfg.command == "enumerate") {
        header = {"level", "type_tag", "ade_name", "normal", "x_part",
                  "y_part"};
        for (const auto& entry : report["results"]) {
          const auto& cls = entry["classification"];
          rows.push_back(
              {level_label(cfg), cls["type_tag"].get<std::string>(),
               opt_str(cls["ade_name"]),
               cls["normal"].get<bool>() ? "true" : "false",
               cls["statistics_symmetry"]["x_part"].get<std::string>(),
               cls["statistics_symmetry"]["y_part"].get<std::string>()});
        }
      } else if (cfg.command == "check") {
        header = {"matrix", "modular_invariant", "x_part", "y_part",
                  "normal"};
        for (const auto& entry : report["results"]) {
          rows.push_back({entry["matrix"].get<std::string>(),
                          entry["modular_invariant"].get<std::string>(),
                          entry["x_part"].get<std::string>(),
                          entry["y_part"].get<std::string>(),
                          entry["normal"].get<bool>() ? "true" : "false"});
        }
      } else {
        header = {"level", "type_tag", "ade_name", "normal", "x_part",
                  "y_part"};
        for (const auto& entry : report["results"]) {
          rows.push_back(
              {level_label(cfg), entry["type_tag"].get<std::string>(),
               opt_str(entry["ade_name"]),
               entry["normal"].get<bool>() ? "true" : "false",
               entry["statistics_symmetry"]["x_part"].get<std::string>(),
               entry["statistics_symmetry"]["y_part"].get<std::string>()});
        }
      }
      emit_text(cfg, render_table(header, rows), out);
    } else {
      emit(cfg, report, out);
    }
    return code;
  } catch (const internal_error& e) {
    json doc{{"kind", "error"},
             {"command", cfg.command},
             {"error", {{"code", kExitInternal}, {"message", e.what()}}}};
    detail::emit(cfg, doc, out);
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    // Everything else that can go wrong here is bad input of one flavor or
    // another: unreadable files, malformed documents, data failing
    // validation.
    json doc{{"kind", "error"},
             {"command", cfg.command},
             {"error", {{"code", kExitUsage}, {"message", e.what()}}}};
    detail::emit(cfg, doc, out);
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

// Builds the CLI11 command tree, parses argv, and dispatches to run().
inline int run_main(int argc, const char* const* argv,
                    std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"modular invariants of chiral sector data"};
  app.require_subcommand(1);

  const auto add_common = [&cfg](CLI::App* sc) {
    sc->add_option("--su2", cfg.su2_left,
                   "built-in su(2) current algebra at this level");
    sc->add_option("--su2-right", cfg.su2_right,
                   "built-in su(2) level for the right side");
    sc->add_option("--left", cfg.left_path, "modular data file, left side");
    sc->add_option("--right", cfg.right_path,
                   "modular data file, right side (defaults to left)");
    sc->add_option("--tol", cfg.tol, "numerical tolerance");
    sc->add_option("--out", cfg.out_path, "write output here instead of stdout");
    sc->add_option("--format", cfg.format, "structured | table");
  };

  CLI::App* gen = app.add_subcommand("gen", "emit a modular data document");
  CLI::App* fusion =
      app.add_subcommand("fusion", "emit the Verlinde fusion rules");
  CLI::App* stats =
      app.add_subcommand("stats", "emit the statistics data document");
  CLI::App* enumerate =
      app.add_subcommand("enumerate", "list all modular invariants");
  CLI::App* check =
      app.add_subcommand("check", "test coupling matrices from files");
  CLI::App* classify =
      app.add_subcommand("classify", "classify coupling matrices from files");
  for (CLI::App* sc : {gen, fusion, stats, enumerate, check, classify}) {
    add_common(sc);
  }
  enumerate->add_flag("--relaxed-t", cfg.relaxed_t,
                      "match twists instead of T eigenvalues");
  enumerate->add_option("--workers", cfg.workers, "parallel search workers");
  enumerate->add_option("--node-budget", cfg.node_budget,
                        "abort the search after this many nodes");
  enumerate->add_option("--entry-cap", cfg.entry_cap,
                        "extra per-entry bound on coupling entries");
  for (CLI::App* sc : {check, classify}) {
    sc->add_option("--matrix", cfg.matrix_paths,
                   "coupling matrix document (repeatable)")
        ->required();
  }
  classify->add_option("--max-blocks", cfg.max_blocks,
                       "block search depth limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace modinv::cli
