// tcmap: command-line front end for the rank, free-group, cup-length,
// bounds and planner engines.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tcmap/tcmap.hpp"

namespace {

using tcmap::io::json;

enum Exit : int { kOk = 0, kValidation = 1, kParse = 2, kContradiction = 3, kUnsupported = 4 };

struct Globals {
  bool json_out = false;
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_rank(const Globals& g, const std::string& file) {
  const tcmap::IntMatrix m = tcmap::io::matrix_from_json(tcmap::io::read_json_file(file));
  const tcmap::SmithForm snf = tcmap::smith_normal_form(m);
  std::size_t r = 0;
  json invariants = json::array();
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) {
    const tcmap::BigInt& d = snf.diagonal(i, i);
    if (d != 0) {
      ++r;
      invariants.push_back(d.str());
    }
  }
  if (g.json_out) {
    emit({{"rank", r},
          {"cat", r},
          {"TC", r},
          {"invariant_factors", invariants},
          {"reason", "for a homomorphism of free abelian groups, cat(f) = TC(f) = rank(f)"}});
  } else {
    std::cout << "rank " << r << "; cat(f)=TC(f)=" << r << "\n";
    std::cout << "  invariant factors:";
    for (const auto& d : invariants) std::cout << " " << d.get<std::string>();
    std::cout << "\n  (homomorphisms of free abelian groups: cat(f) = TC(f) = rank f)\n";
  }
  return kOk;
}

int cmd_freehom(const Globals& g, const std::string& file) {
  const tcmap::FreeHom f = tcmap::io::hom_from_json(tcmap::io::read_json_file(file));
  const tcmap::FoldedGraph graph = tcmap::fold(f);
  const std::size_t r = graph.rank();
  const int cat = tcmap::cat_free_hom(f);
  const int tc = tcmap::tc_free_hom(f);
  if (g.json_out) {
    emit({{"image_rank", r},
          {"cat", cat},
          {"TC", tc},
          {"folded_vertices", graph.vertex_count()},
          {"folded_edges", graph.edges().size()},
          {"reason", "TC(f) = min{2, rank im f}; cat(f) = 0 for the trivial map and 1 otherwise"}});
  } else {
    std::cout << "image rank " << r << "\n";
    std::cout << "cat=" << cat << "\n";
    std::cout << "TC=" << tc << "\n";
  }
  return kOk;
}

int cmd_cuplength(const Globals& g, const std::string& alg_file, const std::string& map_file) {
  using namespace tcmap;
  if (map_file.empty()) {
    const GradedAlgebra a = io::algebra_from_json(io::read_json_file(alg_file));
    const ValidationReport report = validate_algebra(a);
    if (!report.ok()) {
      if (g.json_out) {
        emit({{"valid", false}, {"violations", io::violations_to_json(report, a)}});
      } else {
        std::cout << "invalid algebra:\n";
        for (const auto& v : report.violations) {
          std::cout << "  " << to_string(v.kind) << ":";
          for (std::size_t i : v.indices) std::cout << " " << a.basis()[i].name;
          std::cout << "\n";
        }
      }
      return kValidation;
    }
    const std::size_t zcl = zero_divisor_cuplength(a);
    if (g.json_out)
      emit({{"valid", true}, {"dimension", a.dim()}, {"field", a.field().name()}, {"zero_divisor_cuplength", zcl},
            {"bound", "TC(X) >= " + std::to_string(zcl)}});
    else
      std::cout << "zero-divisor cup-length " << zcl << "; TC(X) >= " << zcl << "\n";
    return kOk;
  }

  const std::filesystem::path map_path(map_file);
  const json mj = io::read_json_file(map_path);
  // Missing source/target default to the algebra file given on the command line.
  json filled = mj;
  const std::filesystem::path alg_abs = std::filesystem::absolute(alg_file);
  for (const char* key : {"source", "target"})
    if (!filled.contains(key)) filled[key] = alg_abs.string();
  const AlgebraMap phi = io::map_from_json(filled, io::file_resolver(map_path.parent_path()));
  ValidationReport report = validate_algebra(phi.source());
  for (const auto& v : validate_algebra(phi.target()).violations) report.violations.push_back(v);
  for (const auto& v : validate_map(phi).violations) report.violations.push_back(v);
  if (!report.ok()) {
    if (g.json_out) {
      json vs = json::array();
      for (const auto& v : report.violations) vs.push_back({{"axiom", to_string(v.kind)}, {"indices", v.indices}});
      emit({{"valid", false}, {"violations", vs}});
    } else {
      std::cout << "invalid input:\n";
      for (const auto& v : report.violations) std::cout << "  " << to_string(v.kind) << "\n";
    }
    return kValidation;
  }
  const std::size_t tc = tc_map_lower_bound(phi);
  const std::size_t cat = cat_map_lower_bound(phi);
  if (g.json_out)
    emit({{"valid", true}, {"tc_map_lower_bound", tc}, {"cat_map_lower_bound", cat},
          {"bounds", {"TC(f) >= " + std::to_string(tc), "cat(f) >= " + std::to_string(cat)}}});
  else
    std::cout << "tc_map_lower_bound " << tc << "; TC(f) >= " << tc << "\ncat_map_lower_bound " << cat
              << "; cat(f) >= " << cat << "\n";
  return kOk;
}

void print_table(const tcmap::FactStore& store) {
  using namespace tcmap;
  std::size_t width = 8;
  for (const auto& e : store.entities()) width = std::max(width, e.name.size() + 2);
  std::cout << std::left << std::setw(static_cast<int>(width)) << "entity";
  for (Quantity q : kAllQuantities) std::cout << std::setw(10) << to_string(q);
  std::cout << "\n";
  for (EntityId id = 0; id < store.entities().size(); ++id) {
    const Entity& e = store.entity(id);
    std::cout << std::setw(static_cast<int>(width)) << e.name;
    for (Quantity q : kAllQuantities) {
      const bool applies = e.is_map || q == Quantity::Cat || q == Quantity::TC;
      std::cout << std::setw(10) << (applies ? store.interval(id, q).to_string() : "-");
    }
    std::cout << "\n";
  }
}

int cmd_bounds(const Globals& g, const std::string& file, const std::string& explain, int cap_override) {
  using namespace tcmap;
  const std::filesystem::path path(file);
  const json j = io::read_json_file(path);
  FactStore store(cap_override >= 0 ? cap_override : io::fact_file_cap(j));

  std::optional<std::pair<EntityId, Quantity>> target;
  try {
    io::load_fact_file(store, j, path.parent_path());
    store.propagate();
    if (!explain.empty()) {
      const auto dot = explain.rfind('.');
      if (dot == std::string::npos) throw ParseError("--explain expects ENTITY.QUANTITY");
      target = {store.entity_id(explain.substr(0, dot)), parse_quantity(explain.substr(dot + 1))};
      store.interval(target->first, target->second);
    }
  } catch (const Contradiction& c) {
    if (g.json_out) {
      json facts = json::array();
      for (FactId id : c.conflicting()) facts.push_back(io::fact_to_json(store, id));
      json chains = json::array();
      for (FactId id : c.conflicting()) chains.push_back(store.explain_fact(id));
      emit({{"contradiction", c.what()}, {"conflicting", facts}, {"derivations", chains}});
    } else {
      std::cout << "contradiction: " << c.what() << "\n";
      for (FactId id : c.conflicting()) std::cout << store.explain_fact(id);
    }
    return kContradiction;
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }

  if (g.json_out) {
    json out = io::bounds_to_json(store);
    if (target) out["explain"] = store.explain(target->first, target->second);
    emit(out);
  } else if (target) {
    std::cout << store.explain(target->first, target->second);
  } else {
    print_table(store);
  }
  return kOk;
}

struct PlannerArgs {
  std::string name;
  int n = 1;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::size_t path_samples = 64;
  std::string emit_paths;
  std::string mode = "partition";
};

tcmap::Planner make_planner(const PlannerArgs& a) {
  if (a.name == "sphere" || a.name == "sphere-cover") return tcmap::sphere_cover_planner(a.n);
  if (a.name == "torus" || a.name == "torus-identity") return tcmap::torus_identity_planner(a.n);
  if (a.name == "circle" || a.name == "circle-identity") return tcmap::circle_identity_planner();
  throw tcmap::Unsupported("unknown planner '" + a.name + "' (expected sphere, torus or circle)");
}

int cmd_planner(const Globals& g, const PlannerArgs& a) {
  using namespace tcmap;
  const Planner p = make_planner(a);
  ValidationOptions opt;
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.tol = a.tol;
  opt.path_samples = a.path_samples;
  opt.mode = a.mode == "cover" ? CoverageMode::Cover : CoverageMode::Partition;

  std::ofstream csv;
  if (!a.emit_paths.empty()) {
    csv.open(a.emit_paths);
    if (!csv) throw ParseError("cannot write '" + a.emit_paths + "'");
    csv << std::setprecision(17) << "sample,domain_index,t";
    for (std::size_t i = 0; i < p.target.coordinate_dim(); ++i) csv << ",x" << i;
    csv << "\n";
    opt.on_path = [&csv, &a](std::size_t s, std::size_t d, const Path& path) {
      for (std::size_t k = 0; k < path.size(); ++k) {
        csv << s << "," << d << "," << static_cast<double>(k) / static_cast<double>(a.path_samples - 1);
        for (double x : path[k]) csv << "," << x;
        csv << "\n";
      }
    };
  }

  const PlannerReport r = validate_planner(p, opt);
  if (g.json_out) {
    emit(io::planner_report_to_json(r));
  } else {
    std::cout << "planner " << r.planner << ": " << r.domain_count << " domains, " << r.samples << " samples, K="
              << r.path_samples << "\n";
    std::cout << "  domain hits:";
    for (auto h : r.domain_hits) std::cout << " " << h;
    std::cout << "\n  coverage " << r.coverage() * 100.0 << "% (uncovered " << r.uncovered << ", overlapping "
              << r.overlapping << ")\n";
    std::cout << "  max endpoint error " << r.max_endpoint_error << "\n";
    std::cout << "  max step " << r.max_step << "\n";
    std::cout << "  digest " << std::hex << r.digest << std::dec << (r.deterministic ? " (deterministic)" : " (NOT deterministic)")
              << "\n";
    std::cout << (r.passed ? "PASS" : "FAIL") << "\n";
  }
  return r.passed ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tcmap: topological complexity of maps"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json_out, "machine-readable JSON output");

  std::string rank_file;
  auto* rank = app.add_subcommand("rank", "rank of an integer matrix, i.e. cat and TC of a map of free abelian groups");
  rank->add_option("FILE", rank_file, "matrix JSON")->required();

  std::string hom_file;
  auto* freehom = app.add_subcommand("freehom", "image rank, cat and TC of a free group homomorphism");
  freehom->add_option("FILE", hom_file, "homomorphism JSON")->required();

  std::string alg_file, map_file;
  auto* cup = app.add_subcommand("cuplength", "zero-divisor cup-length, or cup-length bounds for a map");
  cup->add_option("ALG", alg_file, "algebra JSON")->required();
  cup->add_option("--map", map_file, "map JSON (source/target default to ALG)");

  std::string facts_file, explain;
  int cap = -1;
  auto* bounds = app.add_subcommand("bounds", "propagate cat/TC bounds through a fact file");
  bounds->add_option("FACTS", facts_file, "fact file JSON")->required();
  bounds->add_option("--explain", explain, "print the derivation of ENTITY.QUANTITY");
  bounds->add_option("--cap", cap, "upper cap for all quantities")->check(CLI::NonNegativeNumber);

  PlannerArgs pa;
  auto* planner = app.add_subcommand("planner", "validate a motion planner on sampled pairs");
  planner->add_option("NAME", pa.name, "sphere, torus or circle")->required();
  planner->add_option("--n", pa.n, "dimension");
  planner->add_option("--samples", pa.samples, "number of sampled pairs");
  planner->add_option("--seed", pa.seed, "random seed");
  planner->add_option("--tol", pa.tol, "endpoint tolerance");
  planner->add_option("--emit-paths", pa.emit_paths, "write sampled paths to this CSV file");
  planner->add_option("--path-samples", pa.path_samples, "samples per path");
  planner->add_option("--mode", pa.mode, "partition or cover")->check(CLI::IsMember({"partition", "cover"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*rank) return cmd_rank(g, rank_file);
    if (*freehom) return cmd_freehom(g, hom_file);
    if (*cup) return cmd_cuplength(g, alg_file, map_file);
    if (*bounds) return cmd_bounds(g, facts_file, explain, cap);
    if (*planner) return cmd_planner(g, pa);
  } catch (const tcmap::Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const tcmap::Contradiction& e) {
    std::cerr << "contradiction: " << e.what() << "\n";
    return kContradiction;
  } catch (const tcmap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kParse;
}
