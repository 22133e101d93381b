#pragma once

// JSON readers and writers for matrices, homomorphisms, algebras, algebra
// maps and fact files.  Schema violations surface as ParseError.

#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcmap/bounds_engine.hpp"
#include "tcmap/exact_linalg.hpp"
#include "tcmap/free_group.hpp"
#include "tcmap/graded_algebra.hpp"
#include "tcmap/planner_lab.hpp"

namespace tcmap::io {

using json = nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

namespace detail {

inline const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

inline long long get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<long long>();
}

inline std::size_t get_count(const json& j, const std::string& where) {
  const long long v = get_int(j, where);
  if (v < 0) throw ParseError(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline const json& get_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  return j;
}

}  // namespace detail

/// Integer from a JSON integer or a decimal string such as "-12".
inline BigInt parse_bigint(const json& j, const std::string& where) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (!j.is_string()) throw ParseError(where + ": expected an integer or decimal string");
  static const std::regex re(R"(^[+-]?\d+$)");
  const std::string s = j.get<std::string>();
  if (!std::regex_match(s, re)) throw ParseError(where + ": '" + s + "' is not a decimal integer");
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

/// Rational from a JSON integer or a string "p" or "p/q".
inline Rational parse_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw ParseError(where + ": expected an integer or rational string");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_bigint(json(s), where));
  const BigInt num = parse_bigint(json(s.substr(0, slash)), where);
  const BigInt den = parse_bigint(json(s.substr(slash + 1)), where);
  if (den == 0) throw ParseError(where + ": zero denominator in '" + s + "'");
  return Rational(num, den);
}

inline std::string to_decimal(const BigInt& x) { return x.str(); }

inline std::string to_decimal(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

// -- integer matrices ---------------------------------------------------------

inline IntMatrix matrix_from_json(const json& j) {
  using namespace detail;
  const std::size_t rows = get_count(member(j, "rows", "matrix"), "matrix.rows");
  const std::size_t cols = get_count(member(j, "cols", "matrix"), "matrix.cols");
  const json& entries = get_array(member(j, "entries", "matrix"), "matrix.entries");
  if (entries.size() != rows) throw ParseError("matrix: expected " + std::to_string(rows) + " rows of entries");
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = get_array(entries[r], "matrix.entries[" + std::to_string(r) + "]");
    if (row.size() != cols) throw ParseError("matrix: row " + std::to_string(r) + " has the wrong length");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = parse_bigint(row[c], "matrix.entries[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

inline json matrix_to_json(const IntMatrix& m) {
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_decimal(m(r, c)));
    entries.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

// -- free group homomorphisms -------------------------------------------------

inline FreeHom hom_from_json(const json& j) {
  using namespace detail;
  const std::size_t n = get_count(member(j, "domain_rank", "homomorphism"), "domain_rank");
  const std::size_t m = get_count(member(j, "codomain_rank", "homomorphism"), "codomain_rank");
  const json& images = get_array(member(j, "images", "homomorphism"), "images");
  std::vector<std::vector<int>> letters;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    std::vector<int> w;
    for (const json& x : get_array(images[i], where)) w.push_back(static_cast<int>(get_int(x, where)));
    letters.push_back(std::move(w));
  }
  if (letters.size() != n)
    throw ParseError("homomorphism: " + std::to_string(letters.size()) + " images for domain rank " + std::to_string(n));
  return FreeHom::from_letters(n, m, letters);
}

inline json hom_to_json(const FreeHom& f) {
  json images = json::array();
  for (const Word& w : f.images()) images.push_back(w.letters());
  return {{"domain_rank", f.domain_rank()}, {"codomain_rank", f.codomain_rank()}, {"images", std::move(images)}};
}

// -- graded algebras ----------------------------------------------------------

inline Field field_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "Q") return Field::rationals();
    static const std::regex digits(R"(^\d{1,9}$)");
    if (!std::regex_match(s, digits)) throw ParseError("field: expected \"Q\" or a prime, got '" + s + "'");
    return Field::prime(std::stoll(s));
  }
  if (j.is_number_integer()) return Field::prime(j.get<long long>());
  throw ParseError("field: expected \"Q\" or a prime");
}

inline json field_to_json(const Field& f) {
  if (f.is_rational()) return "Q";
  return f.characteristic();
}

namespace detail {

inline SparseVector combination_from_json(const json& j, const GradedAlgebra* algebra,
                                          const std::vector<BasisElement>& basis, const std::string& where) {
  auto lookup = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].name == name) return i;
    throw ParseError(where + ": unknown basis element '" + name + "'");
  };
  SparseVector v;
  for (const json& term : get_array(j, where)) {
    const Rational c = parse_rational(member(term, "coeff", where), where + ".coeff");
    const std::size_t k = lookup(get_string(member(term, "basis", where), where + ".basis"));
    if (algebra) {
      algebra->accumulate(v, k, c);
    } else {
      v[k] += c;
      if (v[k] == 0) v.erase(k);
    }
  }
  return v;
}

inline json combination_to_json(const SparseVector& v, const std::vector<BasisElement>& basis) {
  json out = json::array();
  for (const auto& [k, c] : v) out.push_back({{"coeff", to_decimal(c)}, {"basis", basis.at(k).name}});
  return out;
}

}  // namespace detail

inline GradedAlgebra algebra_from_json(const json& j) {
  using namespace detail;
  const Field field = field_from_json(member(j, "field", "algebra"));
  std::vector<BasisElement> basis;
  for (const json& b : get_array(member(j, "basis", "algebra"), "algebra.basis")) {
    BasisElement e{get_string(member(b, "name", "basis"), "basis.name"),
                   static_cast<int>(get_int(member(b, "degree", "basis"), "basis.degree"))};
    for (const auto& prev : basis)
      if (prev.name == e.name) throw ParseError("algebra: duplicate basis name '" + e.name + "'");
    basis.push_back(std::move(e));
  }
  const std::string unit_name = get_string(member(j, "unit", "algebra"), "algebra.unit");
  std::size_t unit = basis.size();
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i].name == unit_name) unit = i;
  if (unit == basis.size()) throw ParseError("algebra: unit '" + unit_name + "' is not a basis element");

  GradedAlgebra::ProductTable table;
  auto index = [&](const json& x, const std::string& where) {
    const std::string name = get_string(x, where);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].name == name) return i;
    throw ParseError(where + ": unknown basis element '" + name + "'");
  };
  if (j.contains("products")) {
    for (const json& p : get_array(j.at("products"), "algebra.products")) {
      const std::size_t l = index(member(p, "left", "product"), "product.left");
      const std::size_t r = index(member(p, "right", "product"), "product.right");
      SparseVector v = combination_from_json(member(p, "result", "product"), nullptr, basis, "product.result");
      for (auto it = v.begin(); it != v.end();) {
        it->second = field.element(it->second);
        it = it->second == 0 ? v.erase(it) : std::next(it);
      }
      if (table.contains({l, r}))
        throw ParseError("algebra: product " + basis[l].name + "·" + basis[r].name + " given twice");
      if (!v.empty()) table[{l, r}] = std::move(v);
    }
  }
  return GradedAlgebra(field, std::move(basis), unit, std::move(table));
}

inline json algebra_to_json(const GradedAlgebra& a) {
  json basis = json::array();
  for (const auto& b : a.basis()) basis.push_back({{"name", b.name}, {"degree", b.degree}});
  json products = json::array();
  for (const auto& [key, v] : a.products())
    products.push_back({{"left", a.basis()[key.first].name},
                        {"right", a.basis()[key.second].name},
                        {"result", detail::combination_to_json(v, a.basis())}});
  return {{"field", field_to_json(a.field())},
          {"basis", std::move(basis)},
          {"unit", a.basis()[a.unit()].name},
          {"products", std::move(products)}};
}

/// Resolves the "source"/"target" entries of a map file.  The default
/// resolver accepts inline algebra objects or paths relative to `base_dir`.
using AlgebraResolver = std::function<GradedAlgebra(const json&)>;

inline AlgebraResolver file_resolver(const std::filesystem::path& base_dir) {
  return [base_dir](const json& j) {
    if (j.is_string()) return algebra_from_json(read_json_file(base_dir / j.get<std::string>()));
    return algebra_from_json(j);
  };
}

/// Reads a map φ: source -> target.  "values" lists the image of each source
/// basis element; omitted elements map to zero.
inline AlgebraMap map_from_json(const json& j, const AlgebraResolver& resolve) {
  using namespace detail;
  GradedAlgebra source = resolve(member(j, "source", "map"));
  GradedAlgebra target = resolve(member(j, "target", "map"));
  if (!(source.field() == target.field())) throw ParseError("map: source and target fields differ");
  const json& values = member(j, "values", "map");
  if (!values.is_object()) throw ParseError("map.values: expected an object");
  FieldMatrix m(source.field(), target.dim(), source.dim());
  for (const auto& [name, image] : values.items()) {
    std::size_t col = source.dim();
    for (std::size_t i = 0; i < source.dim(); ++i)
      if (source.basis()[i].name == name) col = i;
    if (col == source.dim()) throw ParseError("map.values: '" + name + "' is not a source basis element");
    for (const auto& [k, c] : combination_from_json(image, &target, target.basis(), "map.values." + name)) m.set(k, col, c);
  }
  return AlgebraMap(std::move(source), std::move(target), std::move(m));
}

inline json map_to_json(const AlgebraMap& phi) {
  json values = json::object();
  for (std::size_t j = 0; j < phi.source().dim(); ++j) {
    const SparseVector v = phi.image(j);
    if (!v.empty()) values[phi.source().basis()[j].name] = detail::combination_to_json(v, phi.target().basis());
  }
  return {{"source", algebra_to_json(phi.source())}, {"target", algebra_to_json(phi.target())}, {"values", values}};
}

inline json violations_to_json(const ValidationReport& r, const GradedAlgebra& a) {
  json out = json::array();
  for (const auto& v : r.violations) {
    json names = json::array();
    for (std::size_t i : v.indices) names.push_back(i < a.dim() ? a.basis()[i].name : std::to_string(i));
    out.push_back({{"axiom", to_string(v.kind)}, {"basis", std::move(names)}});
  }
  return out;
}

// -- fact files ---------------------------------------------------------------

inline int fact_file_cap(const json& j) {
  if (!j.is_object()) throw ParseError("fact file: expected an object");
  if (!j.contains("cap")) return 64;
  const long long cap = detail::get_int(j.at("cap"), "cap");
  if (cap < 0 || cap > 1'000'000) throw ParseError("fact file: cap out of range");
  return static_cast<int>(cap);
}

namespace detail {

inline void load_entity(FactStore& store, const json& e) {
  const std::string name = get_string(member(e, "name", "entity"), "entity.name");
  const std::string where = "entity '" + name + "'";
  const bool empty = e.contains("empty") && e.at("empty").is_boolean() && e.at("empty").get<bool>();
  auto ref = [&](const json& x) { return store.entity_id(get_string(x, where)); };
  auto pair = [&](const char* key) {
    const json& ops = get_array(e.at(key), where + "." + key);
    if (ops.size() != 2) throw ParseError(where + ": \"" + key + "\" takes two entity names");
    return std::pair{ref(ops[0]), ref(ops[1])};
  };

  if (e.contains("compose")) {
    auto [g, f] = pair("compose");
    store.add_composition(name, g, f);
  } else if (e.contains("product")) {
    auto [f, g] = pair("product");
    store.add_product(name, f, g);
  } else if (e.contains("inclusion")) {
    auto [a, x] = pair("inclusion");
    store.add_inclusion(name, a, x);
  } else if (e.contains("identity")) {
    store.add_identity(name, ref(e.at("identity")));
  } else if (e.contains("quotient_product")) {
    store.add_quotient_product(name, ref(e.at("quotient_product")));
  } else if (e.contains("quotient_diagonal")) {
    store.add_quotient_diagonal(name, ref(e.at("quotient_diagonal")));
  } else if (e.contains("domain") || e.contains("codomain")) {
    store.add_map(name, ref(member(e, "domain", where)), ref(member(e, "codomain", where)), empty);
  } else {
    std::optional<SpaceId> literal;
    if (e.contains("space") && !e.at("space").is_null()) literal = SpaceId::parse(get_string(e.at("space"), where));
    store.add_space(name, literal, empty);
  }
}

inline void load_bound(FactStore& store, const json& f, const std::filesystem::path& base_dir) {
  const EntityId e = store.entity_id(get_string(member(f, "entity", "fact"), "fact.entity"));
  const Quantity q = parse_quantity(get_string(member(f, "quantity", "fact"), "fact.quantity"));
  const std::string label = f.contains("label") ? get_string(f.at("label"), "fact.label") : "";
  const int cap = store.cap();
  auto number = [&](const char* key) { return static_cast<int>(get_int(f.at(key), std::string("fact.") + key)); };

  const bool is_map = store.entity(e).is_map;
  auto lower = [&](std::size_t v, const char* rule, const std::string& what) {
    store.assert_fact(e, q, {static_cast<int>(v), cap}, label.empty() ? what : label, rule);
  };
  if (f.contains("cohomology_map")) {
    if (!is_map) throw ParseError("fact: cohomology_map needs a map entity");
    const std::string file = get_string(f.at("cohomology_map"), "fact.cohomology_map");
    const auto path = base_dir / file;
    const json mj = read_json_file(path);
    const AlgebraMap phi = map_from_json(mj, file_resolver(path.parent_path()));
    if (q == Quantity::TC)
      lower(tc_map_lower_bound(phi), "R7", "cohomology from " + file);
    else if (q == Quantity::Cat)
      lower(cat_map_lower_bound(phi), "C1", "cohomology from " + file);
    else
      throw ParseError("fact: cohomology_map imports apply to TC or cat only");
    return;
  }
  if (f.contains("cohomology_algebra")) {
    if (is_map || q != Quantity::TC) throw ParseError("fact: cohomology_algebra imports apply to TC of a space");
    const std::string file = get_string(f.at("cohomology_algebra"), "fact.cohomology_algebra");
    const GradedAlgebra a = algebra_from_json(read_json_file(base_dir / file));
    require_valid(a, "cohomology_algebra");
    lower(zero_divisor_cuplength(a), "C2", "cohomology from " + file);
    return;
  }

  Interval iv{-1, cap};
  if (f.contains("interval")) {
    const json& pair = get_array(f.at("interval"), "fact.interval");
    if (pair.size() != 2) throw ParseError("fact.interval: expected [lo, hi]");
    iv = {static_cast<int>(get_int(pair[0], "fact.interval")), static_cast<int>(get_int(pair[1], "fact.interval"))};
  } else if (f.contains("value")) {
    iv = Interval::exactly(number("value"));
  } else if (f.contains("lower") || f.contains("upper")) {
    if (f.contains("lower")) iv.lo = number("lower");
    if (f.contains("upper")) iv.hi = number("upper");
  } else {
    throw ParseError("fact: needs interval, value, lower/upper or a cohomology import");
  }
  if (iv.lo > iv.hi || iv.lo < -1 || iv.hi > cap) throw ParseError("fact: interval " + iv.to_string() + " out of range");
  store.assert_fact(e, q, iv, label);
}

}  // namespace detail

/// Adds the entities, attributes and facts of a fact file to `store`.
/// Relative cohomology file names resolve against `base_dir`.  Contradictions
/// propagate as Contradiction with the store left in its failing state.
inline void load_fact_file(FactStore& store, const json& j, const std::filesystem::path& base_dir = ".") {
  using namespace detail;
  try {
    if (j.contains("entities"))
      for (const json& e : get_array(j.at("entities"), "entities")) load_entity(store, e);
    if (j.contains("attributes"))
      for (const json& a : get_array(j.at("attributes"), "attributes")) {
        const EntityId e = store.entity_id(get_string(member(a, "entity", "attribute"), "attribute.entity"));
        const Attribute attr = parse_attribute(get_string(member(a, "attribute", "attribute"), "attribute.attribute"));
        const json& v = member(a, "value", "attribute");
        const Tri value = v.is_boolean() ? (v.get<bool>() ? Tri::Yes : Tri::No) : parse_tri(get_string(v, "attribute.value"));
        store.assert_attribute(e, attr, value, a.contains("label") ? get_string(a.at("label"), "attribute.label") : "");
      }
    if (j.contains("facts"))
      for (const json& f : get_array(j.at("facts"), "facts")) load_bound(store, f, base_dir);
  } catch (const Contradiction&) {
    throw;
  } catch (const Unsupported&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("fact file: ") + e.what());
  }
}

// -- reports --------------------------------------------------------------------

inline json fact_to_json(const FactStore& store, FactId id) {
  const Fact& f = store.fact(id);
  json j = {{"id", f.id},
            {"entity", store.entity(f.entity).name},
            {"statement", store.statement(id)},
            {"rule", f.rule},
            {"justification", store.justification(id)},
            {"premises", f.premises}};
  if (!f.label.empty()) j["label"] = f.label;
  return j;
}

namespace detail {

inline void collect(const ProvenanceNode& n, std::set<FactId>& out) {
  if (!out.insert(n.fact).second) return;
  for (const auto& p : n.premises) collect(p, out);
}

}  // namespace detail

/// Interval table with provenance: each bound names the fact that set it, and
/// every fact reachable from those bounds is listed with its premises.
inline json bounds_to_json(const FactStore& store) {
  json entities = json::array();
  std::set<FactId> used;
  for (EntityId e = 0; e < store.entities().size(); ++e) {
    const Entity& ent = store.entity(e);
    json quantities = json::object();
    for (Quantity q : kAllQuantities) {
      if (!ent.is_map && q != Quantity::Cat && q != Quantity::TC) continue;
      const QueryResult r = store.query(e, q);
      json cell = {{"interval", {r.interval.lo, r.interval.hi}}, {"lower_fact", nullptr}, {"upper_fact", nullptr}};
      if (r.lower) {
        cell["lower_fact"] = r.lower->fact;
        detail::collect(*r.lower, used);
      }
      if (r.upper) {
        cell["upper_fact"] = r.upper->fact;
        detail::collect(*r.upper, used);
      }
      quantities[to_string(q)] = std::move(cell);
    }
    json ej = {{"name", ent.name}, {"kind", ent.is_map ? "map" : "space"}, {"quantities", std::move(quantities)}};
    if (ent.is_map) {
      ej["domain"] = store.entity(ent.domain).name;
      ej["codomain"] = store.entity(ent.codomain).name;
    } else if (ent.catalog) {
      ej["space"] = ent.catalog->to_string();
    }
    entities.push_back(std::move(ej));
  }
  json facts = json::array();
  for (FactId id : used) facts.push_back(fact_to_json(store, id));
  return {{"cap", store.cap()}, {"entities", std::move(entities)}, {"facts", std::move(facts)}};
}

inline json planner_report_to_json(const tcmap::PlannerReport& r) {
  auto pair_json = [](const std::optional<std::pair<Point, Point>>& p) -> json {
    if (!p) return nullptr;
    return json::array({p->first, p->second});
  };
  std::ostringstream digest;
  digest << std::hex << r.digest;
  return {{"planner", r.planner},
          {"samples", r.samples},
          {"path_samples", r.path_samples},
          {"domain_count", r.domain_count},
          {"domain_hits", r.domain_hits},
          {"uncovered", r.uncovered},
          {"overlapping", r.overlapping},
          {"coverage", r.coverage()},
          {"first_uncovered", pair_json(r.first_uncovered)},
          {"first_overlap", pair_json(r.first_overlap)},
          {"max_endpoint_error", r.max_endpoint_error},
          {"max_step", r.max_step},
          {"digest", digest.str()},
          {"deterministic", r.deterministic},
          {"coverage_ok", r.coverage_ok},
          {"endpoints_ok", r.endpoints_ok},
          {"passed", r.passed}};
}

}  // namespace tcmap::io
