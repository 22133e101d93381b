#pragma once

// Interval propagation over cat / TC / halfTC / MTC / robotTC of spaces and
// maps.  Every bound carries provenance: the rule that produced it and the
// facts it was derived from, down to given and catalog leaves.
//
// Bounds only ever tighten, values are integers in [-1, cap], and every rule
// is monotone, so propagation reaches the same least fixpoint whatever order
// the rules fire in.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tcmap/catalog.hpp"
#include "tcmap/errors.hpp"

namespace tcmap {

enum class Quantity { Cat, TC, HalfTC, MTC, RobotTC };

inline constexpr Quantity kAllQuantities[] = {Quantity::Cat, Quantity::TC, Quantity::HalfTC, Quantity::MTC,
                                              Quantity::RobotTC};

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::Cat: return "cat";
    case Quantity::TC: return "TC";
    case Quantity::HalfTC: return "halfTC";
    case Quantity::MTC: return "MTC";
    case Quantity::RobotTC: return "robotTC";
  }
  return "?";
}

inline Quantity parse_quantity(const std::string& s) {
  for (Quantity q : kAllQuantities)
    if (s == to_string(q)) return q;
  throw ParseError("unknown quantity '" + s + "' (expected cat, TC, halfTC, MTC or robotTC)");
}

enum class Tri { Unknown, Yes, No };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::Unknown: return "unknown";
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
  }
  return "?";
}

inline Tri parse_tri(const std::string& s) {
  if (s == "yes" || s == "true") return Tri::Yes;
  if (s == "no" || s == "false") return Tri::No;
  if (s == "unknown") return Tri::Unknown;
  throw ParseError("attribute value must be yes, no or unknown, got '" + s + "'");
}

enum class Attribute {
  Nullhomotopic,
  LeftHomotopyInverse,
  RightHomotopyInverse,
  DomainIsHSpace,
  IsFibration,
  DomainEnrCodomainHausdorff,
};

inline constexpr Attribute kAllAttributes[] = {Attribute::Nullhomotopic,  Attribute::LeftHomotopyInverse,
                                               Attribute::RightHomotopyInverse, Attribute::DomainIsHSpace,
                                               Attribute::IsFibration,    Attribute::DomainEnrCodomainHausdorff};

inline const char* to_string(Attribute a) {
  switch (a) {
    case Attribute::Nullhomotopic: return "nullhomotopic";
    case Attribute::LeftHomotopyInverse: return "has_left_homotopy_inverse";
    case Attribute::RightHomotopyInverse: return "has_right_homotopy_inverse";
    case Attribute::DomainIsHSpace: return "domain_is_H_space";
    case Attribute::IsFibration: return "is_fibration";
    case Attribute::DomainEnrCodomainHausdorff: return "domain_is_ENR_codomain_Hausdorff";
  }
  return "?";
}

inline Attribute parse_attribute(const std::string& s) {
  for (Attribute a : kAllAttributes)
    if (s == to_string(a)) return a;
  throw ParseError("unknown attribute '" + s + "'");
}

/// How a map entity is built from other entities.
enum class Structure {
  None,
  Composition,       // operands {g, f}: g ∘ f
  Product,           // operands {f, g}: f × g
  Identity,          // operands {X}
  Inclusion,         // plain map, recorded for reporting
  QuotientProduct,   // operands {f}: q_Y ∘ (f × f)
  QuotientDiagonal,  // operands {f}: induced map (X×X)/ΔX -> (Y×Y)/ΔY
};

using EntityId = std::size_t;
using FactId = std::size_t;

struct Entity {
  std::string name;
  bool is_map = false;
  bool empty = false;
  std::optional<SpaceId> catalog;  // spaces only
  EntityId domain = 0;             // maps only
  EntityId codomain = 0;
  Structure structure = Structure::None;
  std::vector<EntityId> operands;
};

struct RuleInfo {
  const char* id;
  const char* statement;
};

/// Rule ids and the inequality each one encodes.
inline const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> rules = {
      {"R1", "TC(f) <= min(TC X, TC Y)"},
      {"R2", "cat f <= TC(f) <= cat(f x f)"},
      {"R3", "TC(f) = 0 iff f is nullhomotopic"},
      {"R4", "TC(f x g) <= TC(f) + TC(g)"},
      {"R5", "TC(g o f) <= min(TC g, TC f)"},
      {"R6", "right homotopy inverse => TC(f) = TC Y; left homotopy inverse => TC(f) = TC X"},
      {"R7", "cup-length of ker(cup) ∩ im (f x f)* <= TC(f)"},
      {"R8", "domain an H-space => TC(f) = cat f"},
      {"R9", "cat Y <= halfTC f <= TC Y and cat f <= halfTC f"},
      {"R10", "f nullhomotopic => halfTC f = cat Y"},
      {"R11", "halfTC(g o f) <= halfTC g"},
      {"R12", "TC(f) <= halfTC f <= robotTC f"},
      {"R13", "f a fibration => halfTC f = robotTC f"},
      {"R14", "TC(f) <= MTC f, and MTC f <= TC(f) + 1 when X is an ENR and Y Hausdorff"},
      {"R15", "cat(q(f x f)) <= TC(f) and cat(f_Δ) <= MTC f"},
      {"R16", "halfTC f = 0 iff cat Y = 0"},
      {"R17", "right homotopy inverse => halfTC f = TC Y"},
      {"S1", "cat f <= min(cat X, cat Y)"},
      {"S2", "cat X <= TC X <= 2 cat X"},
      {"S3", "cat(f x g) <= cat f + cat g"},
      {"S4", "identity maps: TC(id) = halfTC(id) = TC X, cat(id) = cat X"},
      {"S5", "f nullhomotopic => cat f <= 0; f not nullhomotopic => cat f >= 1"},
      {"C1", "cup-length of ker f* <= cat f"},
      {"C2", "zero-divisor cup-length of H*(X) <= TC X"},
  };
  return rules;
}

inline const char* rule_statement(const std::string& id) {
  for (const auto& r : rule_catalog())
    if (id == r.id) return r.statement;
  return "";
}

struct Fact {
  enum class Kind { Bound, Attribute };

  FactId id = 0;
  Kind kind = Kind::Bound;
  EntityId entity = 0;
  Quantity quantity = Quantity::TC;
  Interval bound{};  // lower-bound facts use [v, cap], upper-bound facts [-1, v]
  Attribute attribute = Attribute::Nullhomotopic;
  Tri value = Tri::Unknown;
  std::string rule;  // "given", "catalog", or a rule id
  std::vector<FactId> premises;
  std::string label;
};

class Contradiction : public Error {
 public:
  Contradiction(const std::string& what, std::vector<FactId> conflicting)
      : Error(what), conflicting_(std::move(conflicting)) {}
  const std::vector<FactId>& conflicting() const noexcept { return conflicting_; }

 private:
  std::vector<FactId> conflicting_;
};

struct ProvenanceNode {
  FactId fact = 0;
  std::vector<ProvenanceNode> premises;
};

struct QueryResult {
  Interval interval;
  std::optional<ProvenanceNode> lower;  // absent when the bound is the default
  std::optional<ProvenanceNode> upper;
};

struct PropagationOptions {
  /// When set, the rule applications are shuffled with this seed on every sweep.
  std::optional<std::uint64_t> shuffle_seed;
};

class FactStore {
 public:
  explicit FactStore(int cap = 64) : cap_(cap) {
    if (cap_ < 0) throw InvalidInput("FactStore: cap must be non-negative");
  }

  int cap() const noexcept { return cap_; }
  const std::vector<Entity>& entities() const noexcept { return entities_; }
  const std::vector<Fact>& facts() const noexcept { return facts_; }
  const Fact& fact(FactId id) const { return facts_.at(id); }
  const Entity& entity(EntityId id) const { return entities_.at(id); }

  bool has_entity(const std::string& name) const { return by_name_.contains(name); }
  EntityId entity_id(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw InvalidInput("unknown entity '" + name + "'");
    return it->second;
  }

  static bool applies(const Entity& e, Quantity q) { return e.is_map || q == Quantity::Cat || q == Quantity::TC; }

  // -- entities ------------------------------------------------------------

  EntityId add_space(const std::string& name, std::optional<SpaceId> catalog = std::nullopt, bool empty = false) {
    Entity e;
    e.name = name;
    e.empty = empty;
    e.catalog = catalog;
    const EntityId id = insert(std::move(e));
    if (catalog && !empty) {
      const CatalogValue cat = cat_of(*catalog);
      const CatalogValue tc = tc_of(*catalog);
      assert_fact(id, Quantity::Cat, cat.value, catalog->to_string() + ": " + cat.reason + " (" + to_string(cat.backing) + ")",
                  "catalog");
      assert_fact(id, Quantity::TC, tc.value, catalog->to_string() + ": " + tc.reason + " (" + to_string(tc.backing) + ")",
                  "catalog");
    }
    return id;
  }

  EntityId add_map(const std::string& name, EntityId domain, EntityId codomain, bool empty = false) {
    check_space(domain, name);
    check_space(codomain, name);
    Entity e;
    e.name = name;
    e.is_map = true;
    e.empty = empty;
    e.domain = domain;
    e.codomain = codomain;
    return insert(std::move(e));
  }

  EntityId add_inclusion(const std::string& name, EntityId sub, EntityId ambient) {
    const EntityId id = add_map(name, sub, ambient);
    entities_[id].structure = Structure::Inclusion;
    return id;
  }

  /// g ∘ f; requires codomain(f) = domain(g).
  EntityId add_composition(const std::string& name, EntityId g, EntityId f) {
    check_map(g, name);
    check_map(f, name);
    if (entities_[f].codomain != entities_[g].domain)
      throw InvalidInput("composition '" + name + "': codomain of '" + entities_[f].name + "' is not the domain of '" +
                         entities_[g].name + "'");
    return add_structured(name, entities_[f].domain, entities_[g].codomain, Structure::Composition, {g, f});
  }

  /// f × g, with product spaces created on demand.
  EntityId add_product(const std::string& name, EntityId f, EntityId g) {
    check_map(f, name);
    check_map(g, name);
    const EntityId dom = space_named("(" + entities_[entities_[f].domain].name + "×" + entities_[entities_[g].domain].name + ")");
    const EntityId cod =
        space_named("(" + entities_[entities_[f].codomain].name + "×" + entities_[entities_[g].codomain].name + ")");
    return add_structured(name, dom, cod, Structure::Product, {f, g});
  }

  EntityId add_identity(const std::string& name, EntityId x) {
    check_space(x, name);
    return add_structured(name, x, x, Structure::Identity, {x});
  }

  EntityId add_quotient_product(const std::string& name, EntityId f) {
    check_map(f, name);
    const std::string x = entities_[entities_[f].domain].name;
    const std::string y = entities_[entities_[f].codomain].name;
    return add_structured(name, space_named("(" + x + "×" + x + ")"), space_named("(" + y + "×" + y + ")/Δ"),
                          Structure::QuotientProduct, {f});
  }

  EntityId add_quotient_diagonal(const std::string& name, EntityId f) {
    check_map(f, name);
    const std::string x = entities_[entities_[f].domain].name;
    const std::string y = entities_[entities_[f].codomain].name;
    return add_structured(name, space_named("(" + x + "×" + x + ")/Δ"), space_named("(" + y + "×" + y + ")/Δ"),
                          Structure::QuotientDiagonal, {f});
  }

  // -- facts ---------------------------------------------------------------

  /// Intersects the stored interval with `value`.  Throws Contradiction if the
  /// result is empty; the offending fact stays recorded in the store.
  FactId assert_fact(EntityId e, Quantity q, Interval value, const std::string& label, const std::string& rule = "given",
                     std::vector<FactId> premises = {}) {
    check_quantity(e, q);
    if (value.lo > value.hi || value.lo < -1 || value.hi > cap_)
      throw InvalidInput("assert_fact: interval " + value.to_string() + " is not within [-1," + std::to_string(cap_) + "]");
    Fact f;
    f.id = facts_.size();
    f.kind = Fact::Kind::Bound;
    f.entity = e;
    f.quantity = q;
    f.bound = value;
    f.rule = rule;
    f.premises = std::move(premises);
    f.label = label;
    facts_.push_back(f);
    Cell& c = cells_.at({e, q});
    if (value.lo > c.value.lo) {
      c.value.lo = value.lo;
      c.lo_source = f.id;
    }
    if (value.hi < c.value.hi) {
      c.value.hi = value.hi;
      c.hi_source = f.id;
    }
    check_cell(e, q);
    return f.id;
  }

  FactId assert_attribute(EntityId e, Attribute a, Tri value, const std::string& label, const std::string& rule = "given",
                          std::vector<FactId> premises = {}) {
    check_map(e, "assert_attribute");
    Fact f;
    f.id = facts_.size();
    f.kind = Fact::Kind::Attribute;
    f.entity = e;
    f.attribute = a;
    f.value = value;
    f.rule = rule;
    f.premises = std::move(premises);
    f.label = label;
    facts_.push_back(f);
    if (value == Tri::Unknown) return f.id;
    AttrCell& c = attributes_[{e, a}];
    if (c.value == Tri::Unknown) {
      c.value = value;
      c.source = f.id;
    } else if (c.value != value) {
      throw Contradiction("contradiction on " + std::string(to_string(a)) + "(" + entities_[e].name + "): " +
                              to_string(c.value) + " from " + describe_chain(*c.source) + " versus " + to_string(value) +
                              " from " + describe_chain(f.id),
                          {*c.source, f.id});
    }
    return f.id;
  }

  Interval interval(EntityId e, Quantity q) const {
    check_quantity(e, q);
    return cells_.at({e, q}).value;
  }

  Tri attribute(EntityId e, Attribute a) const {
    auto it = attributes_.find({e, a});
    return it == attributes_.end() ? Tri::Unknown : it->second.value;
  }

  QueryResult query(EntityId e, Quantity q) const {
    check_quantity(e, q);
    const Cell& c = cells_.at({e, q});
    QueryResult r{c.value, std::nullopt, std::nullopt};
    if (c.lo_source) r.lower = tree(*c.lo_source);
    if (c.hi_source) r.upper = tree(*c.hi_source);
    return r;
  }

  QueryResult query(const std::string& entity, Quantity q) const { return query(entity_id(entity), q); }

  /// One-line statement of a fact, e.g. "TC(p) >= 1" or "nullhomotopic(p) = no".
  std::string statement(FactId id) const {
    const Fact& f = facts_.at(id);
    const std::string& name = entities_[f.entity].name;
    if (f.kind == Fact::Kind::Attribute) return std::string(to_string(f.attribute)) + "(" + name + ") = " + to_string(f.value);
    const std::string head = std::string(to_string(f.quantity)) + "(" + name + ")";
    if (f.bound.lo == f.bound.hi) return head + " = " + std::to_string(f.bound.lo);
    if (f.bound.hi == cap_ && f.bound.lo > -1) return head + " >= " + std::to_string(f.bound.lo);
    if (f.bound.lo == -1 && f.bound.hi < cap_) return head + " <= " + std::to_string(f.bound.hi);
    return head + " in " + f.bound.to_string();
  }

  /// Justification of a single fact: "[given: ...]", "[catalog: ...]" or "[R3: ...]".
  std::string justification(FactId id) const {
    const Fact& f = facts_.at(id);
    if (f.rule == "given" || f.rule == "catalog") return "[" + f.rule + (f.label.empty() ? "" : ": " + f.label) + "]";
    std::string s = "[" + f.rule + ": " + rule_statement(f.rule);
    if (!f.label.empty()) s += "; " + f.label;
    return s + "]";
  }

  /// Multi-line derivation of the current interval of `q` on `e`.
  std::string explain(EntityId e, Quantity q) const {
    const QueryResult r = query(e, q);
    std::string out = std::string(to_string(q)) + "(" + entities_[e].name + ") = " + r.interval.to_string() + "\n";
    if (r.lower)
      render(*r.lower, 1, out, "lower: ");
    else
      out += "  lower: " + std::to_string(r.interval.lo) + " [default]\n";
    if (r.upper)
      render(*r.upper, 1, out, "upper: ");
    else
      out += "  upper: " + std::to_string(r.interval.hi) + " [default]\n";
    return out;
  }

  /// Explanation of a single fact and everything it rests on.
  std::string explain_fact(FactId id) const {
    std::string out;
    render(tree(id), 0, out, "");
    return out;
  }

  // -- propagation -----------------------------------------------------------

  /// Runs every rule to the least fixpoint.  Returns the number of sweeps.
  std::size_t propagate(const PropagationOptions& options = {}) {
    std::vector<std::function<void()>> tasks = build_tasks();
    std::optional<std::mt19937_64> rng;
    if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);
    std::size_t sweeps = 0;
    do {
      changed_ = false;
      if (rng) std::shuffle(tasks.begin(), tasks.end(), *rng);
      for (auto& t : tasks) t();
      ++sweeps;
    } while (changed_);
    return sweeps;
  }

 private:
  struct Cell {
    Interval value;
    std::optional<FactId> lo_source;
    std::optional<FactId> hi_source;
  };
  struct AttrCell {
    Tri value = Tri::Unknown;
    std::optional<FactId> source;
  };

  EntityId insert(Entity e) {
    if (e.name.empty()) throw InvalidInput("entity names must be non-empty");
    if (by_name_.contains(e.name)) throw InvalidInput("duplicate entity '" + e.name + "'");
    const EntityId id = entities_.size();
    by_name_[e.name] = id;
    const Interval init = e.empty ? Interval{-1, -1} : Interval{0, cap_};
    for (Quantity q : kAllQuantities)
      if (applies(e, q)) cells_[{id, q}] = Cell{init, std::nullopt, std::nullopt};
    entities_.push_back(std::move(e));
    return id;
  }

  EntityId add_structured(const std::string& name, EntityId dom, EntityId cod, Structure s, std::vector<EntityId> ops) {
    const EntityId id = add_map(name, dom, cod);
    entities_[id].structure = s;
    entities_[id].operands = std::move(ops);
    return id;
  }

  EntityId space_named(const std::string& name) {
    if (auto it = by_name_.find(name); it != by_name_.end()) {
      check_space(it->second, name);
      return it->second;
    }
    return add_space(name);
  }

  void check_space(EntityId id, const std::string& context) const {
    if (id >= entities_.size() || entities_[id].is_map)
      throw InvalidInput("'" + context + "': expected a space entity");
  }
  void check_map(EntityId id, const std::string& context) const {
    if (id >= entities_.size() || !entities_[id].is_map) throw InvalidInput("'" + context + "': expected a map entity");
  }
  void check_quantity(EntityId e, Quantity q) const {
    if (e >= entities_.size()) throw InvalidInput("unknown entity id");
    if (!applies(entities_[e], q))
      throw InvalidInput(std::string(to_string(q)) + " is not defined for the space '" + entities_[e].name + "'");
  }

  void check_cell(EntityId e, Quantity q) const {
    const Cell& c = cells_.at({e, q});
    if (!c.value.empty()) return;
    const std::string lo = c.lo_source ? describe_chain(*c.lo_source) : "default";
    const std::string hi = c.hi_source ? describe_chain(*c.hi_source) : "default";
    std::vector<FactId> ids;
    if (c.lo_source) ids.push_back(*c.lo_source);
    if (c.hi_source) ids.push_back(*c.hi_source);
    throw Contradiction("contradiction on " + std::string(to_string(q)) + "(" + entities_[e].name + "): lower bound " +
                            std::to_string(c.value.lo) + " from " + lo + " exceeds upper bound " +
                            std::to_string(c.value.hi) + " from " + hi,
                        std::move(ids));
  }

  // Statement plus justification, followed by the leaves it rests on.
  std::string describe_chain(FactId id) const {
    std::string s = statement(id) + " " + justification(id);
    std::set<FactId> leaves;
    collect_leaves(id, leaves);
    leaves.erase(id);
    if (!leaves.empty()) {
      s += " <= {";
      bool first = true;
      for (FactId l : leaves) {
        s += (first ? "" : "; ") + statement(l) + " " + justification(l);
        first = false;
      }
      s += "}";
    }
    return s;
  }

  void collect_leaves(FactId id, std::set<FactId>& out) const {
    const Fact& f = facts_[id];
    if (f.premises.empty()) {
      out.insert(id);
      return;
    }
    for (FactId p : f.premises) collect_leaves(p, out);
  }

  ProvenanceNode tree(FactId id) const {
    ProvenanceNode n{id, {}};
    for (FactId p : facts_[id].premises) n.premises.push_back(tree(p));
    return n;
  }

  void render(const ProvenanceNode& n, int depth, std::string& out, const std::string& prefix) const {
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + prefix + statement(n.fact) + " " + justification(n.fact) + "\n";
    for (const auto& p : n.premises) render(p, depth + 1, out, "");
  }

  // -- rule primitives -------------------------------------------------------

  using Premises = std::vector<FactId>;

  Interval iv(EntityId e, Quantity q) const { return cells_.at({e, q}).value; }
  Premises lo_src(EntityId e, Quantity q) const {
    const auto& s = cells_.at({e, q}).lo_source;
    return s ? Premises{*s} : Premises{};
  }
  Premises hi_src(EntityId e, Quantity q) const {
    const auto& s = cells_.at({e, q}).hi_source;
    return s ? Premises{*s} : Premises{};
  }
  static Premises join(Premises a, const Premises& b) {
    for (FactId x : b)
      if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
    return a;
  }

  void raise_lo(EntityId e, Quantity q, int v, const char* rule, Premises premises) {
    if (v <= iv(e, q).lo) return;
    if (v > cap_) v = cap_ + 1;  // forces a contradiction against hi <= cap
    Fact f;
    f.id = facts_.size();
    f.kind = Fact::Kind::Bound;
    f.entity = e;
    f.quantity = q;
    f.bound = {v, cap_};
    f.rule = rule;
    f.premises = std::move(premises);
    facts_.push_back(f);
    Cell& c = cells_.at({e, q});
    c.value.lo = v;
    c.lo_source = f.id;
    changed_ = true;
    check_cell(e, q);
  }

  void lower_hi(EntityId e, Quantity q, int v, const char* rule, Premises premises) {
    if (v >= iv(e, q).hi) return;
    if (v < -2) v = -2;
    Fact f;
    f.id = facts_.size();
    f.kind = Fact::Kind::Bound;
    f.entity = e;
    f.quantity = q;
    f.bound = {-1, v};
    f.rule = rule;
    f.premises = std::move(premises);
    facts_.push_back(f);
    Cell& c = cells_.at({e, q});
    c.value.hi = v;
    c.hi_source = f.id;
    changed_ = true;
    check_cell(e, q);
  }

  // a <= b
  void le(EntityId a, Quantity qa, EntityId b, Quantity qb, const char* rule, const Premises& extra = {}) {
    lower_hi(a, qa, iv(b, qb).hi, rule, join(hi_src(b, qb), extra));
    raise_lo(b, qb, iv(a, qa).lo, rule, join(lo_src(a, qa), extra));
  }

  void eq(EntityId a, Quantity qa, EntityId b, Quantity qb, const char* rule, const Premises& extra = {}) {
    le(a, qa, b, qb, rule, extra);
    le(b, qb, a, qa, rule, extra);
  }

  // a <= b + k
  void le_plus(EntityId a, Quantity qa, EntityId b, Quantity qb, int k, const char* rule, const Premises& extra = {}) {
    if (iv(b, qb).hi < cap_) lower_hi(a, qa, iv(b, qb).hi + k, rule, join(hi_src(b, qb), extra));
    raise_lo(b, qb, iv(a, qa).lo - k, rule, join(lo_src(a, qa), extra));
  }

  // a <= b + c
  void le_sum(EntityId a, Quantity qa, EntityId b, Quantity qb, EntityId c, Quantity qc, const char* rule) {
    const Interval ia = iv(a, qa), ib = iv(b, qb), ic = iv(c, qc);
    lower_hi(a, qa, ib.hi + ic.hi, rule, join(hi_src(b, qb), hi_src(c, qc)));
    raise_lo(b, qb, ia.lo - ic.hi, rule, join(lo_src(a, qa), hi_src(c, qc)));
    raise_lo(c, qc, ia.lo - ib.hi, rule, join(lo_src(a, qa), hi_src(b, qb)));
  }

  std::optional<Premises> holds(EntityId e, Attribute a, Tri v) const {
    auto it = attributes_.find({e, a});
    if (it == attributes_.end() || it->second.value != v) return std::nullopt;
    return Premises{*it->second.source};
  }

  void derive_attribute(EntityId e, Attribute a, Tri v, const char* rule, Premises premises) {
    if (attribute(e, a) == v) return;
    assert_attribute(e, a, v, "", rule, std::move(premises));
    changed_ = true;
  }

  // -- rules -----------------------------------------------------------------

  std::vector<std::function<void()>> build_tasks() {
    std::vector<std::function<void()>> tasks;
    for (EntityId id = 0; id < entities_.size(); ++id) {
      const Entity& e = entities_[id];
      if (!e.is_map) {
        tasks.emplace_back([this, id] { rule_s2(id); });
        continue;
      }
      tasks.emplace_back([this, id] { rule_r1(id); });
      tasks.emplace_back([this, id] { rule_r2(id); });
      tasks.emplace_back([this, id] { rule_r3(id); });
      tasks.emplace_back([this, id] { rule_r6(id); });
      tasks.emplace_back([this, id] { rule_r8(id); });
      tasks.emplace_back([this, id] { rule_r9(id); });
      tasks.emplace_back([this, id] { rule_r10(id); });
      tasks.emplace_back([this, id] { rule_r12(id); });
      tasks.emplace_back([this, id] { rule_r13(id); });
      tasks.emplace_back([this, id] { rule_r14(id); });
      tasks.emplace_back([this, id] { rule_r16(id); });
      tasks.emplace_back([this, id] { rule_r17(id); });
      tasks.emplace_back([this, id] { rule_s1(id); });
      tasks.emplace_back([this, id] { rule_s5(id); });
      switch (e.structure) {
        case Structure::Product:
          tasks.emplace_back([this, id] { rule_r4(id); });
          tasks.emplace_back([this, id] { rule_s3(id); });
          break;
        case Structure::Composition:
          tasks.emplace_back([this, id] { rule_r5(id); });
          tasks.emplace_back([this, id] { rule_r11(id); });
          break;
        case Structure::QuotientProduct:
        case Structure::QuotientDiagonal:
          tasks.emplace_back([this, id] { rule_r15(id); });
          break;
        case Structure::Identity:
          tasks.emplace_back([this, id] { rule_s4(id); });
          break;
        default:
          break;
      }
    }
    return tasks;
  }

  EntityId dom(EntityId f) const { return entities_[f].domain; }
  EntityId cod(EntityId f) const { return entities_[f].codomain; }

  void rule_r1(EntityId f) {
    le(f, Quantity::TC, dom(f), Quantity::TC, "R1");
    le(f, Quantity::TC, cod(f), Quantity::TC, "R1");
  }

  void rule_r2(EntityId f) {
    le(f, Quantity::Cat, f, Quantity::TC, "R2");
    for (EntityId p = 0; p < entities_.size(); ++p) {
      const Entity& e = entities_[p];
      if (e.structure == Structure::Product && e.operands[0] == f && e.operands[1] == f)
        le(f, Quantity::TC, p, Quantity::Cat, "R2");
    }
  }

  void rule_r3(EntityId f) {
    if (auto p = holds(f, Attribute::Nullhomotopic, Tri::Yes)) lower_hi(f, Quantity::TC, 0, "R3", *p);
    if (auto p = holds(f, Attribute::Nullhomotopic, Tri::No)) raise_lo(f, Quantity::TC, 1, "R3", *p);
    if (iv(f, Quantity::TC) == Interval{0, 0})
      derive_attribute(f, Attribute::Nullhomotopic, Tri::Yes, "R3",
                       join(lo_src(f, Quantity::TC), hi_src(f, Quantity::TC)));
  }

  void rule_r4(EntityId h) {
    const auto& ops = entities_[h].operands;
    le_sum(h, Quantity::TC, ops[0], Quantity::TC, ops[1], Quantity::TC, "R4");
  }

  void rule_r5(EntityId h) {
    const auto& ops = entities_[h].operands;  // {g, f}
    le(h, Quantity::TC, ops[0], Quantity::TC, "R5");
    le(h, Quantity::TC, ops[1], Quantity::TC, "R5");
  }

  void rule_r6(EntityId f) {
    if (auto p = holds(f, Attribute::RightHomotopyInverse, Tri::Yes)) eq(f, Quantity::TC, cod(f), Quantity::TC, "R6", *p);
    if (auto p = holds(f, Attribute::LeftHomotopyInverse, Tri::Yes)) eq(f, Quantity::TC, dom(f), Quantity::TC, "R6", *p);
  }

  void rule_r8(EntityId f) {
    if (auto p = holds(f, Attribute::DomainIsHSpace, Tri::Yes)) eq(f, Quantity::TC, f, Quantity::Cat, "R8", *p);
  }

  void rule_r9(EntityId f) {
    le(cod(f), Quantity::Cat, f, Quantity::HalfTC, "R9");
    le(f, Quantity::HalfTC, cod(f), Quantity::TC, "R9");
    le(f, Quantity::Cat, f, Quantity::HalfTC, "R9");
  }

  void rule_r10(EntityId f) {
    if (auto p = holds(f, Attribute::Nullhomotopic, Tri::Yes)) eq(f, Quantity::HalfTC, cod(f), Quantity::Cat, "R10", *p);
  }

  void rule_r11(EntityId h) {
    le(h, Quantity::HalfTC, entities_[h].operands[0], Quantity::HalfTC, "R11");
  }

  void rule_r12(EntityId f) {
    le(f, Quantity::TC, f, Quantity::HalfTC, "R12");
    le(f, Quantity::HalfTC, f, Quantity::RobotTC, "R12");
  }

  void rule_r13(EntityId f) {
    if (auto p = holds(f, Attribute::IsFibration, Tri::Yes)) eq(f, Quantity::HalfTC, f, Quantity::RobotTC, "R13", *p);
  }

  void rule_r14(EntityId f) {
    le(f, Quantity::TC, f, Quantity::MTC, "R14");
    if (auto p = holds(f, Attribute::DomainEnrCodomainHausdorff, Tri::Yes))
      le_plus(f, Quantity::MTC, f, Quantity::TC, 1, "R14", *p);
  }

  void rule_r15(EntityId q) {
    const Entity& e = entities_[q];
    const EntityId f = e.operands[0];
    le(q, Quantity::Cat, f, e.structure == Structure::QuotientProduct ? Quantity::TC : Quantity::MTC, "R15");
  }

  void rule_r16(EntityId f) {
    const EntityId y = cod(f);
    if (iv(y, Quantity::Cat) == Interval{0, 0})
      lower_hi(f, Quantity::HalfTC, 0, "R16", join(lo_src(y, Quantity::Cat), hi_src(y, Quantity::Cat)));
    if (iv(f, Quantity::HalfTC) == Interval{0, 0})
      lower_hi(y, Quantity::Cat, 0, "R16", join(lo_src(f, Quantity::HalfTC), hi_src(f, Quantity::HalfTC)));
  }

  void rule_r17(EntityId f) {
    if (auto p = holds(f, Attribute::RightHomotopyInverse, Tri::Yes))
      eq(f, Quantity::HalfTC, cod(f), Quantity::TC, "R17", *p);
  }

  void rule_s1(EntityId f) {
    le(f, Quantity::Cat, dom(f), Quantity::Cat, "S1");
    le(f, Quantity::Cat, cod(f), Quantity::Cat, "S1");
  }

  void rule_s2(EntityId x) {
    le(x, Quantity::Cat, x, Quantity::TC, "S2");
    const Interval cat = iv(x, Quantity::Cat);
    const Interval tc = iv(x, Quantity::TC);
    if (cat.hi >= 0 && cat.hi < cap_) lower_hi(x, Quantity::TC, 2 * cat.hi, "S2", hi_src(x, Quantity::Cat));
    if (tc.lo > 0) raise_lo(x, Quantity::Cat, (tc.lo + 1) / 2, "S2", lo_src(x, Quantity::TC));
  }

  void rule_s3(EntityId h) {
    const auto& ops = entities_[h].operands;
    le_sum(h, Quantity::Cat, ops[0], Quantity::Cat, ops[1], Quantity::Cat, "S3");
  }

  void rule_s4(EntityId id) {
    const EntityId x = entities_[id].operands[0];
    eq(id, Quantity::TC, x, Quantity::TC, "S4");
    eq(id, Quantity::HalfTC, x, Quantity::TC, "S4");
    eq(id, Quantity::Cat, x, Quantity::Cat, "S4");
  }

  void rule_s5(EntityId f) {
    if (auto p = holds(f, Attribute::Nullhomotopic, Tri::Yes)) lower_hi(f, Quantity::Cat, 0, "S5", *p);
    if (auto p = holds(f, Attribute::Nullhomotopic, Tri::No)) raise_lo(f, Quantity::Cat, 1, "S5", *p);
  }

  int cap_;
  std::vector<Entity> entities_;
  std::map<std::string, EntityId> by_name_;
  std::vector<Fact> facts_;
  std::map<std::pair<EntityId, Quantity>, Cell> cells_;
  std::map<std::pair<EntityId, Attribute>, AttrCell> attributes_;
  bool changed_ = false;
};

/// Value-semantics wrapper: propagates a copy and returns it.
inline FactStore propagate(FactStore store, const PropagationOptions& options = {}) {
  store.propagate(options);
  return store;
}

}  // namespace tcmap
