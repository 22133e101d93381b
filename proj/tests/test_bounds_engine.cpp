#include <random>
#include <set>

#include <gtest/gtest.h>

#include "tcmap/bounds_engine.hpp"
#include "tcmap/io.hpp"

namespace {

using tcmap::Attribute;
using tcmap::EntityId;
using tcmap::FactStore;
using tcmap::Interval;
using tcmap::Quantity;
using tcmap::SpaceId;
using tcmap::Tri;

struct Hopf {
  FactStore store;
  EntityId s3, rp3, p;
  Hopf() {
    s3 = store.add_space("S3", SpaceId::sphere(3));
    rp3 = store.add_space("RP3");
    p = store.add_map("p", s3, rp3);
    store.assert_attribute(p, Attribute::Nullhomotopic, Tri::No, "covering map");
  }
};

std::set<std::string> rules_in(const FactStore& s, const tcmap::ProvenanceNode& n) {
  std::set<std::string> out{s.fact(n.fact).rule};
  for (const auto& c : n.premises) out.merge(rules_in(s, c));
  return out;
}

TEST(Bounds, HopfCoveringExample) {
  Hopf h;
  h.store.propagate();
  EXPECT_EQ(h.store.interval(h.p, Quantity::TC), Interval::exactly(1));
  const auto q = h.store.query(h.p, Quantity::TC);
  ASSERT_TRUE(q.lower && q.upper);
  EXPECT_TRUE(rules_in(h.store, *q.lower).contains("R3"));
  EXPECT_TRUE(rules_in(h.store, *q.upper).contains("R1"));
  const std::string text = h.store.explain(h.p, Quantity::TC);
  EXPECT_NE(text.find("R1"), std::string::npos);
  EXPECT_NE(text.find("R3"), std::string::npos);
}

TEST(Bounds, PointToCircleHalfTC) {
  FactStore s;
  const auto pt = s.add_space("pt", SpaceId::point());
  const auto s1 = s.add_space("S1", SpaceId::sphere(1));
  const auto h = s.add_map("h", pt, s1);
  s.propagate();
  EXPECT_EQ(s.interval(h, Quantity::HalfTC), Interval::exactly(1));
  EXPECT_EQ(s.interval(h, Quantity::TC), Interval::exactly(0));
  EXPECT_EQ(s.attribute(h, Attribute::Nullhomotopic), Tri::Yes);
}

TEST(Bounds, NoPremisesGivesDefault) {
  FactStore s(64);
  const auto x = s.add_space("X");
  const auto y = s.add_space("Y");
  const auto f = s.add_map("f", x, y);
  s.propagate();
  for (Quantity q : tcmap::kAllQuantities) EXPECT_EQ(s.interval(f, q), (Interval{0, 64}));
  EXPECT_FALSE(s.query(f, Quantity::TC).lower.has_value());
}

TEST(Bounds, ContradictionNamesBothFacts) {
  Hopf h;
  h.store.assert_fact(h.p, Quantity::TC, Interval::exactly(2), "claimed");
  try {
    h.store.propagate();
    FAIL() << "expected a contradiction";
  } catch (const tcmap::Contradiction& c) {
    EXPECT_EQ(c.conflicting().size(), 2u);
    EXPECT_NE(std::string(c.what()).find("claimed"), std::string::npos);
  }
}

TEST(Bounds, DirectContradictionOnAssert) {
  FactStore s;
  const auto x = s.add_space("X");
  s.assert_fact(x, Quantity::TC, Interval::exactly(2), "a");
  EXPECT_THROW(s.assert_fact(x, Quantity::TC, Interval{0, 1}, "b"), tcmap::Contradiction);
}

TEST(Bounds, EmptySpaceAndBadInput) {
  FactStore s;
  const auto e = s.add_space("E", std::nullopt, true);
  EXPECT_EQ(s.interval(e, Quantity::TC), Interval::exactly(-1));
  EXPECT_THROW(s.interval(e, Quantity::HalfTC), tcmap::InvalidInput);
  EXPECT_THROW(s.add_space("E"), tcmap::InvalidInput);
  EXPECT_THROW(s.assert_fact(e, Quantity::TC, Interval{0, 100}, "x"), tcmap::InvalidInput);
  EXPECT_THROW(FactStore(-1), tcmap::InvalidInput);
}

TEST(Bounds, HalfTCIntoTorusIsDimension) {
  for (int n = 1; n <= 5; ++n) {
    FactStore s;
    const auto x = s.add_space("X");
    const auto t = s.add_space("T", SpaceId::torus(n));
    const auto f = s.add_map("f", x, t);
    s.propagate();
    EXPECT_EQ(s.interval(f, Quantity::HalfTC), Interval::exactly(n));
  }
}

// --- randomized fact sets ---------------------------------------------------

const std::vector<SpaceId>& literals() {
  static const std::vector<SpaceId> v{SpaceId::point(),   SpaceId::sphere(1),     SpaceId::sphere(2),
                                      SpaceId::sphere(3), SpaceId::torus(2),      SpaceId::torus(3),
                                      SpaceId::free_group(2), SpaceId::graph(1), SpaceId::hyperbolic(2)};
  return v;
}

FactStore random_store(std::mt19937_64& rng) {
  FactStore s(16);
  std::vector<EntityId> spaces, maps;
  const int nspaces = 2 + static_cast<int>(rng() % 4);
  for (int i = 0; i < nspaces; ++i) {
    const std::string name = "X" + std::to_string(i);
    if (rng() % 3 == 0)
      spaces.push_back(s.add_space(name));
    else
      spaces.push_back(s.add_space(name, literals()[rng() % literals().size()]));
  }
  auto pick = [&](const std::vector<EntityId>& v) { return v[rng() % v.size()]; };
  const int nmaps = 1 + static_cast<int>(rng() % 5);
  for (int i = 0; i < nmaps; ++i) maps.push_back(s.add_map("f" + std::to_string(i), pick(spaces), pick(spaces)));
  for (int i = 0; i < 3; ++i) {
    const EntityId f = pick(maps);
    for (EntityId g : maps)
      if (s.entity(g).domain == s.entity(f).codomain) {
        maps.push_back(s.add_composition("c" + std::to_string(i), g, f));
        break;
      }
  }
  if (rng() % 2) maps.push_back(s.add_product("prod", pick(maps), pick(maps)));
  if (rng() % 2) {
    const EntityId f = pick(maps);
    maps.push_back(s.add_product("sq", f, f));
  }
  if (rng() % 2) maps.push_back(s.add_identity("id", pick(spaces)));
  if (rng() % 2) s.add_quotient_product("qp", pick(maps));
  const int nfacts = static_cast<int>(rng() % 5);
  for (int i = 0; i < nfacts; ++i) {
    const EntityId f = pick(maps);
    const Quantity q = tcmap::kAllQuantities[rng() % 5];
    const int lo = static_cast<int>(rng() % 3);
    s.assert_fact(f, q, Interval{lo, lo + static_cast<int>(rng() % 8)}, "random");
  }
  const int nattrs = static_cast<int>(rng() % 4);
  for (int i = 0; i < nattrs; ++i) {
    const EntityId f = pick(maps);
    const Attribute a = tcmap::kAllAttributes[rng() % std::size(tcmap::kAllAttributes)];
    if (s.attribute(f, a) == Tri::Unknown) s.assert_attribute(f, a, rng() % 2 ? Tri::Yes : Tri::No, "random");
  }
  return s;
}

struct Outcome {
  bool contradiction = false;
  std::vector<std::pair<std::string, Interval>> cells;
  std::vector<std::pair<std::string, Tri>> attributes;
  bool operator==(const Outcome&) const = default;
};

Outcome run(FactStore s, std::optional<std::uint64_t> seed) {
  Outcome o;
  try {
    s.propagate({seed});
  } catch (const tcmap::Contradiction&) {
    o.contradiction = true;
    return o;
  }
  for (EntityId e = 0; e < s.entities().size(); ++e) {
    for (Quantity q : tcmap::kAllQuantities)
      if (FactStore::applies(s.entity(e), q))
        o.cells.emplace_back(s.entity(e).name + "." + tcmap::to_string(q), s.interval(e, q));
    if (s.entity(e).is_map)
      for (Attribute a : tcmap::kAllAttributes) o.attributes.emplace_back(s.entity(e).name, s.attribute(e, a));
  }
  return o;
}

TEST(Bounds, RandomOrderConfluence) {
  std::mt19937_64 rng(424242);
  int consistent = 0;
  for (int trial = 0; trial < 100; ++trial) {
    FactStore s;
    try {
      s = random_store(rng);
    } catch (const tcmap::Contradiction&) {
      continue;
    }
    const Outcome reference = run(s, std::nullopt);
    if (!reference.contradiction) ++consistent;
    for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_EQ(run(s, seed * 7919 + trial), reference) << "trial " << trial;
  }
  EXPECT_GT(consistent, 40);
}

TEST(Bounds, PropagationIsIdempotent) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    FactStore s;
    try {
      s = random_store(rng);
      s.propagate();
    } catch (const tcmap::Contradiction&) {
      continue;
    }
    const std::size_t facts = s.facts().size();
    const Outcome before = run(s, std::nullopt);
    EXPECT_EQ(s.propagate(), 1u);
    EXPECT_EQ(s.facts().size(), facts);
    EXPECT_EQ(run(s, std::nullopt), before);
  }
}

TEST(Bounds, ProvenanceIsGrounded) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    FactStore s;
    try {
      s = random_store(rng);
      s.propagate();
    } catch (const tcmap::Contradiction&) {
      continue;
    }
    for (const auto& f : s.facts()) {
      if (f.premises.empty()) {
        EXPECT_TRUE(f.rule == "given" || f.rule == "catalog") << s.explain_fact(f.id);
      }
      for (auto p : f.premises) EXPECT_LT(p, f.id);
    }
  }
}

// Identity maps on catalog spaces have known invariants; propagation must keep them.
TEST(Bounds, SoundAgainstCatalog) {
  FactStore s;
  struct Known {
    EntityId map;
    int cat, tc;
  };
  std::vector<Known> known;
  std::vector<std::pair<EntityId, int>> tori;
  int k = 0;
  for (const SpaceId& lit : literals()) {
    const auto x = s.add_space("X" + std::to_string(k), lit);
    const auto id = s.add_identity("id" + std::to_string(k), x);
    const auto idid = s.add_composition("idid" + std::to_string(k), id, id);
    const int cat = tcmap::cat_of(lit).value.lo, tc = tcmap::tc_of(lit).value.lo;
    known.push_back({id, cat, tc});
    known.push_back({idid, cat, tc});
    if (lit.kind == tcmap::SpaceKind::Torus) tori.emplace_back(id, lit.param);
    ++k;
  }
  const auto prod = s.add_product("idT", tori[0].first, tori[1].first);
  s.propagate();
  for (const Known& kn : known) {
    EXPECT_TRUE(s.interval(kn.map, Quantity::TC).contains(kn.tc)) << s.entity(kn.map).name;
    EXPECT_TRUE(s.interval(kn.map, Quantity::HalfTC).contains(kn.tc)) << s.entity(kn.map).name;
    EXPECT_TRUE(s.interval(kn.map, Quantity::Cat).contains(kn.cat)) << s.entity(kn.map).name;
  }
  EXPECT_TRUE(s.interval(prod, Quantity::TC).contains(tori[0].second + tori[1].second));
  EXPECT_TRUE(s.interval(prod, Quantity::Cat).contains(tori[0].second + tori[1].second));
}

TEST(Bounds, LoadsFactFile) {
  FactStore s;
  tcmap::io::load_fact_file(s, tcmap::io::read_json_file(TCMAP_DATA_DIR "/facts_hopf.json"), TCMAP_DATA_DIR);
  s.propagate();
  EXPECT_EQ(s.interval(s.entity_id("p"), Quantity::TC), Interval::exactly(1));
  EXPECT_EQ(s.interval(s.entity_id("h"), Quantity::HalfTC), Interval::exactly(1));
}

TEST(Bounds, FactFileCohomologyImport) {
  FactStore s;
  tcmap::io::load_fact_file(s, tcmap::io::read_json_file(TCMAP_DATA_DIR "/facts_torus.json"), TCMAP_DATA_DIR);
  s.propagate();
  const auto q = s.query("f", Quantity::TC);
  EXPECT_GE(q.interval.lo, 1);
  ASSERT_TRUE(q.lower);
}

}  // namespace
