#pragma once

// Known cat/TC values of standard spaces and groups.

#include <algorithm>
#include <regex>
#include <string>

#include "tcmap/errors.hpp"

namespace tcmap {

/// Closed integer interval [lo, hi].  -1 is the value for empty spaces/maps.
struct Interval {
  int lo = 0;
  int hi = 0;

  static Interval exactly(int v) { return {v, v}; }
  bool is_exact() const noexcept { return lo == hi; }
  bool contains(int v) const noexcept { return lo <= v && v <= hi; }
  bool empty() const noexcept { return lo > hi; }
  Interval intersect(Interval o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
  std::string to_string() const { return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]"; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class SpaceKind { Point, Sphere, Torus, Graph, FreeGroup, FreeAbelian, HyperbolicGroup };

/// A catalog space.  Groups stand for their classifying spaces K(π,1).
struct SpaceId {
  SpaceKind kind = SpaceKind::Point;
  int param = 0;

  static SpaceId point() { return {SpaceKind::Point, 0}; }
  static SpaceId sphere(int n) { return make(SpaceKind::Sphere, n); }
  static SpaceId torus(int n) { return make(SpaceKind::Torus, n); }
  static SpaceId graph(int b1) { return make(SpaceKind::Graph, b1); }
  static SpaceId free_group(int n) { return make(SpaceKind::FreeGroup, n); }
  static SpaceId free_abelian(int n) { return make(SpaceKind::FreeAbelian, n); }
  static SpaceId hyperbolic(int cd) {
    if (cd < 2) throw InvalidInput("hyp(cd=" + std::to_string(cd) + "): torsion-free nonelementary hyperbolic groups have cd >= 2");
    return {SpaceKind::HyperbolicGroup, cd};
  }

  /// Parses "pt", "S^3", "T^2", "graph(b1=4)", "F(2)", "Z^3", "hyp(cd=2)".
  static SpaceId parse(const std::string& literal) {
    static const std::regex re(R"(^(?:(pt)|S\^(\d+)|T\^(\d+)|graph\(b1=(\d+)\)|F\((\d+)\)|Z\^(\d+)|hyp\(cd=(\d+)\))$)");
    std::smatch m;
    if (!std::regex_match(literal, m, re)) throw Unsupported("unsupported space literal '" + literal + "'");
    auto num = [&](int group) {
      const std::string s = m[group].str();
      if (s.size() > 6) throw ParseError("space literal parameter too large in '" + literal + "'");
      return std::stoi(s);
    };
    if (m[1].matched) return point();
    if (m[2].matched) return sphere(num(2));
    if (m[3].matched) return torus(num(3));
    if (m[4].matched) return graph(num(4));
    if (m[5].matched) return free_group(num(5));
    if (m[6].matched) return free_abelian(num(6));
    return hyperbolic(num(7));
  }

  std::string to_string() const {
    switch (kind) {
      case SpaceKind::Point: return "pt";
      case SpaceKind::Sphere: return "S^" + std::to_string(param);
      case SpaceKind::Torus: return "T^" + std::to_string(param);
      case SpaceKind::Graph: return "graph(b1=" + std::to_string(param) + ")";
      case SpaceKind::FreeGroup: return "F(" + std::to_string(param) + ")";
      case SpaceKind::FreeAbelian: return "Z^" + std::to_string(param);
      case SpaceKind::HyperbolicGroup: return "hyp(cd=" + std::to_string(param) + ")";
    }
    return "?";
  }

  friend bool operator==(const SpaceId&, const SpaceId&) = default;

 private:
  static SpaceId make(SpaceKind k, int p) {
    if (p < 0) throw InvalidInput("space parameters must be non-negative");
    return {k, p};
  }
};

/// Where a catalog value comes from.
enum class Backing {
  Trivial,           // contractible or otherwise immediate
  Theorem,           // proved facts about groups, graphs and odd spheres
  ExternalStandard,  // standard values outside that set (even spheres, cat of spheres)
};

inline const char* to_string(Backing b) {
  switch (b) {
    case Backing::Trivial: return "trivial";
    case Backing::Theorem: return "theorem";
    case Backing::ExternalStandard: return "external-standard";
  }
  return "?";
}

struct CatalogValue {
  Interval value;
  Backing backing;
  std::string reason;
};

inline CatalogValue tc_of(const SpaceId& s) {
  const int n = s.param;
  switch (s.kind) {
    case SpaceKind::Point: return {Interval::exactly(0), Backing::Trivial, "TC(pt) = 0"};
    case SpaceKind::Sphere:
      if (n == 0) throw Unsupported("S^0 is not path-connected");
      if (n % 2 == 1) return {Interval::exactly(1), Backing::Theorem, "TC(S^(2k+1)) = 1"};
      return {Interval::exactly(2), Backing::ExternalStandard, "TC(S^(2k)) = 2"};
    case SpaceKind::Torus:
    case SpaceKind::FreeAbelian:
      if (n == 0) return {Interval::exactly(0), Backing::Trivial, "contractible"};
      return {Interval::exactly(n), Backing::Theorem, "TC(Z^n) = cd(Z^n) = n (abelian group)"};
    case SpaceKind::Graph:
    case SpaceKind::FreeGroup:
      if (n == 0) return {Interval::exactly(0), Backing::Trivial, "contractible"};
      return {Interval::exactly(std::min(2, n)), Backing::Theorem, "TC(F(n)) = min{2, n}"};
    case SpaceKind::HyperbolicGroup:
      return {Interval::exactly(2 * n), Backing::Theorem, "TC(π) = 2 cd(π) (torsion-free hyperbolic)"};
  }
  throw Unsupported("tc_of: unsupported kind");
}

inline CatalogValue cat_of(const SpaceId& s) {
  const int n = s.param;
  switch (s.kind) {
    case SpaceKind::Point: return {Interval::exactly(0), Backing::Trivial, "cat(pt) = 0"};
    case SpaceKind::Sphere:
      if (n == 0) throw Unsupported("S^0 is not path-connected");
      return {Interval::exactly(1), Backing::ExternalStandard, "cat(S^n) = 1 (two contractible hemispheres)"};
    case SpaceKind::Torus:
    case SpaceKind::FreeAbelian:
      if (n == 0) return {Interval::exactly(0), Backing::Trivial, "contractible"};
      return {Interval::exactly(n), Backing::Theorem, "cat(π) = cd(π) = n"};
    case SpaceKind::Graph:
    case SpaceKind::FreeGroup:
      if (n == 0) return {Interval::exactly(0), Backing::Trivial, "contractible"};
      return {Interval::exactly(1), Backing::Theorem, "cat(π) = cd(π) = 1 (free group)"};
    case SpaceKind::HyperbolicGroup:
      return {Interval::exactly(n), Backing::Theorem, "cat(π) = cd(π)"};
  }
  throw Unsupported("cat_of: unsupported kind");
}

}  // namespace tcmap
