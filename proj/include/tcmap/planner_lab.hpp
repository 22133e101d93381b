#pragma once

// Explicit f-motion planners on model spaces (spheres, real projective
// spaces, tori) and a sampling validator for the planner axioms
//   path(x0, x1)(0) = f(x0),  path(x0, x1)(1) = f(x1).
//
// Domains are validated as a partition of X × X rather than an open cover.
// For ANR sources the generalized sectional category (arbitrary, not
// necessarily open, domains) agrees with the open-cover version, so a
// partition with k+1 pieces still certifies TC(f) <= k.  Continuity is only
// checked through a sampled step bound; it is never claimed as a proof.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tcmap/errors.hpp"

namespace tcmap {

using Point = std::vector<double>;
using Path = std::vector<Point>;

enum class FactorKind { Sphere, RealProjective, Circle };

/// One factor of a model space.  Spheres S^n and RP^n use unit vectors in
/// R^{n+1} (RP^n identifies ±x); circles use a single angle in [0, 2π).
struct Factor {
  FactorKind kind = FactorKind::Circle;
  int n = 1;

  std::size_t coordinate_dim() const noexcept { return kind == FactorKind::Circle ? 1 : static_cast<std::size_t>(n) + 1; }
};

namespace geometry {

inline double dot(const double* a, const double* b, std::size_t d) {
  double s = 0;
  for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

/// Great-circle angle between unit vectors, 2·atan2(|a-b|, |a+b|), accurate near 0 and π.
inline double sphere_angle(const double* a, const double* b, std::size_t d) {
  double minus = 0, plus = 0;
  for (std::size_t i = 0; i < d; ++i) {
    minus += (a[i] - b[i]) * (a[i] - b[i]);
    plus += (a[i] + b[i]) * (a[i] + b[i]);
  }
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus));
}

inline double circle_distance(double a, double b) { return std::fabs(std::remainder(b - a, 2.0 * std::numbers::pi)); }

inline double wrap_angle(double a) {
  double r = std::fmod(a, 2.0 * std::numbers::pi);
  return r < 0 ? r + 2.0 * std::numbers::pi : r;
}

}  // namespace geometry

class ModelSpace {
 public:
  ModelSpace() = default;
  explicit ModelSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {}

  static ModelSpace sphere(int n) {
    if (n < 1) throw InvalidInput("sphere: dimension must be >= 1");
    return ModelSpace({{FactorKind::Sphere, n}});
  }
  static ModelSpace real_projective(int n) {
    if (n < 1) throw InvalidInput("real projective space: dimension must be >= 1");
    return ModelSpace({{FactorKind::RealProjective, n}});
  }
  static ModelSpace circle() { return ModelSpace({{FactorKind::Circle, 1}}); }
  static ModelSpace torus(int n) {
    if (n < 1) throw InvalidInput("torus: dimension must be >= 1");
    return ModelSpace(std::vector<Factor>(static_cast<std::size_t>(n), Factor{FactorKind::Circle, 1}));
  }
  static ModelSpace product(const ModelSpace& a, const ModelSpace& b) {
    std::vector<Factor> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return ModelSpace(std::move(f));
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }

  std::size_t coordinate_dim() const noexcept {
    std::size_t d = 0;
    for (const auto& f : factors_) d += f.coordinate_dim();
    return d;
  }

  std::string name() const {
    if (!factors_.empty() && std::all_of(factors_.begin(), factors_.end(),
                                         [](const Factor& f) { return f.kind == FactorKind::Circle; }))
      return factors_.size() == 1 ? "S^1" : "T^" + std::to_string(factors_.size());
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "×";
      const Factor& f = factors_[i];
      s += f.kind == FactorKind::Sphere ? "S^" + std::to_string(f.n)
           : f.kind == FactorKind::RealProjective ? "RP^" + std::to_string(f.n)
                                                  : std::string("S^1");
    }
    return s;
  }

  /// Max over factors of the factor metric: geodesic angle on spheres,
  /// min(d(x,y), d(x,-y)) on RP^n, circular distance on circles.
  double distance(const Point& a, const Point& b) const {
    double worst = 0;
    std::size_t off = 0;
    for (const auto& f : factors_) {
      const std::size_t d = f.coordinate_dim();
      double dist = 0;
      switch (f.kind) {
        case FactorKind::Sphere: dist = geometry::sphere_angle(&a[off], &b[off], d); break;
        case FactorKind::RealProjective: {
          const double ang = geometry::sphere_angle(&a[off], &b[off], d);
          dist = std::min(ang, std::numbers::pi - ang);
          break;
        }
        case FactorKind::Circle: dist = geometry::circle_distance(a[off], b[off]); break;
      }
      worst = std::max(worst, dist);
      off += d;
    }
    return worst;
  }

  /// Uniform sample (normalized Gaussian on spheres, uniform angle on circles).
  Point sample(std::mt19937_64& rng) const {
    Point p;
    p.reserve(coordinate_dim());
    for (const auto& f : factors_) sample_factor(f, rng, p);
    return p;
  }

  /// A random pair where, per factor, the second point is with probability
  /// 1/8 the antipode of the first, with probability 1/8 equal to it, and
  /// otherwise independent.
  std::pair<Point, Point> sample_pair(std::mt19937_64& rng) const {
    Point x, y;
    for (const auto& f : factors_) {
      const std::size_t start = x.size();
      sample_factor(f, rng, x);
      const std::uint64_t mode = rng() % 8;
      if (mode == 0 || mode == 1) {
        for (std::size_t i = start; i < x.size(); ++i) y.push_back(x[i]);
        if (mode == 0) antipode_factor(f, y, start);
      } else {
        sample_factor(f, rng, y);
      }
    }
    return {std::move(x), std::move(y)};
  }

  Point antipode(const Point& p) const {
    Point q = p;
    std::size_t off = 0;
    for (const auto& f : factors_) {
      antipode_factor(f, q, off);
      off += f.coordinate_dim();
    }
    return q;
  }

 private:
  static void sample_factor(const Factor& f, std::mt19937_64& rng, Point& out) {
    if (f.kind == FactorKind::Circle) {
      std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
      out.push_back(u(rng));
      return;
    }
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t start = out.size();
    double norm = 0;
    do {
      out.resize(start);
      norm = 0;
      for (std::size_t i = 0; i < f.coordinate_dim(); ++i) {
        const double v = g(rng);
        out.push_back(v);
        norm += v * v;
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (std::size_t i = start; i < out.size(); ++i) out[i] /= norm;
  }

  static void antipode_factor(const Factor& f, Point& p, std::size_t off) {
    if (f.kind == FactorKind::Circle) {
      p[off] = geometry::wrap_angle(p[off] + std::numbers::pi);
      return;
    }
    for (std::size_t i = 0; i < f.coordinate_dim(); ++i) p[off + i] = -p[off + i];
  }

  std::vector<Factor> factors_;
};

struct PlannerDomain {
  std::string name;
  std::function<bool(const Point&, const Point&)> contains;
  /// Path in the target sampled at t = k/(K-1), k = 0..K-1.
  std::function<Path(const Point&, const Point&, std::size_t)> path;
};

struct Planner {
  std::string name;
  ModelSpace source;
  ModelSpace target;
  std::function<Point(const Point&)> map;
  std::vector<PlannerDomain> domains;
  bool partition = true;  // domains are meant to be pairwise disjoint

  /// Index of the first domain containing (x0, x1).
  std::optional<std::size_t> locate(const Point& x0, const Point& x1) const {
    for (std::size_t i = 0; i < domains.size(); ++i)
      if (domains[i].contains(x0, x1)) return i;
    return std::nullopt;
  }
};

inline constexpr double kDefaultAntipodalTolerance = 1e-9;

namespace detail {

inline double sample_time(std::size_t k, std::size_t samples) {
  return static_cast<double>(k) / static_cast<double>(samples - 1);
}

inline void check_path_samples(std::size_t samples) {
  if (samples < 2) throw InvalidInput("paths need at least 2 samples");
}

inline Path constant_path(const Point& p, std::size_t samples) {
  check_path_samples(samples);
  return Path(samples, p);
}

// Spherical interpolation from x to y; exact at both endpoints.
inline Path slerp_path(const Point& x, const Point& y, std::size_t samples) {
  check_path_samples(samples);
  const std::size_t d = x.size();
  const double theta = geometry::sphere_angle(x.data(), y.data(), d);
  if (theta == 0) return constant_path(x, samples);
  Path path;
  path.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = sample_time(k, samples);
    if (k == 0) {
      path.push_back(x);
      continue;
    }
    if (k + 1 == samples) {
      path.push_back(y);
      continue;
    }
    Point p(d);
    if (theta < 1e-9) {
      double norm = 0;
      for (std::size_t i = 0; i < d; ++i) {
        p[i] = (1 - t) * x[i] + t * y[i];
        norm += p[i] * p[i];
      }
      norm = std::sqrt(norm);
      for (auto& v : p) v /= norm;
    } else {
      const double s = std::sin(theta);
      const double a = std::sin((1 - t) * theta) / s;
      const double b = std::sin(t * theta) / s;
      for (std::size_t i = 0; i < d; ++i) p[i] = a * x[i] + b * y[i];
    }
    path.push_back(std::move(p));
  }
  return path;
}

inline bool antipodal_dot(const Point& x, const Point& y, double tol) {
  return geometry::dot(x.data(), y.data(), x.size()) <= -1.0 + tol;
}

inline bool antipodal_angles(double a, double b, double tol) { return std::cos(b - a) <= -1.0 + tol; }

}  // namespace detail

/// The double cover p: S^n -> RP^n with two domains: non-antipodal pairs follow
/// the unique geodesic (pushed down to RP^n), antipodal pairs get the constant
/// path at p(x) (near-antipodal pairs take the short arc from x to -y).
/// Two domains realize TC(p) = 1.
inline Planner sphere_cover_planner(int n, double antipodal_tol = kDefaultAntipodalTolerance) {
  if (n < 1) throw InvalidInput("sphere_cover_planner: n must be >= 1");
  Planner p{"sphere-cover(" + std::to_string(n) + ")", ModelSpace::sphere(n), ModelSpace::real_projective(n),
            [](const Point& x) { return x; }, {}, true};
  p.domains.push_back({"nonantipodal",
                       [antipodal_tol](const Point& x, const Point& y) { return !detail::antipodal_dot(x, y, antipodal_tol); },
                       [](const Point& x, const Point& y, std::size_t k) { return detail::slerp_path(x, y, k); }});
  p.domains.push_back({"antipodal",
                       [antipodal_tol](const Point& x, const Point& y) { return detail::antipodal_dot(x, y, antipodal_tol); },
                       [](const Point& x, const Point& y, std::size_t k) {
                         // Within the tolerance band y is only nearly -x; the short arc
                         // from x to -y is constant at true antipodes and ends at p(y).
                         Point minus_y(y.size());
                         for (std::size_t i = 0; i < y.size(); ++i) minus_y[i] = -y[i];
                         return detail::slerp_path(x, minus_y, k);
                       }});
  return p;
}

/// Identity planner on S^1 (angles): shorter arc for non-antipodal pairs,
/// counterclockwise half-turn for antipodal pairs.
inline Planner circle_identity_planner(double antipodal_tol = kDefaultAntipodalTolerance) {
  Planner p{"circle", ModelSpace::circle(), ModelSpace::circle(), [](const Point& x) { return x; }, {}, true};
  p.domains.push_back(
      {"shorter-arc",
       [antipodal_tol](const Point& x, const Point& y) { return !detail::antipodal_angles(x[0], y[0], antipodal_tol); },
       [](const Point& x, const Point& y, std::size_t k) {
         detail::check_path_samples(k);
         const double delta = std::remainder(y[0] - x[0], 2.0 * std::numbers::pi);
         Path path;
         for (std::size_t i = 0; i < k; ++i)
           path.push_back({geometry::wrap_angle(x[0] + detail::sample_time(i, k) * delta)});
         return path;
       }});
  p.domains.push_back(
      {"half-turn-ccw",
       [antipodal_tol](const Point& x, const Point& y) { return detail::antipodal_angles(x[0], y[0], antipodal_tol); },
       [](const Point& x, const Point& y, std::size_t k) {
         detail::check_path_samples(k);
         // π exactly at true antipodes; inside the tolerance band it lands on y.
         const double sweep = std::numbers::pi + std::remainder(y[0] - x[0] - std::numbers::pi, 2.0 * std::numbers::pi);
         Path path;
         for (std::size_t i = 0; i < k; ++i)
           path.push_back({geometry::wrap_angle(x[0] + detail::sample_time(i, k) * sweep)});
         return path;
       }});
  return p;
}

/// Finds pairs lying in zero or in several domains among `samples` seeded pairs.
inline std::optional<std::pair<Point, Point>> find_partition_defect(const Planner& p, std::size_t samples,
                                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    auto [x, y] = p.source.sample_pair(rng);
    std::size_t hits = 0;
    for (const auto& d : p.domains) hits += d.contains(x, y) ? 1 : 0;
    if (hits != 1) return std::pair{std::move(x), std::move(y)};
  }
  return std::nullopt;
}

/// Product planner on X × X' from planners with a+1 and b+1 domains: domain s
/// is the union of D_i × E_j over i + j = s, paths are taken componentwise.
/// Both inputs must be partitions.
inline Planner product_planner(const Planner& a, const Planner& b) {
  if (!a.partition || !b.partition) throw InvalidInput("product_planner: inputs must be partition planners");
  for (const Planner* p : {&a, &b})
    if (find_partition_defect(*p, 512, 0x5eedULL))
      throw InvalidInput("product_planner: domains of '" + p->name + "' overlap or leave a gap");

  const std::size_t split_src = a.source.coordinate_dim();
  auto first = [](const Point& x, std::size_t n) { return Point(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)); };
  auto rest = [](const Point& x, std::size_t n) { return Point(x.begin() + static_cast<std::ptrdiff_t>(n), x.end()); };

  Planner out;
  out.name = a.name + "×" + b.name;
  out.source = ModelSpace::product(a.source, b.source);
  out.target = ModelSpace::product(a.target, b.target);
  out.partition = true;
  out.map = [a, b, split_src, first, rest](const Point& x) {
    Point fx = a.map(first(x, split_src));
    Point gx = b.map(rest(x, split_src));
    fx.insert(fx.end(), gx.begin(), gx.end());
    return fx;
  };

  const std::size_t total = a.domains.size() + b.domains.size() - 1;
  for (std::size_t s = 0; s < total; ++s) {
    PlannerDomain d;
    d.name = "level-" + std::to_string(s);
    d.contains = [a, b, s, split_src, first, rest](const Point& x, const Point& y) {
      const auto i = a.locate(first(x, split_src), first(y, split_src));
      const auto j = b.locate(rest(x, split_src), rest(y, split_src));
      return i && j && *i + *j == s;
    };
    d.path = [a, b, split_src, first, rest](const Point& x, const Point& y, std::size_t k) {
      const Point xa = first(x, split_src), ya = first(y, split_src);
      const Point xb = rest(x, split_src), yb = rest(y, split_src);
      const auto i = a.locate(xa, ya);
      const auto j = b.locate(xb, yb);
      if (!i || !j) throw InvalidInput("product_planner: pair outside every domain");
      Path pa = a.domains[*i].path(xa, ya, k);
      const Path pb = b.domains[*j].path(xb, yb, k);
      for (std::size_t t = 0; t < k; ++t) pa[t].insert(pa[t].end(), pb[t].begin(), pb[t].end());
      return pa;
    };
    out.domains.push_back(std::move(d));
  }
  return out;
}

/// Identity planner on T^n with n+1 domains (iterated product of circle planners).
inline Planner torus_identity_planner(int n, double antipodal_tol = kDefaultAntipodalTolerance) {
  if (n < 1) throw InvalidInput("torus_identity_planner: n must be >= 1");
  Planner p = circle_identity_planner(antipodal_tol);
  for (int i = 1; i < n; ++i) p = product_planner(p, circle_identity_planner(antipodal_tol));
  p.name = "torus(" + std::to_string(n) + ")";
  return p;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class CoverageMode { Partition, Cover };

struct ValidationOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-9;               // endpoint tolerance
  std::size_t path_samples = 64;   // K
  CoverageMode mode = CoverageMode::Partition;
  bool check_determinism = true;
  /// Called for each sampled pair with (sample index, domain index, path).
  std::function<void(std::size_t, std::size_t, const Path&)> on_path;
};

struct PlannerReport {
  std::string planner;
  std::size_t samples = 0;
  std::size_t path_samples = 0;
  std::size_t domain_count = 0;
  std::vector<std::size_t> domain_hits;  // pairs assigned to each domain
  std::size_t uncovered = 0;
  std::size_t overlapping = 0;           // pairs in more than one domain
  std::optional<std::pair<Point, Point>> first_uncovered;
  std::optional<std::pair<Point, Point>> first_overlap;
  double max_endpoint_error = 0;
  double max_step = 0;
  std::uint64_t digest = 0;
  bool deterministic = true;
  bool coverage_ok = true;
  bool endpoints_ok = true;
  bool passed = true;

  double coverage() const { return samples == 0 ? 1.0 : static_cast<double>(samples - uncovered) / static_cast<double>(samples); }
};

namespace detail {

inline void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
}

inline PlannerReport run_validation(const Planner& p, const ValidationOptions& opt, bool emit) {
  check_path_samples(opt.path_samples);
  PlannerReport r;
  r.planner = p.name;
  r.samples = opt.samples;
  r.path_samples = opt.path_samples;
  r.domain_count = p.domains.size();
  r.domain_hits.assign(p.domains.size(), 0);
  r.digest = 0xcbf29ce484222325ULL;

  std::mt19937_64 rng(opt.seed);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    auto [x0, x1] = p.source.sample_pair(rng);
    std::optional<std::size_t> chosen;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < p.domains.size(); ++i)
      if (p.domains[i].contains(x0, x1)) {
        ++hits;
        if (!chosen) chosen = i;
      }
    if (hits == 0) {
      ++r.uncovered;
      if (!r.first_uncovered) r.first_uncovered = {x0, x1};
      fnv_mix(r.digest, "U", 1);
      continue;
    }
    if (hits > 1) {
      ++r.overlapping;
      if (!r.first_overlap) r.first_overlap = {x0, x1};
    }
    ++r.domain_hits[*chosen];

    const Path path = p.domains[*chosen].path(x0, x1, opt.path_samples);
    if (path.size() != opt.path_samples) throw InvalidInput("planner returned a path with the wrong number of samples");
    const double e0 = p.target.distance(path.front(), p.map(x0));
    const double e1 = p.target.distance(path.back(), p.map(x1));
    r.max_endpoint_error = std::max({r.max_endpoint_error, e0, e1});
    for (std::size_t k = 1; k < path.size(); ++k) r.max_step = std::max(r.max_step, p.target.distance(path[k - 1], path[k]));

    const std::uint64_t idx = *chosen;
    fnv_mix(r.digest, &idx, sizeof idx);
    for (const Point& q : path) fnv_mix(r.digest, q.data(), q.size() * sizeof(double));
    if (emit && opt.on_path) opt.on_path(s, *chosen, path);
  }

  r.coverage_ok = r.uncovered == 0 && (opt.mode == CoverageMode::Cover || r.overlapping == 0);
  r.endpoints_ok = r.max_endpoint_error <= opt.tol;
  return r;
}

}  // namespace detail

/// Samples `samples` seeded pairs and checks coverage, the endpoint axiom
/// (within `tol` in the target metric) and a step bound along each path.
/// With check_determinism the whole run is repeated and digests compared.
inline PlannerReport validate_planner(const Planner& p, const ValidationOptions& opt) {
  if (!(opt.tol > 0)) throw InvalidInput("validate_planner: tolerance must be positive");
  PlannerReport r = detail::run_validation(p, opt, true);
  if (opt.check_determinism) {
    const PlannerReport again = detail::run_validation(p, opt, false);
    r.deterministic = again.digest == r.digest && again.max_step == r.max_step &&
                      again.max_endpoint_error == r.max_endpoint_error;
  }
  r.passed = r.coverage_ok && r.endpoints_ok && r.deterministic;
  return r;
}

}  // namespace tcmap
