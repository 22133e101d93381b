#pragma once

// Words in free groups, homomorphisms F(n) -> F(m), and Stallings folding of
// the image subgroup.  Generators are 1-based; a negative index denotes the
// inverse generator and 0 is never a valid letter.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tcmap/errors.hpp"

namespace tcmap {

/// A freely reduced word.
class Word {
 public:
  Word() = default;

  /// Freely reduces `letters`; every letter must satisfy 1 <= |letter| <= rank.
  static Word reduce(std::span<const int> letters, std::size_t rank) {
    Word w;
    for (int x : letters) {
      if (x == 0 || static_cast<std::size_t>(std::abs(x)) > rank)
        throw InvalidInput("letter " + std::to_string(x) + " is not a generator of F(" + std::to_string(rank) + ")");
      w.push(x);
    }
    return w;
  }

  static Word reduce(std::initializer_list<int> letters, std::size_t rank) {
    return reduce(std::span<const int>(letters.begin(), letters.size()), rank);
  }

  const std::vector<int>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  /// Largest generator index used (0 for the empty word).
  std::size_t max_generator() const {
    std::size_t m = 0;
    for (int x : letters_) m = std::max(m, static_cast<std::size_t>(std::abs(x)));
    return m;
  }

  Word inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
    return w;
  }

  friend Word operator*(const Word& a, const Word& b) {
    Word w = a;
    for (int x : b.letters_) w.push(x);
    return w;
  }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  void push(int x) {
    if (!letters_.empty() && letters_.back() == -x)
      letters_.pop_back();
    else
      letters_.push_back(x);
  }

  std::vector<int> letters_;
};

inline Word reduce_word(std::span<const int> letters, std::size_t rank) { return Word::reduce(letters, rank); }

/// Homomorphism F(domain_rank) -> F(codomain_rank), given on generators.
class FreeHom {
 public:
  FreeHom(std::size_t domain_rank, std::size_t codomain_rank, std::vector<Word> images)
      : domain_rank_(domain_rank), codomain_rank_(codomain_rank), images_(std::move(images)) {
    if (images_.size() != domain_rank_)
      throw DimensionMismatch("FreeHom: " + std::to_string(images_.size()) + " images for " +
                              std::to_string(domain_rank_) + " generators");
    for (const Word& w : images_)
      if (w.max_generator() > codomain_rank_)
        throw InvalidInput("FreeHom: image uses a generator beyond F(" + std::to_string(codomain_rank_) + ")");
  }

  /// Builds from raw letter lists, reducing each image.
  static FreeHom from_letters(std::size_t domain_rank, std::size_t codomain_rank,
                              const std::vector<std::vector<int>>& images) {
    std::vector<Word> words;
    words.reserve(images.size());
    for (const auto& img : images) words.push_back(Word::reduce(img, codomain_rank));
    return FreeHom(domain_rank, codomain_rank, std::move(words));
  }

  static FreeHom identity(std::size_t n) {
    std::vector<Word> images;
    for (int g = 1; g <= static_cast<int>(n); ++g) images.push_back(Word::reduce({g}, n));
    return FreeHom(n, n, std::move(images));
  }

  static FreeHom trivial(std::size_t n, std::size_t m) { return FreeHom(n, m, std::vector<Word>(n)); }

  std::size_t domain_rank() const noexcept { return domain_rank_; }
  std::size_t codomain_rank() const noexcept { return codomain_rank_; }
  const std::vector<Word>& images() const noexcept { return images_; }

  bool is_trivial() const {
    return std::all_of(images_.begin(), images_.end(), [](const Word& w) { return w.empty(); });
  }

 private:
  std::size_t domain_rank_;
  std::size_t codomain_rank_;
  std::vector<Word> images_;
};

inline Word apply_hom(const FreeHom& f, const Word& w) {
  if (w.max_generator() > f.domain_rank())
    throw DimensionMismatch("apply_hom: word uses a generator beyond F(" + std::to_string(f.domain_rank()) + ")");
  Word out;
  for (int x : w.letters()) {
    const Word& img = f.images()[static_cast<std::size_t>(std::abs(x)) - 1];
    out = out * (x > 0 ? img : img.inverse());
  }
  return out;
}

struct LabeledEdge {
  std::size_t source;
  std::size_t target;
  int label;  // positive generator index

  friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

/// Base-pointed, folded core graph of a subgroup of F(m).  Vertex 0 is the
/// base; vertices are numbered in breadth-first order from the base, visiting
/// letters in the order 1, -1, 2, -2, ..., so equal subgroups give equal graphs.
class FoldedGraph {
 public:
  FoldedGraph(std::size_t generator_rank, std::size_t vertex_count, std::vector<LabeledEdge> edges)
      : generator_rank_(generator_rank), vertex_count_(vertex_count), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
  }

  std::size_t generator_rank() const noexcept { return generator_rank_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<LabeledEdge>& edges() const noexcept { return edges_; }
  static constexpr std::size_t base() noexcept { return 0; }

  /// Rank of the subgroup: |E| - |V| + 1.
  std::size_t rank() const noexcept { return edges_.size() + 1 - vertex_count_; }

  /// Follows one signed letter from `v`, if an edge exists.
  std::optional<std::size_t> step(std::size_t v, int letter) const {
    for (const auto& e : edges_) {
      if (letter > 0 && e.label == letter && e.source == v) return e.target;
      if (letter < 0 && e.label == -letter && e.target == v) return e.source;
    }
    return std::nullopt;
  }

  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (const auto& e : edges_) d += (e.source == v) + (e.target == v);
    return d;
  }

  /// No vertex has two outgoing, or two incoming, edges with the same label.
  bool is_deterministic() const {
    std::map<std::tuple<std::size_t, int>, int> seen;
    for (const auto& e : edges_) {
      if (++seen[{e.source, e.label}] > 1) return false;
      if (++seen[{e.target, -e.label}] > 1) return false;
    }
    return true;
  }

  /// Every non-base vertex has degree at least 2.
  bool is_core() const {
    for (std::size_t v = 1; v < vertex_count_; ++v)
      if (degree(v) < 2) return false;
    return true;
  }

  bool is_connected() const {
    std::vector<bool> seen(vertex_count_, false);
    std::deque<std::size_t> queue{base()};
    seen[base()] = true;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (const auto& e : edges_) {
        for (auto [a, b] : {std::pair{e.source, e.target}, std::pair{e.target, e.source}})
          if (a == v && !seen[b]) {
            seen[b] = true;
            queue.push_back(b);
          }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
  }

  friend bool operator==(const FoldedGraph&, const FoldedGraph&) = default;

 private:
  std::size_t generator_rank_;
  std::size_t vertex_count_;
  std::vector<LabeledEdge> edges_;
};

namespace detail {

// Union-find over vertices plus, per representative, one neighbour per signed
// label.  Clashes discovered while inserting or merging go onto a FIFO queue.
class Folder {
 public:
  std::size_t add_vertex() {
    parent_.push_back(parent_.size());
    adj_.emplace_back();
    return parent_.size() - 1;
  }

  void add_edge(std::size_t u, std::size_t v, int label) {
    u = find(u);
    v = find(v);
    if (auto it = adj_[u].find(label); it != adj_[u].end()) {
      queue_.emplace_back(v, it->second);
    } else if (auto jt = adj_[v].find(-label); jt != adj_[v].end()) {
      queue_.emplace_back(u, jt->second);
    } else {
      adj_[u][label] = v;
      adj_[v][-label] = u;
    }
    drain();
  }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // Positive-label edges between representatives.
  std::vector<LabeledEdge> edges() {
    std::vector<LabeledEdge> out;
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      if (find(v) != v) continue;
      for (const auto& [label, w] : adj_[v])
        if (label > 0) out.push_back({v, find(w), label});
    }
    return out;
  }

 private:
  void drain() {
    while (!queue_.empty()) {
      auto [a, b] = queue_.front();
      queue_.pop_front();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      parent_[b] = a;
      auto moved = std::move(adj_[b]);
      adj_[b].clear();
      for (const auto& [label, w] : moved) {
        if (auto it = adj_[a].find(label); it != adj_[a].end()) {
          if (find(it->second) != find(w)) queue_.emplace_back(it->second, w);
        } else {
          adj_[a][label] = w;
        }
      }
    }
  }

  std::vector<std::size_t> parent_;
  std::vector<std::map<int, std::size_t>> adj_;
  std::deque<std::pair<std::size_t, std::size_t>> queue_;
};

}  // namespace detail

/// Stallings folding of the subgroup generated by the images of `f`.
inline FoldedGraph fold(const FreeHom& f) {
  detail::Folder folder;
  const std::size_t base = folder.add_vertex();
  for (const Word& w : f.images()) {
    if (w.empty()) continue;
    std::size_t at = base;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const int x = w.letters()[i];
      const std::size_t next = i + 1 == w.size() ? base : folder.add_vertex();
      if (x > 0)
        folder.add_edge(at, next, x);
      else
        folder.add_edge(next, at, -x);
      at = next;
    }
  }

  std::vector<LabeledEdge> edges = folder.edges();
  const std::size_t root = folder.find(base);

  // Core trimming: drop non-base vertices of degree <= 1 until none remain.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::size_t, std::size_t> deg;
    for (const auto& e : edges) {
      ++deg[e.source];
      ++deg[e.target];
    }
    for (const auto& [v, d] : deg) {
      if (v == root || d > 1) continue;
      std::erase_if(edges, [v = v](const LabeledEdge& e) { return e.source == v || e.target == v; });
      changed = true;
      break;
    }
  }

  // Canonical breadth-first numbering from the base.
  std::map<std::size_t, std::size_t> number{{root, 0}};
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (int g = 1; g <= static_cast<int>(f.codomain_rank()); ++g) {
      for (int letter : {g, -g}) {
        for (const auto& e : edges) {
          std::optional<std::size_t> w;
          if (letter > 0 && e.label == g && e.source == v) w = e.target;
          if (letter < 0 && e.label == g && e.target == v) w = e.source;
          if (w && !number.contains(*w)) {
            number.emplace(*w, number.size());
            queue.push_back(*w);
          }
        }
      }
    }
  }
  for (auto& e : edges) {
    e.source = number.at(e.source);
    e.target = number.at(e.target);
  }
  return FoldedGraph(f.codomain_rank(), number.size(), std::move(edges));
}

inline std::size_t image_rank(const FreeHom& f) { return fold(f).rank(); }

/// Membership in the subgroup: trace `w` from the base and require a return to it.
inline bool contains(const FoldedGraph& g, const Word& w) {
  if (w.max_generator() > g.generator_rank())
    throw InvalidInput("contains: word uses a generator beyond F(" + std::to_string(g.generator_rank()) + ")");
  std::size_t at = FoldedGraph::base();
  for (int x : w.letters()) {
    auto next = g.step(at, x);
    if (!next) return false;
    at = *next;
  }
  return at == FoldedGraph::base();
}

/// TC of a free-group homomorphism: 0 for the trivial map, 1 when the image
/// is infinite cyclic, 2 otherwise.
inline int tc_free_hom(const FreeHom& f) {
  const std::size_t r = image_rank(f);
  return r == 0 ? 0 : (r == 1 ? 1 : 2);
}

/// LS-category of a free-group homomorphism: 0 iff trivial, else 1 (cat F(m) = cd F(m) = 1).
inline int cat_free_hom(const FreeHom& f) { return f.is_trivial() ? 0 : 1; }

}  // namespace tcmap
