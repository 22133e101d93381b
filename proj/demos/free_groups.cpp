// Folds a few homomorphisms F(2) -> F(2) and prints their invariants.
#include <iostream>

#include "tcmap/free_group.hpp"

int main() {
  using tcmap::FreeHom;
  struct Row {
    const char* name;
    FreeHom f;
  };
  const Row rows[] = {
      {"a->1, b->1", FreeHom::trivial(2, 2)},
      {"a->x, b->x", FreeHom::from_letters(2, 2, {{1}, {1}})},
      {"a->x^2, b->x^3", FreeHom::from_letters(2, 2, {{1, 1}, {1, 1, 1}})},
      {"a->x, b->y", FreeHom::identity(2)},
      {"a->xy, b->yx", FreeHom::from_letters(2, 2, {{1, 2}, {2, 1}})},
  };
  for (const auto& r : rows) {
    const tcmap::FoldedGraph g = tcmap::fold(r.f);
    std::cout << r.name << ": " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, image rank "
              << g.rank() << ", cat " << tcmap::cat_free_hom(r.f) << ", TC " << tcmap::tc_free_hom(r.f) << "\n";
  }

  const FreeHom squares = FreeHom::from_letters(1, 1, {{1, 1}});
  const tcmap::FoldedGraph g = tcmap::fold(squares);
  for (const auto& w : {tcmap::Word::reduce({1}, 1), tcmap::Word::reduce({1, 1, 1, 1}, 1)})
    std::cout << "x^" << w.size() << (tcmap::contains(g, w) ? " is" : " is not") << " in <x^2>\n";
}
