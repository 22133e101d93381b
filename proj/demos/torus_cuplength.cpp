// Cup-length bounds for self-maps of the 2-torus, from its cohomology ring.
#include <iostream>

#include "tcmap/graded_algebra.hpp"

int main() {
  using namespace tcmap;
  const Field q = Field::rationals();
  const GradedAlgebra torus = exterior_algebra(q, {{"x", 1}, {"y", 1}});
  std::cout << "zero-divisor cup-length of T^2: " << zero_divisor_cuplength(torus) << "\n";

  // Basis order 1, x, y, xy; each map is given by the images of x and y.
  struct Example {
    const char* name;
    int xx, xy, yx, yy;
  };
  for (const Example& e : {Example{"identity", 1, 0, 0, 1}, Example{"projection", 1, 0, 0, 0},
                           Example{"(x,y) -> (x+y, x+y)", 1, 1, 1, 1}, Example{"constant", 0, 0, 0, 0}}) {
    FieldMatrix m(q, 4, 4);
    m.set(0, 0, 1);
    m.set(1, 1, e.xx);
    m.set(2, 1, e.yx);
    m.set(1, 2, e.xy);
    m.set(2, 2, e.yy);
    m.set(3, 3, e.xx * e.yy - e.xy * e.yx);
    const AlgebraMap phi(torus, torus, m);
    std::cout << e.name << ": TC >= " << tc_map_lower_bound(phi) << ", cat >= " << cat_map_lower_bound(phi) << "\n";
  }
}
