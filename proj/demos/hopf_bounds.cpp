// Builds a small fact store by hand, propagates it and explains two results.
#include <iostream>

#include "tcmap/bounds_engine.hpp"

int main() {
  using namespace tcmap;
  FactStore store;
  const auto s3 = store.add_space("S3", SpaceId::sphere(3));
  const auto rp3 = store.add_space("RP3");
  const auto p = store.add_map("p", s3, rp3);
  store.assert_attribute(p, Attribute::Nullhomotopic, Tri::No, "nonzero on H^3(-;Z/2)");

  const auto pt = store.add_space("pt", SpaceId::point());
  const auto s1 = store.add_space("S1", SpaceId::sphere(1));
  const auto h = store.add_map("h", pt, s1);

  const auto sweeps = store.propagate();
  std::cout << "fixpoint after " << sweeps << " sweeps, " << store.facts().size() << " facts\n\n";
  std::cout << store.explain(p, Quantity::TC) << "\n" << store.explain(h, Quantity::HalfTC);

  try {
    store.assert_fact(p, Quantity::TC, Interval::exactly(2), "a wrong guess");
  } catch (const Contradiction& c) {
    std::cout << "\nrejected: " << c.what() << "\n";
  }
}
