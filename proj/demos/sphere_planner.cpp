// Validates the double-cover planner on S^2 and prints one sampled path per domain.
#include <cstdio>
#include <cstdlib>

#include "tcmap/planner_lab.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 2;
  const tcmap::Planner planner = tcmap::sphere_cover_planner(n);

  tcmap::ValidationOptions opt;
  opt.samples = 20000;
  opt.path_samples = 5;
  std::vector<bool> shown(planner.domains.size(), false);
  opt.on_path = [&](std::size_t sample, std::size_t domain, const tcmap::Path& path) {
    if (shown[domain]) return;
    shown[domain] = true;
    std::printf("sample %zu in %s:\n", sample, planner.domains[domain].name.c_str());
    for (const auto& q : path) {
      std::printf("  (");
      for (std::size_t i = 0; i < q.size(); ++i) std::printf(i ? ", %+.4f" : "%+.4f", q[i]);
      std::printf(")\n");
    }
  };

  const tcmap::PlannerReport r = tcmap::validate_planner(planner, opt);
  std::printf("%s: %zu samples, hits", r.planner.c_str(), r.samples);
  for (auto hits : r.domain_hits) std::printf(" %zu", hits);
  std::printf(", max endpoint error %.3g, max step %.4f, %s\n", r.max_endpoint_error, r.max_step,
              r.passed ? "passed" : "FAILED");
  return r.passed ? 0 : 1;
}
