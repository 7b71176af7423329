// Runs every acceptance criterion with the default grid and prints one line each.
// Usage: acceptance [report.json]

#include <cstdio>
#include <fstream>
#include <iostream>

#include "llgtw/acceptance.hpp"

int main(int argc, char** argv)
{
  using namespace llgtw;
  const AcceptanceSuite suite;
  const auto results = suite.run_all([](const CriterionResult& r) {
    std::printf("[%s] %2d %s: observed %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.observed.dump().c_str());
    std::fflush(stdout);
  });
  const auto report = report_json(results);
  if (argc > 1) {
    std::ofstream f(argv[1]);
    f << report.dump(2) << '\n';
    if (!f) {
      std::cerr << "cannot write " << argv[1] << '\n';
      return 1;
    }
  }
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
