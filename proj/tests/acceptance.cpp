// Acceptance suite: one PASS/FAIL line per criterion. With arguments, runs
// only the listed criteria. Exit status is the number of failed criteria.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <vector>

#include "regtrace/acceptance.hpp"

namespace acc = regtrace::acceptance;

int main(int argc, char** argv) {
  const std::vector<std::function<acc::CriterionResult()>> all = {
      [] { return acc::criterion1(); }, [] { return acc::criterion2(); }, [] { return acc::criterion3(); },
      [] { return acc::criterion4(); }, [] { return acc::criterion5(); }, [] { return acc::criterion6(); },
      [] { return acc::criterion7(); }, [] { return acc::criterion8(); }, [] { return acc::criterion9(); },
      [] { return acc::criterion10(); }};
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= 10; ++i) ids.push_back(i);

  int failed = 0;
  for (int id : ids) {
    if (id < 1 || id > 10) {
      std::cerr << "no criterion " << id << "\n";
      return 64;
    }
    const auto r = all[static_cast<std::size_t>(id - 1)]();
    std::cout << acc::summary_line(r) << std::endl;
    failed += r.passed() ? 0 : 1;
  }
  return failed;
}
