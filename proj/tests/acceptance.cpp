// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <iostream>

#include "hypcoh/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const auto results = hypcoh::run_acceptance(only);
  hypcoh::print_acceptance(results, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
