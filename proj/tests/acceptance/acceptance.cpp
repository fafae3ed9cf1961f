#include <cstdlib>
#include <iostream>
#include <string>

#include "hcdyn/checks.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = hcdyn::kDefaultSeed;
  if (argc > 1) {
    seed = std::stoull(argv[1], nullptr, 0);
  }
  bool ok = true;
  for (const auto& r : hcdyn::run_all_checks(seed)) {
    std::cout << hcdyn::format_result(r) << std::flush;
    ok = ok && r.passed();
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
