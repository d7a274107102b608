#include <iostream>

#include "isobif/acceptance.hpp"

int main() {
  isobif::RunConfig config;
  config.worker_count = isobif::default_worker_count();
  int failed = 0;
  for (const auto& r : isobif::run_acceptance(std::cout, config)) failed += !r.passed;
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
