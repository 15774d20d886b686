// Acceptance gate: runs the ten criteria, one PASS/FAIL line each.
#include <cstdlib>
#include <iostream>

#include "crsbench/selftest.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  if (const char* env = std::getenv("CRSBENCH_SEED")) seed = std::strtoull(env, nullptr, 10);
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  crsbench::SelftestReport rep = crsbench::run_selftest(seed, 2, std::cout);
  return rep.all_pass ? 0 : 1;
}
