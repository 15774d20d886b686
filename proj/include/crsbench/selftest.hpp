#ifndef CRSBENCH_SELFTEST_HPP
#define CRSBENCH_SELFTEST_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crsbench {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct SelftestReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  double total_seconds = 0.0;
};

// Runs the ten acceptance criteria, printing one PASS/FAIL line per criterion
// to `log`. Deterministic given (seed, criteria set); independent of `threads`.
SelftestReport run_selftest(std::uint64_t seed, int threads, std::ostream& log);

// Subset variant (ids from 1 to 10); empty = all.
SelftestReport run_selftest(std::uint64_t seed, int threads, std::ostream& log,
                            const std::vector<int>& ids);

}  // namespace crsbench

#endif
