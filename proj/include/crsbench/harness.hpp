#ifndef CRSBENCH_HARNESS_HPP
#define CRSBENCH_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "crsbench/instances.hpp"
#include "crsbench/json_io.hpp"
#include "crsbench/rng.hpp"

namespace crsbench {

// A scheme bound to one instance and one fractional point. The harness samples
// R(x) itself and hands (r, per-trial master stream) to the scheme; exactly one
// of run_frac / run_set is set, per `fractional`.
struct Scheme {
  std::string name;
  bool deterministic = false;
  bool fractional = false;
  std::function<Vec(const ItemSet&, const RngStream&)> run_frac;
  std::function<ItemSet(const ItemSet&, const RngStream&)> run_set;
};

// Known names: hg_crs, hg_merged, hg_crs_set, klp_big, klp_small, klp_gen,
// klp_combined, klp_bansal, kcs, kcs_bansal.
Scheme make_scheme(const std::string& name, const InstanceFile& inst, const FractionalPoint& x);
std::vector<std::string> scheme_names_for(const std::string& instance_type);

// Independent inclusion sampling of R(x) from the trial master stream, using a
// child space disjoint from the ones schemes consume.
ItemSet sample_r(const FractionalPoint& x, const RngStream& rng);

struct BalancednessReport {
  // Per element: conditional estimate E[y_e | e in R] (= E[y_e]/x_e) or
  // Pr[e in S | e in R]; -1 where x_e = 0 or no conditioning sample landed.
  std::vector<double> estimate;
  std::vector<double> stderr_est;       // 0 for exact reports
  std::vector<long long> cond_samples;  // trials with e in R
  long long n_samples = 0;              // requested N (0 for exact)
  double min_estimate = 1.0;            // over supp(x)
  double min_lower3 = 1.0;              // min (estimate - 3 stderr)
};

BalancednessReport estimate_balancedness(const Scheme& scheme, const FractionalPoint& x,
                                         long long n, std::uint64_t seed, int threads = 1);

// Exact expectation by enumerating all subsets of supp(x); |supp| <= 16 and the
// scheme must be deterministic.
BalancednessReport exact_balancedness_deterministic(const Scheme& scheme,
                                                    const FractionalPoint& x);

struct MonotonicityViolation {
  int chain = -1;
  int element = -1;
  double est_a = 0.0;  // retention estimate on the smaller set
  double est_b = 0.0;  // on the larger set
  double slack = 0.0;  // est_b - est_a - allowance; > 0 for a violation
};

// Random nested pairs A subset B subseteq supp(x). n = 0: exact pointwise
// comparison (deterministic schemes only). n > 0: coupled-stream Monte Carlo
// with a 3-sigma allowance on the paired difference. Empty result = pass.
std::vector<MonotonicityViolation> test_monotonicity(const Scheme& scheme,
                                                     const FractionalPoint& x, int chain_count,
                                                     long long n, std::uint64_t seed);
std::vector<MonotonicityViolation> test_monotonicity_chains(
    const Scheme& scheme, const std::vector<std::pair<ItemSet, ItemSet>>& chains, long long n,
    std::uint64_t seed);

struct ExperimentConfig {
  std::string scheme;
  std::string instance_path;  // JSON instance file
  std::string instance_id;    // label for the report; defaults to the path
  long long n_samples = 100000;
  std::uint64_t seed = 42;
  double bound = 0.0;          // claimed balancedness
  double tol_multiplier = 3.0; // pass iff estimate >= bound - tol * stderr
  int threads = 1;
  std::string out_csv;   // empty: stdout only
  std::string out_json;  // empty: skip
};

struct HarnessRow {
  std::string scheme;
  std::string instance_id;
  int element;
  long long n_samples;
  double estimate;
  double stderr_est;
  double bound;
  bool pass;
};

std::vector<HarnessRow> report_to_rows(const ExperimentConfig& cfg,
                                       const BalancednessReport& rep,
                                       const FractionalPoint& x);
std::string rows_to_csv(const std::vector<HarnessRow>& rows);

// Runs estimate_balancedness per the config, writes CSV (+ JSON summary with a
// config echo); returns the rows. Deterministic given (config, seed) for any
// thread count.
std::vector<HarnessRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace crsbench

#endif
