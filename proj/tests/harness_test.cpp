#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crsbench/error.hpp"
#include "crsbench/harness.hpp"
#include "crsbench/json_io.hpp"
#include "crsbench/knapsack_crs.hpp"

using namespace crsbench;

namespace {
Scheme knap_scheme(const std::string& name, const KnapsackInstance& inst,
                   const FractionalPoint& x) {
  InstanceFile f;
  f.type = "knapsack";
  f.knap = inst;
  return make_scheme(name, f, x);
}
}  // namespace

TEST_CASE("identity scheme has unit ratios even under sampling") {
  // every subset fits -> the small scheme echoes chi^R -> conditional ratio 1
  KnapsackInstance inst{{0.2, 0.3, 0.4}, {1.0, 1.0, 1.0}};
  FractionalPoint x{0.5, 0.6, 0.7};
  Scheme s = knap_scheme("klp_small", inst, x);
  BalancednessReport mc = estimate_balancedness(s, x, 20000, 5, 1);
  BalancednessReport ex = exact_balancedness_deterministic(s, x);
  for (int i = 0; i < 3; ++i) {
    CHECK(mc.estimate[i] == doctest::Approx(1.0));
    CHECK(ex.estimate[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mc.stderr_est[i] == doctest::Approx(0.0));
  }
  CHECK(mc.n_samples == 20000);
}

TEST_CASE("monte carlo agrees with exact enumeration") {
  KnapsackInstance inst{{0.45, 0.45, 0.45}, {1.0, 1.0, 1.0}};
  FractionalPoint x{0.8, 0.7, 0.6};
  Scheme s = knap_scheme("klp_gen", inst, x);
  BalancednessReport ex = exact_balancedness_deterministic(s, x);
  BalancednessReport mc = estimate_balancedness(s, x, 50000, 6, 1);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(mc.estimate[i] - ex.estimate[i]) <= 4.0 * mc.stderr_est[i] + 1e-9);
}

TEST_CASE("deliberately non-monotone mutant is caught") {
  // branch 2 flipped to grow with a(R): per-element allotment (1 - 1/a(R))
  // increases as the set gets bigger (for a(R) slightly above 1)
  KnapsackInstance inst{Vec(6, 0.3), Vec(6, 1.0)};
  FractionalPoint x(6, 0.9);
  Scheme mutant;
  mutant.name = "mutant";
  mutant.deterministic = true;
  mutant.fractional = true;
  mutant.run_frac = [inst](const ItemSet& r, const RngStream&) {
    double a = 0.0;
    for (int i : r) a += inst.sizes[i];
    Vec y(inst.n(), 0.0);
    double val = a <= 1.0 ? 1.0 : (1.0 - 1.0 / a) / 1.0;
    for (int i : r) y[i] = val;
    return y;
  };
  auto viols =
      test_monotonicity_chains(mutant, {{{0, 1, 2, 3}, {0, 1, 2, 3, 4}}}, 0, 1);
  CHECK(!viols.empty());  // a: 1.2 -> 1.5 raises the allotment
  // the honest schemes pass on the same chain
  auto ok = test_monotonicity_chains(knap_scheme("klp_gen", inst, x),
                                     {{{0, 1, 2, 3}, {0, 1, 2, 3, 4}}}, 0, 1);
  CHECK(ok.empty());
}

TEST_CASE("randomized monotonicity with coupled streams") {
  KnapsackInstance inst{{0.8, 0.7, 0.6, 0.9}, {1.0, 1.0, 1.0, 1.0}};
  FractionalPoint x{0.3, 0.3, 0.3, 0.1};
  auto viols = test_monotonicity(knap_scheme("klp_big", inst, x), x, 6, 15000, 7);
  CHECK(viols.empty());
}

TEST_CASE("csv schema and experiment determinism") {
  const char* inst_path = "exp_inst_tmp.json";
  InstanceFile f;
  f.type = "knapsack";
  f.knap = KnapsackInstance{{0.45, 0.45, 0.45}, {1.0, 1.0, 1.0}};
  f.x = FractionalPoint{0.8, 0.7, 0.6};
  save_instance(f, inst_path);

  ExperimentConfig cfg;
  cfg.scheme = "klp_gen";
  cfg.instance_path = inst_path;
  cfg.instance_id = "toy";
  cfg.n_samples = 5000;
  cfg.seed = 9;
  cfg.bound = 0.25;
  cfg.out_csv = "exp_out_tmp.csv";
  cfg.out_json = "exp_out_tmp.json";

  auto rows1 = run_experiment(cfg);
  std::ifstream in1(cfg.out_csv);
  std::stringstream buf1;
  buf1 << in1.rdbuf();
  cfg.threads = 3;  // thread count must not change a single byte
  auto rows2 = run_experiment(cfg);
  std::ifstream in2(cfg.out_csv);
  std::stringstream buf2;
  buf2 << in2.rdbuf();
  CHECK(buf1.str() == buf2.str());
  CHECK(buf1.str().rfind("scheme,instance_id,element,n_samples,estimate,stderr,bound,pass\n",
                         0) == 0);
  CHECK(rows1.size() == 3);
  for (const HarnessRow& r : rows1) {
    CHECK(r.scheme == "klp_gen");
    CHECK(r.instance_id == "toy");
    CHECK(r.n_samples == 5000);
    CHECK(r.pass);
  }
  std::remove(inst_path);
  std::remove("exp_out_tmp.csv");
  std::remove("exp_out_tmp.json");
}

TEST_CASE("scheme and instance compatibility errors") {
  InstanceFile f;
  f.type = "knapsack";
  f.knap = KnapsackInstance{{0.5}, {1.0}};
  CHECK_THROWS_AS(make_scheme("hg_crs", f, {0.5}), Error);
  CHECK_THROWS_AS(make_scheme("no_such_scheme", f, {0.5}), Error);
  Scheme s = make_scheme("klp_big", f, {0.5});
  CHECK_THROWS_AS(exact_balancedness_deterministic(s, {0.5}), Error);  // randomized
}
