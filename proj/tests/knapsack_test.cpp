#include <doctest.h>

#include <cmath>

#include "crsbench/error.hpp"
#include "crsbench/harness.hpp"
#include "crsbench/knapsack_crs.hpp"
#include "crsbench/rng.hpp"

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

TEST_CASE("small scheme branches") {
  KnapsackInstance inst{{0.4, 0.4, 0.4}, {1.0, 1.0, 1.0}};
  FractionalPoint x(3, 0.5);
  Vec y = klp_small_crs(inst, x, {0, 1});  // a(R) = 0.8 <= 1
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 1.0);
  CHECK(y[2] == 0.0);
  y = klp_small_crs(inst, x, {0, 1, 2});  // a(R) = 1.2 > 1
  CHECK(y[0] == doctest::Approx(2.0 / 3.6).epsilon(1e-12));
  CHECK_THROWS_AS(klp_small_crs({{0.6}, {1.0}}, {1.0}, {0}), Error);  // not small
}

TEST_CASE("general scheme branches") {
  KnapsackInstance inst{{0.9, 0.6}, {1.0, 1.0}};
  FractionalPoint x(2, 0.5);
  Vec y = klp_gen_crs(inst, x, {0});
  CHECK(y[0] == 1.0);
  y = klp_gen_crs(inst, x, {0, 1});  // a(R) = 1.5
  CHECK(y[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(y[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("tight family conditional ratios") {
  double eps = 0.01;
  auto [s49, x49] = gen_knapsack_tight(KnapTightFamily::small_4_9, eps);
  auto rep = exact_balancedness_deterministic(knap_scheme("klp_small", s49, x49), x49);
  CHECK(rep.estimate[0] == doctest::Approx(4.0 / 9.0 + 2.0 * eps / 9.0).epsilon(1e-13));

  auto [g14, x14] = gen_knapsack_tight(KnapTightFamily::gen_1_4, eps);
  rep = exact_balancedness_deterministic(knap_scheme("klp_gen", g14, x14), x14);
  CHECK(rep.estimate[0] == doctest::Approx((1.0 + eps) / 4.0).epsilon(1e-13));

  auto [b13, x13] = gen_knapsack_tight(KnapTightFamily::small_bound_1_3, eps);
  rep = exact_balancedness_deterministic(knap_scheme("klp_gen", b13, x13), x13);
  CHECK(rep.estimate[2] == doctest::Approx(1.0 / (3.0 - 2.0 * eps)).epsilon(1e-13));
}

TEST_CASE("combined mixture probability") {
  double e2 = std::exp(2.0);
  CHECK(klp_combined_mix_probability() ==
        doctest::Approx(6.0 * (e2 - 1.0) / (7.0 * e2 - 6.0)).epsilon(1e-14));
}

TEST_CASE("big scheme stays feasible and conditioned high") {
  KnapsackInstance inst{{0.9, 0.8, 0.7}, {1.0, 1.0, 1.0}};
  FractionalPoint x{0.4, 0.3, 0.3};  // in P(a): 0.36+0.24+0.21 <= 1
  const long long n = 30000;
  for (long long t = 0; t < 200; ++t) {
    RngStream rng(61, t);
    Vec y = klp_big_crs(inst, x, sample_r(x, rng), rng);
    double load = 0.0;
    for (int i = 0; i < 3; ++i) load += inst.sizes[i] * y[i];
    CHECK(load <= 1.0 + 1e-9);
  }
  BalancednessReport rep =
      estimate_balancedness(knap_scheme("klp_big", inst, x), x, n, 62, 1);
  double bound = -std::expm1(-2.0) / 2.0;
  for (int i = 0; i < 3; ++i) CHECK(rep.estimate[i] >= bound - 3.0 * rep.stderr_est[i]);
}

TEST_CASE("bansal scheme singleton law") {
  KnapsackInstance inst{{0.6}, {1.0}};
  FractionalPoint x{1.0};
  const long long n = 40000;
  long long kept = 0;
  for (long long t = 0; t < n; ++t) {
    RngStream rng(71, t);
    ItemSet out = klp_bansal_crs(inst, x, {0}, rng);
    CHECK(knapsack_feasible_set(inst, out));
    if (!out.empty()) ++kept;
  }
  // the subsample keeps the lone item with probability exactly 1/4 and nothing
  // can conflict with it afterwards
  double p = 0.25, est = static_cast<double>(kept) / n;
  CHECK(std::abs(est - p) <= 4.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("greedy fractional knapsack") {
  KnapsackInstance inst{{0.5, 0.4, 0.3}, {3.0, 2.0, 1.0}};
  auto [x, lp] = greedy_fractional_knapsack(inst);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 1.0);
  CHECK(x[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(lp == doctest::Approx(3.0 + 2.0 + 1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("integral roundings beat their ratios") {
  RngStream r(81, 0);
  for (int i = 0; i < 40; ++i) {
    int n = 3 + static_cast<int>(r.next_double() * 8);
    KnapsackInstance inst;
    for (int j = 0; j < n; ++j) {
      inst.sizes.push_back(0.02 + 0.48 * r.next_double());
      inst.values.push_back(0.1 + r.next_double());
    }
    auto [x, lp] = greedy_fractional_knapsack(inst);
    ItemSet s = greedy_integral_two_thirds(inst);
    CHECK(knapsack_feasible_set(inst, s));
    double val = 0.0;
    for (int j : s) val += inst.values[j];
    CHECK(val >= (2.0 / 3.0) * lp - 1e-9);
  }
  for (int i = 0; i < 40; ++i) {
    int k = 1 + i % 3;
    int n = k + 1 + static_cast<int>(r.next_double() * 6);
    KnapsackInstance inst;
    double lo = 1.0 / (k + 1), hi = 1.0 / k;
    for (int j = 0; j < n; ++j) {
      inst.sizes.push_back(lo + (hi - lo) * std::max(1e-6, r.next_double()));
      inst.values.push_back(0.1 + r.next_double());
    }
    auto [x, lp] = greedy_fractional_knapsack(inst);
    ItemSet s = classk_integral_round(inst);
    CHECK(knapsack_feasible_set(inst, s));
    double val = 0.0;
    for (int j : s) val += inst.values[j];
    CHECK(val >= lp * k / (k + 1.0) - 1e-9);
  }
}

TEST_CASE("dominating convex decomposition") {
  KnapsackInstance inst{{0.45, 0.35, 0.3, 0.25}, {1.0, 1.0, 1.0, 1.0}};
  FractionalKnapsackSolution y{0.5, 0.6, 0.4, 0.3};  // a.y = 0.9 <= 1
  ConvexDecomposition dec = decompose_dominating(inst, y);
  double total = 0.0;
  Vec cover(4, 0.0);
  for (size_t p = 0; p < dec.parts.size(); ++p) {
    CHECK(dec.lambda[p] > 0.0);
    CHECK(knapsack_feasible_set(inst, dec.parts[p]));
    total += dec.lambda[p];
    for (int i : dec.parts[p]) cover[i] += dec.lambda[p];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 0; i < 4; ++i) CHECK(cover[i] >= y[i] - 1e-9);

  // sampled rounding hits the target marginals
  const long long n = 60000;
  Vec cnt(4, 0.0);
  for (long long t = 0; t < n; ++t) {
    RngStream rng(91, t);
    for (int i : round_fractional_point(inst, y, rng)) cnt[i] += 1.0;
  }
  for (int i = 0; i < 4; ++i) {
    double se = std::sqrt(y[i] * (1.0 - y[i]) / n);
    CHECK(std::abs(cnt[i] / n - y[i]) <= 4.0 * se + 1e-9);
  }
}
