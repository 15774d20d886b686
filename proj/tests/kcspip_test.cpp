#include <doctest.h>

#include <cmath>

#include "crsbench/error.hpp"
#include "crsbench/harness.hpp"
#include "crsbench/kcspip_crs.hpp"
#include "crsbench/rng.hpp"

using namespace crsbench;

TEST_CASE("default parameters") {
  KcsParams p = default_params(32);
  CHECK(p.alpha == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p.ell == doctest::Approx(std::log(32.0)).epsilon(1e-12));
  CHECK(p.d == 11);  // ceil(8 + sqrt(4 ln 4))
  KcsParams p1 = default_params(1);
  CHECK(p1.alpha == doctest::Approx(1.0));
  CHECK(p1.ell == doctest::Approx(3.0));
  CHECK(p1.d >= 1);
}

TEST_CASE("blocking events by hand") {
  // one constraint, items: big 0.8, medium 0.4, medium 0.45, tiny 0.1 (ell = 3)
  KcsInstance inst;
  inst.m = 1;
  inst.n = 4;
  inst.k = 1;
  inst.values.assign(4, 1.0);
  inst.columns = {{{0, 0.8}}, {{0, 0.4}}, {{0, 0.45}}, {{0, 0.1}}};
  inst.finalize();
  ItemSet all{0, 1, 2, 3};
  BlockingFlags f1 = blocking_events(inst, all, 1, 3.0);
  CHECK(f1.bb);         // a big item elsewhere in the row
  CHECK_FALSE(f1.mb);   // only two mediums present
  CHECK_FALSE(f1.tb);
  BlockingFlags f3 = blocking_events(inst, all, 3, 3.0);
  CHECK(f3.tb);  // tiny with two mediums in the row
  BlockingFlags f0 = blocking_events(inst, {0, 3}, 0, 3.0);
  CHECK_FALSE(f0.bb);  // no other big left
}

TEST_CASE("blocking digraph arcs") {
  // arc j -> j' iff some row has a_ij > 0 and a_ij' > 1/2
  KcsInstance inst;
  inst.m = 2;
  inst.n = 3;
  inst.k = 2;
  inst.values.assign(3, 1.0);
  inst.columns = {{{0, 0.6}}, {{0, 0.2}, {1, 0.3}}, {{1, 0.9}}};
  inst.finalize();
  BlockingDigraph g = build_blocking_digraph(inst, {0, 1, 2});
  CHECK(g.items == ItemSet{0, 1, 2});
  CHECK(g.out[0].empty());               // nothing big shares a row besides itself
  CHECK(g.out[1] == std::vector<int>({0, 2}));  // sees bigs in both rows
  CHECK(g.out[2].empty());
}

TEST_CASE("degeneracy coloring of circulant tournaments") {
  for (int d : {1, 2, 3}) {
    Digraph g = gen_circulant_tournament(d);
    std::vector<int> color = degeneracy_color(g, d);
    int used = 0;
    for (int c : color) used = std::max(used, c + 1);
    CHECK(used <= 2 * d + 1);
    // proper under the undirected closure (complete graph): all distinct
    CHECK(used == 2 * d + 1);
  }
  Digraph bad;
  bad.n = 2;
  bad.out = {{1, 1}, {}};  // out-degree 2 > d = 1
  CHECK_THROWS_AS(degeneracy_color(bad, 1), Error);
}

TEST_CASE("kcs scheme feasible across corpora") {
  for (int k : {2, 3}) {
    auto [inst, x] = gen_kcs_nat(k, 0.1);
    KcsParams params = default_params(k);
    for (int t = 0; t < 300; ++t) {
      RngStream rng(100 + k, t);
      ItemSet r = sample_r(x, rng);
      KcsTrace tr = kcs_crs_trace(inst, x, r, params, rng);
      CHECK(kcs_feasible_set(inst, tr.rf));  // also asserted inside
      // stages shrink
      CHECK(tr.r0.size() >= tr.r1.size());
      CHECK(tr.r1.size() >= tr.r2.size());
      CHECK(tr.r2.size() >= tr.rf.size());
      CHECK(tr.colors_used <= 2 * params.d + 1);
    }
  }
}

TEST_CASE("kcs bansal singleton law") {
  KcsInstance inst;
  inst.m = 1;
  inst.n = 1;
  inst.k = 2;  // k=2: subsample rate 1/8
  inst.values = {1.0};
  inst.columns = {{{0, 0.7}}};
  inst.finalize();
  FractionalPoint x{1.0};
  const long long n = 60000;
  long long kept = 0;
  for (long long t = 0; t < n; ++t) {
    RngStream rng(111, t);
    if (!kcs_bansal_crs(inst, x, {0}, rng).empty()) ++kept;
  }
  double p = 1.0 / 8.0, est = static_cast<double>(kept) / n;
  CHECK(std::abs(est - p) <= 4.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("plane-instance cg upper bound formulas") {
  // closed-form limit value at k=3
  CHECK(kcs_cg_upper_limit(3) ==
        doctest::Approx(-std::expm1(-2.0 / 3.0) / (2.0 * (7.0 / 3.0))).epsilon(1e-14));
  CHECK(kcs_cg_upper_limit(3) == doctest::Approx(0.104).epsilon(1e-2));
  CHECK_THROWS_AS(kcs_cg_upper_formula(1, 5, 0.1), Error);
}
