#include <doctest.h>

#include <cmath>

#include "crsbench/harness.hpp"
#include "crsbench/hypergraph_crs.hpp"
#include "crsbench/instances.hpp"
#include "crsbench/rng.hpp"

using namespace crsbench;

TEST_CASE("keep probability") {
  CHECK(hg_keep_probability(0.0) == doctest::Approx(1.0));
  CHECK(hg_keep_probability(1.0) == doctest::Approx(-std::expm1(-1.0)).epsilon(1e-14));
  CHECK(hg_keep_probability(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("profiles respect supports and loads") {
  Hypergraph tri = gen_projective_plane(1);
  FractionalPoint x(3, 0.5);
  for (int t = 0; t < 2000; ++t) {
    RngStream rng(11, t);
    ItemSet r = sample_r(x, rng);
    HgCrsResult res = hg_crs_profile(tri, x, r, rng);
    for (int e = 0; e < 3; ++e) {
      bool in_r = std::binary_search(r.begin(), r.end(), e);
      if (!in_r) CHECK(res.q[e] == 0);
      if (res.q[e] == 0) CHECK(res.y[e] == 0.0);
      if (res.q[e] > 0) CHECK(res.y[e] > 0.0);
    }
    // triangle: all edges pairwise intersect, so y sums to at most 1
    CHECK(res.y[0] + res.y[1] + res.y[2] <= 1.0 + 1e-12);
    ItemSet m = exp_clock_round(tri, res.q, rng);
    CHECK(is_matching(tri, m));
    // clock rounding selects inside the retained set
    for (int e : m) CHECK(res.q[e] >= 1);
  }
}

TEST_CASE("merged law matches composed pipeline") {
  Hypergraph tri = gen_projective_plane(1);
  FractionalPoint x{0.6, 0.3, 0.2};
  const long long n = 40000;
  Vec m1(3, 0.0), m2(3, 0.0), v1(3, 0.0), v2(3, 0.0);
  for (long long t = 0; t < n; ++t) {
    RngStream a(21, t);
    FractionalMatching y1 = hg_merged(tri, x, a);
    RngStream b(22, t);
    FractionalMatching y2 = hg_crs(tri, x, sample_r(x, b), b);
    for (int e = 0; e < 3; ++e) {
      m1[e] += y1[e];
      v1[e] += y1[e] * y1[e];
      m2[e] += y2[e];
      v2[e] += y2[e] * y2[e];
    }
  }
  for (int e = 0; e < 3; ++e) {
    double a = m1[e] / n, b = m2[e] / n;
    double va = v1[e] / n - a * a, vb = v2[e] / n - b * b;
    CHECK(std::abs(a - b) <= 4.0 * std::sqrt((va + vb) / n) + 1e-9);
  }
}

TEST_CASE("clock rounding marginals on a fixed profile") {
  Hypergraph tri = gen_projective_plane(1);
  PoissonProfile q{2, 1, 3};  // neighbors: everyone; Pr[e] = q_e / 6
  const long long n = 60000;
  Vec cnt(3, 0.0);
  for (long long t = 0; t < n; ++t) {
    RngStream rng(31, t);
    for (int e : exp_clock_round(tri, q, rng)) cnt[e] += 1.0;
  }
  for (int e = 0; e < 3; ++e) {
    double p = q[e] / 6.0;
    CHECK(std::abs(cnt[e] / n - p) <= 4.0 * std::sqrt(p * (1.0 - p) / n));
  }
}

TEST_CASE("balancedness on the triangle") {
  // rank 2 at b=1: conditional retention at least (1-e^-2)/2
  Hypergraph tri = gen_projective_plane(1);
  FractionalPoint x(3, 0.5);
  InstanceFile f;
  f.type = "hypergraph";
  f.hg = tri;
  BalancednessReport rep =
      estimate_balancedness(make_scheme("hg_crs", f, x), x, 50000, 41, 1);
  double bound = -std::expm1(-2.0) / 2.0;
  for (int e = 0; e < 3; ++e)
    CHECK(rep.estimate[e] >= bound - 3.0 * rep.stderr_est[e]);
}

TEST_CASE("hg scheme monotone on coupled chains") {
  Hypergraph fano = gen_projective_plane(2);
  FractionalPoint x(7, 1.0 / 3.0);
  InstanceFile f;
  f.type = "hypergraph";
  f.hg = fano;
  auto viols = test_monotonicity(make_scheme("hg_crs", f, x), x, 6, 20000, 51);
  CHECK(viols.empty());
}
