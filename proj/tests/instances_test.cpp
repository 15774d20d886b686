#include <doctest.h>

#include <algorithm>
#include <cstdio>

#include "crsbench/error.hpp"
#include "crsbench/instances.hpp"
#include "crsbench/json_io.hpp"

using namespace crsbench;

TEST_CASE("projective plane structure") {
  for (int p : {2, 3, 5}) {
    Hypergraph h = gen_projective_plane(p);
    int expect = p * p + p + 1;
    CHECK(h.num_vertices == expect);
    CHECK(static_cast<int>(h.edges.size()) == expect);
    for (const ItemSet& line : h.edges) CHECK(static_cast<int>(line.size()) == p + 1);
    for (int v = 0; v < h.num_vertices; ++v)
      CHECK(static_cast<int>(h.vertex_edges[v].size()) == p + 1);
    // any two lines meet in exactly one point
    for (size_t i = 0; i < h.edges.size(); ++i)
      for (size_t j = i + 1; j < h.edges.size(); ++j) {
        ItemSet common;
        std::set_intersection(h.edges[i].begin(), h.edges[i].end(), h.edges[j].begin(),
                              h.edges[j].end(), std::back_inserter(common));
        CHECK(common.size() == 1);
      }
  }
  Hypergraph tri = gen_projective_plane(1);
  CHECK(tri.num_vertices == 3);
  CHECK(tri.edges.size() == 3);
  CHECK_THROWS_AS(gen_projective_plane(4), Error);  // not prime
}

TEST_CASE("item classes") {
  CHECK(item_class(1.0) == 1);
  CHECK(item_class(0.51) == 1);
  CHECK(item_class(0.5) == 2);
  CHECK(item_class(1.0 / 3.0) == 3);
  CHECK(item_class(0.3) == 3);
  CHECK_THROWS_AS(item_class(0.0), Error);
}

TEST_CASE("feasibility predicates") {
  Hypergraph tri = gen_projective_plane(1);
  CHECK(is_matching(tri, {0}));
  CHECK_FALSE(is_matching(tri, {0, 1}));  // triangle edges pairwise intersect
  CHECK(hypergraph_feasible(tri, {0.5, 0.5, 0.5}, 1.0));
  CHECK_FALSE(hypergraph_feasible(tri, {0.6, 0.6, 0.6}, 1.0));
  CHECK(hypergraph_feasible(tri, {0.6, 0.6, 0.6}, 2.0));

  KnapsackInstance knap{{0.4, 0.4, 0.4}, {1.0, 1.0, 1.0}};
  CHECK(knapsack_feasible_set(knap, {0, 1}));
  CHECK_FALSE(knapsack_feasible_set(knap, {0, 1, 2}));
  CHECK(knapsack_feasible_fractional(knap, {1.0, 1.0, 0.5}));
}

TEST_CASE("class-k generators") {
  auto [u, xu] = gen_class_k_uniform(2, 5, 0.05);
  for (double a : u.sizes) CHECK(item_class(a) == 2);
  double load = 0.0;
  for (int i = 0; i < 5; ++i) load += u.sizes[i] * xu[i];
  CHECK(load == doctest::Approx(1.0).epsilon(1e-12));

  auto [g, xg] = gen_class_k_gap(2, 5, 0.01);
  for (double a : g.sizes) CHECK(item_class(a) == 2);
  load = 0.0;
  for (int i = 0; i < 5; ++i) load += g.sizes[i] * xg[i];
  CHECK(load == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gen_class_k_gap(2, 2, 0.01), Error);  // n <= k
}

TEST_CASE("kcs example generators") {
  auto [nat, xn] = gen_kcs_nat(3, 0.1);
  CHECK(nat.n == 7);
  CHECK(nat.m == 7);
  CHECK(nat.k == 3);
  for (const auto& col : nat.columns) CHECK(static_cast<int>(col.size()) <= nat.k);
  CHECK(kcs_feasible(nat, xn, false));

  auto [str, xs] = gen_kcs_str(3, 0.01);
  CHECK(str.n == 5);
  CHECK(str.m == 5);
  // cyclic window: any two items overload some row
  for (int i = 0; i < str.n; ++i)
    for (int j = i + 1; j < str.n; ++j) CHECK_FALSE(kcs_feasible_set(str, {i, j}));
  CHECK(kcs_feasible(str, xs, false));

  auto [dk, xd] = gen_dknapsack_example(3, 0.05);
  CHECK(dk.n == 4);
  CHECK(dk.m == 3);
  for (int i = 0; i < dk.n; ++i)
    for (int j = i + 1; j < dk.n; ++j) CHECK_FALSE(kcs_feasible_set(dk, {i, j}));
  CHECK(kcs_feasible(dk, xd, false));
}

TEST_CASE("circulant tournament") {
  for (int d : {1, 2, 3}) {
    Digraph g = gen_circulant_tournament(d);
    CHECK(g.n == 2 * d + 1);
    for (const auto& out : g.out) CHECK(static_cast<int>(out.size()) == d);
    // tournament: each unordered pair has exactly one arc
    for (int u = 0; u < g.n; ++u)
      for (int v = u + 1; v < g.n; ++v) {
        bool uv = std::find(g.out[u].begin(), g.out[u].end(), v) != g.out[u].end();
        bool vu = std::find(g.out[v].begin(), g.out[v].end(), u) != g.out[v].end();
        CHECK(uv != vu);
      }
  }
}

TEST_CASE("tight knapsack families") {
  auto [s49, x49] = gen_knapsack_tight(KnapTightFamily::small_4_9, 0.01);
  CHECK(s49.n() == 3);
  CHECK(x49[0] == doctest::Approx(0.01));
  for (double a : s49.sizes) CHECK(a == doctest::Approx(1.0 / 2.01));

  auto [g14, x14] = gen_knapsack_tight(KnapTightFamily::gen_1_4, 0.01);
  CHECK(g14.n() == 2);
  CHECK(g14.sizes[0] == doctest::Approx(1.0 / 1.01));

  auto [b13, x13] = gen_knapsack_tight(KnapTightFamily::small_bound_1_3, 0.01);
  CHECK(b13.sizes[2] == doctest::Approx(0.5));
  CHECK(x13[2] == doctest::Approx(0.02));
}

TEST_CASE("json round trip") {
  const char* path = "roundtrip_tmp.json";
  {
    InstanceFile f;
    f.type = "hypergraph";
    f.hg = gen_projective_plane(2);
    f.x = Vec(7, 1.0 / 3.0);
    f.v = Vec(7, 1.0);
    save_instance(f, path);
    InstanceFile g = load_instance(path);
    CHECK(g.type == "hypergraph");
    CHECK(g.hg->edges == f.hg->edges);
    CHECK(*g.x == *f.x);
  }
  {
    InstanceFile f;
    f.type = "knapsack";
    f.knap = KnapsackInstance{{0.3, 0.7}, {1.0, 2.0}};
    save_instance(f, path);
    InstanceFile g = load_instance(path);
    CHECK(g.knap->sizes == f.knap->sizes);
    CHECK(g.knap->values == f.knap->values);
  }
  {
    InstanceFile f;
    f.type = "kcspip";
    f.kcs = gen_kcs_str(2, 0.01).first;
    save_instance(f, path);
    InstanceFile g = load_instance(path);
    CHECK(g.kcs->columns == f.kcs->columns);
    CHECK(g.kcs->k == f.kcs->k);
  }
  std::remove(path);
  CHECK_THROWS_AS(load_instance("no_such_file_12345.json"), Error);
}
