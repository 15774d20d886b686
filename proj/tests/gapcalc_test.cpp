#include <doctest.h>

#include <cmath>

#include "crsbench/error.hpp"
#include "crsbench/gapcalc.hpp"
#include "crsbench/kcspip_crs.hpp"
#include "crsbench/special.hpp"

using namespace crsbench;

TEST_CASE("sigma by exhaustive search") {
  Hypergraph tri = gen_projective_plane(1);
  CHECK(sigma_opt(tri, {0, 1, 2}, {1.0, 2.0, 3.0}) == doctest::Approx(3.0));
  CHECK(sigma_opt(tri, {}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));

  KnapsackInstance knap{{0.5, 0.5, 0.5}, {1.0, 1.0, 1.0}};
  CHECK(sigma_opt(knap, {0, 1, 2}, {2.0, 3.0, 4.0}) == doctest::Approx(7.0));

  auto [kcs, xk] = gen_kcs_str(2, 0.01);
  CHECK(sigma_opt(kcs, full_item_set(kcs.n), kcs.values) == doctest::Approx(1.0));
}

TEST_CASE("triangle correlation gap") {
  // x = 1/2 per edge, unit values: sigma = 1 iff R nonempty, so
  // CG = (1 - (1/2)^3) / (3/2) = 7/12
  Hypergraph tri = gen_projective_plane(1);
  GapReport rep = exact_cg(tri, Vec(3, 1.0), FractionalPoint(3, 0.5));
  CHECK(rep.cg_value == doctest::Approx(7.0 / 12.0).epsilon(1e-14));
  CHECK(rep.denominator == doctest::Approx(1.5));
}

TEST_CASE("fano correlation gap and formula") {
  Hypergraph fano = gen_projective_plane(2);
  GapReport rep = exact_cg(fano, Vec(7, 1.0), FractionalPoint(7, 1.0 / 3.0));
  double expect = (1.0 - std::pow(2.0 / 3.0, 7)) / (7.0 / 3.0);
  CHECK(rep.cg_value == doctest::Approx(expect).epsilon(1e-13));
  CHECK(cg_hg_projective_formula(3) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("plane kcs instance matches the closed formula") {
  auto [inst, x] = gen_kcs_nat(3, 0.1);
  GapReport rep = exact_cg(inst, inst.values, x);
  CHECK(rep.cg_value == doctest::Approx(kcs_cg_upper_formula(3, 7, 0.1)).epsilon(1e-12));
}

TEST_CASE("extension cases at zero denominator") {
  KnapsackInstance knap{{0.6, 0.6}, {1.0, 1.0}};
  // zero x: empty support is feasible -> limit value 1
  GapReport rep = exact_cg(knap, {1.0, 1.0}, {0.0, 0.0});
  CHECK(rep.extension_case == CgExtension::limit_one);
  CHECK(rep.cg_value == 1.0);
  // zero values but infeasible support: no continuous extension
  CHECK_THROWS_AS(exact_cg(knap, {0.0, 0.0}, {1.0, 1.0}), Error);
  // x_e = 1 handled without special cases
  KnapsackInstance one{{0.4}, {2.0}};
  rep = exact_cg(one, {2.0}, {1.0});
  CHECK(rep.cg_value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("witness ratios and cg bound") {
  double eps = 0.01;
  auto [inst, x] = gen_class_k_gap(2, 6, eps);
  IgWitness w = ig_witness_ratio(inst, inst.values, x, full_item_set(6));
  double stated = 3.0 / ((1.0 + 3.0 * eps) * 2.0);
  CHECK(w.ratio == doctest::Approx(stated).epsilon(1e-12));
  GapReport cg = exact_cg(inst, inst.values, x);
  CHECK(check_cg_le_inv_ig(cg, w));
  CHECK_THROWS_AS(ig_witness_ratio(inst, inst.values, Vec(6, 1.0), full_item_set(6)), Error);
}

TEST_CASE("value and point reductions") {
  Vec v{1.0, 3.0};
  FractionalPoint x{0.5, 0.5};
  Vec flat = reduce_value_average(v, x, 1.0);
  CHECK(flat[0] == doctest::Approx(2.0));
  CHECK(flat[1] == doctest::Approx(2.0));
  Vec same = reduce_value_average(v, x, 0.0);
  CHECK(same == v);
  FractionalPoint eq = reduce_equalize_pair({0.2, 0.8}, 0, 1);
  CHECK(eq[0] == doctest::Approx(0.5));
  CHECK(eq[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(reduce_equalize_pair({0.2, 0.8}, 1, 1), Error);
}

TEST_CASE("uniform class-k gap equals G and scan output") {
  CHECK(cg_uniform_classk(2, 3, 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  auto rows = conjecture_scan({1, 2}, {25, 100}, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
  CHECK(!rows.empty());
  for (const ScanRow& r : rows) {
    CHECK(r.g == doctest::Approx(g_func(r.k, r.n, r.lambda)).epsilon(1e-14));
    if (r.proven_region) CHECK(r.margin >= -1e-12);
  }
  std::string csv = scan_to_csv(rows);
  CHECK(csv.rfind("k,n,lambda,G,F,margin,proven_region_flag\n", 0) == 0);
}
