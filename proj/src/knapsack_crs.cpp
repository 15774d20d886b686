#include "crsbench/knapsack_crs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "crsbench/error.hpp"
#include "crsbench/hypergraph_crs.hpp"

namespace crsbench {
namespace {

constexpr std::uint64_t kBranchChild = 0x6272616e6368ULL;
constexpr std::uint64_t kPartChild = 0x70617274ULL;
constexpr std::uint64_t kThinSpace = 0x7468696eULL;

double compensated_sum(const Vec& a, const ItemSet& r) {
  double sum = 0.0, c = 0.0;
  for (int i : r) {
    double y = a[i] - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

void check_r(const KnapsackInstance& inst, const FractionalPoint& x, const ItemSet& r) {
  if (x.size() != inst.sizes.size()) fail_usage("knapsack scheme: dimension mismatch");
  for (int i : r) {
    if (i < 0 || i >= inst.n()) fail_usage("knapsack scheme: bad index in r");
    if (!(x[i] > 0.0)) fail_usage("knapsack scheme: r not contained in supp(x)");
  }
}

// Star graph: hub vertex 0, leaf i+1 for item i; edge i = {0, i+1}. Every edge
// intersects every other, so N(e) is the whole edge set.
Hypergraph make_star(int n) {
  Hypergraph h;
  h.num_vertices = n + 1;
  h.edges.resize(n);
  h.vertex_edges.assign(n + 1, {});
  h.neighbor.assign(n, {});
  ItemSet all = full_item_set(n);
  for (int i = 0; i < n; ++i) {
    h.edges[i] = {0, i + 1};
    h.vertex_edges[i + 1] = {i};
    h.neighbor[i] = all;
  }
  h.vertex_edges[0] = all;
  return h;
}

// Greedy v/a order: descending ratio, zero-size items first, ties by lower index.
std::vector<int> greedy_order(const KnapsackInstance& inst) {
  std::vector<int> ord = full_item_set(inst.n());
  std::stable_sort(ord.begin(), ord.end(), [&](int i, int j) {
    bool zi = inst.sizes[i] == 0.0, zj = inst.sizes[j] == 0.0;
    if (zi != zj) return zi;
    if (zi && zj) return false;  // stable: keep index order
    return inst.values[i] * inst.sizes[j] > inst.values[j] * inst.sizes[i];
  });
  return ord;
}

}  // namespace

FractionalKnapsackSolution klp_big_crs(const KnapsackInstance& inst, const FractionalPoint& x,
                                       const ItemSet& r, const RngStream& rng) {
  inst.validate();
  check_r(inst, x, r);
  for (int i : r)
    if (!(inst.sizes[i] > 0.5)) fail_usage("klp_big_crs: item with a_i <= 1/2 in r");
  Hypergraph star = make_star(inst.n());
  FractionalKnapsackSolution y = hg_crs(star, x, r, rng);
  double total = std::accumulate(y.begin(), y.end(), 0.0);
  if (total > 1.0 + kFeasTol) fail_assert("klp_big_crs: sum of y exceeds 1");
  return y;
}

FractionalKnapsackSolution klp_small_crs(const KnapsackInstance& inst,
                                         const FractionalPoint& x, const ItemSet& r) {
  inst.validate();
  for (double a : inst.sizes)
    if (a > 0.5) fail_usage("klp_small_crs: instance has an item with a_i > 1/2");
  check_r(inst, x, r);
  FractionalKnapsackSolution y(inst.n(), 0.0);
  double ar = compensated_sum(inst.sizes, r);
  double val = ar <= 1.0 + kFeasTol ? 1.0 : 2.0 / (3.0 * ar);
  for (int i : r) y[i] = val;
  return y;
}

FractionalKnapsackSolution klp_gen_crs(const KnapsackInstance& inst, const FractionalPoint& x,
                                       const ItemSet& r) {
  inst.validate();
  check_r(inst, x, r);
  FractionalKnapsackSolution y(inst.n(), 0.0);
  double ar = compensated_sum(inst.sizes, r);
  double val = ar <= 1.0 + kFeasTol ? 1.0 : 1.0 / (2.0 * ar);
  for (int i : r) y[i] = val;
  return y;
}

double klp_combined_mix_probability() {
  double e2 = std::exp(2.0);
  return 6.0 * (e2 - 1.0) / (7.0 * e2 - 6.0);
}

FractionalKnapsackSolution klp_combined_crs(const KnapsackInstance& inst,
                                            const FractionalPoint& x, const ItemSet& r,
                                            const RngStream& rng) {
  inst.validate();
  check_r(inst, x, r);
  RngStream branch = rng.derive(kBranchChild);
  if (branch.sample_bernoulli(klp_combined_mix_probability()))
    return klp_gen_crs(inst, x, r);
  ItemSet rbar;
  for (int i : r)
    if (inst.sizes[i] > 0.5) rbar.push_back(i);
  if (rbar.empty()) return FractionalKnapsackSolution(inst.n(), 0.0);
  return klp_big_crs(inst, x, rbar, rng);
}

ItemSet klp_bansal_crs(const KnapsackInstance& inst, const FractionalPoint& x,
                       const ItemSet& r, const RngStream& rng) {
  inst.validate();
  check_r(inst, x, r);
  ItemSet s;
  for (int j : r) {
    RngStream sj = rng.derive(j);
    if (sj.sample_bernoulli(0.25)) s.push_back(j);
  }
  int big_count = 0;
  double small_sum = 0.0;
  for (int j : s) {
    if (inst.sizes[j] > 0.5)
      ++big_count;
    else
      small_sum += inst.sizes[j];
  }
  ItemSet out;
  for (int j : s) {
    double a = inst.sizes[j];
    if (a > 0.0) {  // deletion rules only reach items the constraint sees
      bool other_big = a > 0.5 ? big_count >= 2 : big_count >= 1;
      if (other_big || small_sum > 1.0 + kFeasTol) continue;
    }
    out.push_back(j);
  }
  if (!knapsack_feasible_set(inst, out)) fail_assert("klp_bansal_crs: infeasible output");
  return out;
}

std::pair<FractionalPoint, double> greedy_fractional_knapsack(const KnapsackInstance& inst) {
  inst.validate();
  std::vector<int> ord = greedy_order(inst);
  FractionalPoint x(inst.n(), 0.0);
  double cap = 1.0, w = 0.0;
  for (int i : ord) {
    if (inst.sizes[i] <= cap) {
      x[i] = 1.0;
      cap -= inst.sizes[i];
      w += inst.values[i];
    } else if (cap > 0.0) {
      x[i] = cap / inst.sizes[i];
      w += inst.values[i] * x[i];
      cap = 0.0;
    }
  }
  return {x, w};
}

ItemSet greedy_integral_two_thirds(const KnapsackInstance& inst) {
  inst.validate();
  for (double a : inst.sizes)
    if (a > 0.5) fail_usage("greedy_integral_two_thirds: item with a_i > 1/2");
  auto [x, w] = greedy_fractional_knapsack(inst);
  std::vector<int> ord = greedy_order(inst);

  // Locate the fractional item in greedy order; if none, x is integral.
  int mpos = -1;
  for (int p = 0; p < inst.n(); ++p) {
    double xi = x[ord[p]];
    if (xi > 0.0 && xi < 1.0) mpos = p;
  }
  auto finish = [&](ItemSet s) {
    std::sort(s.begin(), s.end());
    if (!knapsack_feasible_set(inst, s)) fail_assert("greedy_integral_two_thirds: infeasible");
    double val = 0.0;
    for (int i : s) val += inst.values[i];
    if (val < (2.0 / 3.0) * w - 1e-9)
      fail_assert("greedy_integral_two_thirds: value below (2/3) LP");
    return s;
  };
  if (mpos < 0) {
    ItemSet s;
    for (int i = 0; i < inst.n(); ++i)
      if (x[i] == 1.0) s.push_back(i);
    return finish(std::move(s));
  }

  int m = ord[mpos];
  std::vector<int> prefix(ord.begin(), ord.begin() + mpos);  // the x_i = 1 items
  double prefix_val = 0.0;
  for (int i : prefix) prefix_val += inst.values[i];
  if (prefix_val >= (2.0 / 3.0) * w) return finish(prefix);
  if (inst.values[m] >= (2.0 / 3.0) * w) return finish({m});

  std::vector<int> large;  // prefix items of size >= 1/6
  for (int i : prefix)
    if (inst.sizes[i] >= 1.0 / 6.0) large.push_back(i);

  ItemSet s(prefix.begin(), prefix.end());
  s.push_back(m);
  if (large.size() >= 2) {
    int drop = *std::min_element(large.begin(), large.end(), [&](int i, int j) {
      return inst.values[i] < inst.values[j];
    });
    s.erase(std::find(s.begin(), s.end(), drop));
    return finish(std::move(s));
  }
  if (large.size() == 1) {
    int j = large[0];
    if (inst.values[j] < w / 3.0) {
      s.erase(std::find(s.begin(), s.end(), j));
      return finish(std::move(s));
    }
    return finish({j, m});
  }
  // All prefix items smaller than 1/6: remove the value-minimal subset of the
  // prefix whose total size reaches 1/6 (ties by cardinality). Exhaustive.
  int np = static_cast<int>(prefix.size());
  if (np > 22) fail_unsupported("greedy_integral_two_thirds: prefix too large for search");
  double best_val = std::numeric_limits<double>::infinity();
  int best_card = inst.n() + 1;
  unsigned best_mask = 0;
  for (unsigned mask = 1; mask < (1u << np); ++mask) {
    double asum = 0.0, vsum = 0.0;
    int card = 0;
    for (int p = 0; p < np; ++p)
      if (mask & (1u << p)) {
        asum += inst.sizes[prefix[p]];
        vsum += inst.values[prefix[p]];
        ++card;
      }
    if (asum < 1.0 / 6.0) continue;
    if (vsum < best_val - 1e-15 ||
        (std::fabs(vsum - best_val) <= 1e-15 && card < best_card)) {
      best_val = vsum;
      best_card = card;
      best_mask = mask;
    }
  }
  if (best_mask == 0) fail_assert("greedy_integral_two_thirds: no removal set found");
  for (int p = 0; p < np; ++p)
    if (best_mask & (1u << p)) s.erase(std::find(s.begin(), s.end(), prefix[p]));
  return finish(std::move(s));
}

ItemSet classk_integral_round(const KnapsackInstance& inst) {
  inst.validate();
  int k = item_class(inst.sizes[0]);
  for (double a : inst.sizes)
    if (item_class(a) != k) fail_usage("classk_integral_round: mixed-class instance");
  if (inst.n() <= k) return full_item_set(inst.n());
  std::vector<int> ord = greedy_order(inst);
  // Take the k highest valued among the first k+1 in greedy order.
  std::vector<int> head(ord.begin(), ord.begin() + k + 1);
  int drop = *std::min_element(head.begin(), head.end(), [&](int i, int j) {
    return inst.values[i] < inst.values[j];
  });
  ItemSet s;
  for (int i : head)
    if (i != drop) s.push_back(i);
  std::sort(s.begin(), s.end());
  if (!knapsack_feasible_set(inst, s)) fail_assert("classk_integral_round: infeasible");
  return s;
}

// ---- dominating convex decomposition ------------------------------------

namespace {

// Phase-1 simplex (Bland's rule) for: A_cols lam >= y on rows, 1'lam = 1, lam >= 0.
// Columns are characteristic vectors of candidate sets. Returns weights or empty
// if infeasible.
std::vector<double> solve_covering(const std::vector<std::vector<int>>& cols,
                                   const std::vector<double>& y_supp) {
  int nr = static_cast<int>(y_supp.size()) + 1;  // cover rows + convexity row
  int nc = static_cast<int>(cols.size());
  int nsurp = nr - 1;
  int nart = nr;
  int total = nc + nsurp + nart;
  // Tableau rows: nr constraint rows + objective row; columns: total + rhs.
  std::vector<std::vector<double>> t(nr + 1, std::vector<double>(total + 1, 0.0));
  for (int c = 0; c < nc; ++c) {
    for (int idx : cols[c]) t[idx][c] = 1.0;
    t[nr - 1][c] = 1.0;
  }
  for (int i = 0; i < nsurp; ++i) t[i][nc + i] = -1.0;
  for (int i = 0; i < nr; ++i) {
    t[i][nc + nsurp + i] = 1.0;
    t[i][total] = i < nsurp ? y_supp[i] : 1.0;
  }
  std::vector<int> basis(nr);
  for (int i = 0; i < nr; ++i) basis[i] = nc + nsurp + i;
  // Objective: minimize sum of artificials -> row = -(sum of constraint rows)
  // over non-artificial columns; rhs accumulates too.
  for (int i = 0; i < nr; ++i)
    for (int c = 0; c <= total; ++c)
      if (c < nc + nsurp || c == total) t[nr][c] -= t[i][c];

  const double eps = 1e-11;
  for (int iter = 0; iter < 200000; ++iter) {
    int pivot_col = -1;
    for (int c = 0; c < nc + nsurp; ++c)  // Bland: first improving column
      if (t[nr][c] < -eps) {
        pivot_col = c;
        break;
      }
    if (pivot_col < 0) break;
    int pivot_row = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < nr; ++i) {
      if (t[i][pivot_col] > eps) {
        double ratio = t[i][total] / t[i][pivot_col];
        if (pivot_row < 0 || ratio < best_ratio - 1e-15 ||
            (std::fabs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[pivot_row])) {
          pivot_row = i;
          best_ratio = ratio;
        }
      }
    }
    if (pivot_row < 0) break;  // unbounded (should not happen in phase 1)
    double pv = t[pivot_row][pivot_col];
    for (int c = 0; c <= total; ++c) t[pivot_row][c] /= pv;
    for (int i = 0; i <= nr; ++i) {
      if (i == pivot_row) continue;
      double f = t[i][pivot_col];
      if (f == 0.0) continue;
      for (int c = 0; c <= total; ++c) t[i][c] -= f * t[pivot_row][c];
    }
    basis[pivot_row] = pivot_col;
  }
  if (t[nr][total] < -1e-8) return {};  // artificials remain: infeasible
  std::vector<double> lam(nc, 0.0);
  for (int i = 0; i < nr; ++i)
    if (basis[i] < nc) lam[basis[i]] = std::max(0.0, t[i][total]);
  return lam;
}

}  // namespace

ConvexDecomposition decompose_dominating(const KnapsackInstance& inst,
                                         const FractionalKnapsackSolution& y,
                                         double r_approx) {
  inst.validate();
  if (y.size() != inst.sizes.size()) fail_usage("decompose_dominating: dimension mismatch");
  if (r_approx < 1.0) fail_usage("decompose_dominating: r_approx must be >= 1");
  ItemSet supp = support(y);
  int ns = static_cast<int>(supp.size());
  if (ns > 20) fail_unsupported("decompose_dominating: |supp(y)| > 20");
  if (ns == 0) return {{1.0}, {ItemSet{}}};

  // Candidate columns: maximal feasible subsets of supp(y) (plus the empty set;
  // with >= cover constraints, maximal sets are enough but empty keeps the
  // convexity row satisfiable when y is tiny).
  std::vector<std::vector<int>> cand_local;  // positions within supp
  std::vector<unsigned> cand_mask;
  std::vector<double> asum(1u << ns, 0.0);
  for (unsigned mask = 1; mask < (1u << ns); ++mask) {
    unsigned low = mask & (mask - 1);
    int bit = std::countr_zero(mask);
    asum[mask] = asum[low] + inst.sizes[supp[bit]];
  }
  for (unsigned mask = 0; mask < (1u << ns); ++mask) {
    if (asum[mask] > 1.0 + kFeasTol) continue;
    bool maximal = true;
    for (int b = 0; b < ns && maximal; ++b)
      if (!(mask & (1u << b)) && asum[mask] + inst.sizes[supp[b]] <= 1.0 + kFeasTol)
        maximal = false;
    if (!maximal && mask != 0) continue;
    std::vector<int> col;
    for (int b = 0; b < ns; ++b)
      if (mask & (1u << b)) col.push_back(b);
    cand_local.push_back(std::move(col));
    cand_mask.push_back(mask);
  }

  std::vector<double> y_supp(ns);
  for (int b = 0; b < ns; ++b) y_supp[b] = y[supp[b]];
  std::vector<double> lam = solve_covering(cand_local, y_supp);
  if (lam.empty()) fail_assert("decompose_dominating: no dominating certificate exists");

  ConvexDecomposition dec;
  for (size_t c = 0; c < lam.size(); ++c) {
    if (lam[c] <= 1e-12) continue;
    ItemSet z;
    for (int b : cand_local[c]) z.push_back(supp[b]);
    dec.lambda.push_back(lam[c]);
    dec.parts.push_back(std::move(z));
  }
  // Verify the certificate invariants exactly as promised.
  double total = std::accumulate(dec.lambda.begin(), dec.lambda.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-9) fail_assert("decompose_dominating: weights sum != 1");
  Vec cover(inst.n(), 0.0);
  for (size_t c = 0; c < dec.parts.size(); ++c) {
    if (!knapsack_feasible_set(inst, dec.parts[c]))
      fail_assert("decompose_dominating: infeasible part");
    for (int i : dec.parts[c]) cover[i] += dec.lambda[c];
  }
  for (int i = 0; i < inst.n(); ++i)
    if (cover[i] < y[i] - 1e-9) fail_assert("decompose_dominating: dominance violated");
  // Renormalize the tiny drift from dropped near-zero weights.
  for (double& l : dec.lambda) l /= total;
  return dec;
}

ItemSet round_fractional_point(const KnapsackInstance& inst,
                               const FractionalKnapsackSolution& y, const RngStream& rng) {
  ConvexDecomposition dec = decompose_dominating(inst, y);
  Vec cover(inst.n(), 0.0);
  for (size_t c = 0; c < dec.parts.size(); ++c)
    for (int i : dec.parts[c]) cover[i] += dec.lambda[c];
  RngStream pick = rng.derive(kPartChild);
  double u = pick.next_double();
  size_t chosen = 0;
  double acc = 0.0;
  for (size_t c = 0; c < dec.parts.size(); ++c) {
    acc += dec.lambda[c];
    if (u < acc) {
      chosen = c;
      break;
    }
    chosen = c;
  }
  ItemSet out;
  for (int i : dec.parts[chosen]) {
    RngStream s = rng.derive(kThinSpace + static_cast<std::uint64_t>(i));
    double keep = cover[i] > 0.0 ? std::min(1.0, y[i] / cover[i]) : 0.0;
    if (s.sample_bernoulli(keep)) out.push_back(i);
  }
  if (!knapsack_feasible_set(inst, out)) fail_assert("round_fractional_point: infeasible");
  return out;
}

}  // namespace crsbench
