#include "crsbench/gapcalc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "crsbench/error.hpp"
#include "crsbench/special.hpp"

namespace crsbench {
namespace {

void check_sigma_args(int n, const ItemSet& r, const Vec& v) {
  if (static_cast<int>(v.size()) != n) fail_usage("sigma_opt: value vector size mismatch");
  if (r.size() > 24) fail_unsupported("sigma_opt: |r| > 24");
  for (int e : r) {
    if (e < 0 || e >= n) fail_usage("sigma_opt: invalid index in r");
    if (v[e] < 0.0) fail_usage("sigma_opt: negative value");
  }
}

// Branch-and-bound over r with suffix-sum pruning. can_add/apply/undo maintain
// incremental feasibility state.
template <class CanAdd, class Apply, class Undo>
double sigma_bb(const ItemSet& r, const Vec& v, CanAdd can_add, Apply apply, Undo undo) {
  int nr = static_cast<int>(r.size());
  Vec suffix(nr + 1, 0.0);
  for (int p = nr - 1; p >= 0; --p) suffix[p] = suffix[p + 1] + v[r[p]];
  double best = 0.0;
  auto rec = [&](auto&& self, int p, double acc) -> void {
    best = std::max(best, acc);
    if (p == nr || acc + suffix[p] <= best) return;
    int e = r[p];
    if (can_add(e)) {
      apply(e);
      self(self, p + 1, acc + v[e]);
      undo(e);
    }
    self(self, p + 1, acc);
  };
  rec(rec, 0, 0.0);
  return best;
}

// Per-subset feasibility table over the pruned item list.
std::vector<char> feas_table_hypergraph(const Hypergraph& h, const ItemSet& items) {
  int ns = static_cast<int>(items.size());
  std::vector<char> feas(1u << ns, 0);
  if (h.num_vertices <= 64) {
    std::vector<std::uint64_t> emask(ns, 0);
    for (int b = 0; b < ns; ++b)
      for (int vtx : h.edges[items[b]]) emask[b] |= 1ull << vtx;
    std::vector<std::uint64_t> vm(1u << ns, 0);
    feas[0] = 1;
    for (unsigned mask = 1; mask < (1u << ns); ++mask) {
      int b = std::countr_zero(mask);
      unsigned rest = mask & (mask - 1);
      vm[mask] = vm[rest] | emask[b];
      feas[mask] = feas[rest] && !(vm[rest] & emask[b]);
    }
  } else {
    for (unsigned mask = 0; mask < (1u << ns); ++mask) {
      ItemSet s;
      for (int b = 0; b < ns; ++b)
        if (mask & (1u << b)) s.push_back(items[b]);
      feas[mask] = is_matching(h, s);
    }
  }
  return feas;
}

std::vector<char> feas_table_knapsack(const KnapsackInstance& inst, const ItemSet& items) {
  int ns = static_cast<int>(items.size());
  std::vector<double> asum(1u << ns, 0.0);
  std::vector<char> feas(1u << ns, 1);
  for (unsigned mask = 1; mask < (1u << ns); ++mask) {
    int b = std::countr_zero(mask);
    asum[mask] = asum[mask & (mask - 1)] + inst.sizes[items[b]];
    feas[mask] = asum[mask] <= 1.0 + kFeasTol;
  }
  return feas;
}

std::vector<char> feas_table_kcs(const KcsInstance& inst, const ItemSet& items) {
  int ns = static_cast<int>(items.size());
  std::vector<char> feas(1u << ns, 0);
  for (unsigned mask = 0; mask < (1u << ns); ++mask) {
    ItemSet s;
    for (int b = 0; b < ns; ++b)
      if (mask & (1u << b)) s.push_back(items[b]);
    feas[mask] = kcs_feasible_set(inst, s);
  }
  return feas;
}

GapReport exact_cg_engine(const Vec& v, const Vec& x, const ItemSet& items,
                          const std::vector<char>& feas, bool supp_feasible) {
  if (v.size() != x.size()) fail_usage("exact_cg: v/x size mismatch");
  for (double xe : x)
    if (xe < 0.0 || xe > 1.0) fail_usage("exact_cg: x outside [0,1]");
  GapReport rep;
  double denom = 0.0;
  for (size_t e = 0; e < v.size(); ++e) denom += v[e] * x[e];
  rep.denominator = denom;
  if (denom <= 0.0) {
    if (!supp_feasible)
      fail_usage("exact_cg: zero denominator with infeasible support has no extension");
    rep.cg_value = 1.0;
    rep.numerator = 0.0;
    rep.extension_case = CgExtension::limit_one;
    return rep;
  }
  int ns = static_cast<int>(items.size());
  unsigned full = (1u << ns) - 1;
  std::vector<double> vsum(1u << ns, 0.0), px(1u << ns, 1.0), qx(1u << ns, 1.0);
  for (unsigned mask = 1; mask <= full && ns > 0; ++mask) {
    int b = std::countr_zero(mask);
    unsigned rest = mask & (mask - 1);
    vsum[mask] = vsum[rest] + v[items[b]];
    px[mask] = px[rest] * x[items[b]];
    qx[mask] = qx[rest] * (1.0 - x[items[b]]);
  }
  std::vector<double> f(1u << ns, 0.0);
  for (unsigned mask = 1; mask <= full && ns > 0; ++mask) {
    double best = feas[mask] ? vsum[mask] : 0.0;
    unsigned rem = mask;
    while (rem) {
      unsigned bit = rem & (0u - rem);
      best = std::max(best, f[mask ^ bit]);
      rem ^= bit;
    }
    f[mask] = best;
  }
  double num = 0.0, c = 0.0;
  for (unsigned mask = 0; mask <= full; ++mask) {
    double term = px[mask] * qx[full & ~mask] * f[mask];
    double y = term - c;
    double t = num + y;
    c = (t - num) - y;
    num = t;
    if (ns == 0) break;
  }
  rep.numerator = num;
  rep.cg_value = num / denom;
  return rep;
}

ItemSet pruned_items(const Vec& v, const Vec& x) {
  ItemSet items;
  for (int e = 0; e < static_cast<int>(x.size()); ++e)
    if (x[e] > 0.0 && v[e] > 0.0) items.push_back(e);
  if (items.size() > 20) fail_unsupported("exact_cg: pruned support larger than 20");
  return items;
}

IgWitness make_witness(double num, double sigma, const ItemSet& r, const Vec& y) {
  IgWitness w;
  w.r = r;
  w.y = y;
  if (sigma <= 0.0) {
    if (num > 0.0) {
      w.infinite = true;
      w.ratio = std::numeric_limits<double>::infinity();
    } else {
      w.ratio = 0.0;
    }
  } else {
    w.ratio = num / sigma;
  }
  return w;
}

void check_supp_in_r(const Vec& y, const ItemSet& r) {
  for (int e = 0; e < static_cast<int>(y.size()); ++e)
    if (y[e] > 0.0 && !std::binary_search(r.begin(), r.end(), e))
      fail_usage("ig_witness_ratio: supp(y) not contained in r");
}

}  // namespace

double sigma_opt(const Hypergraph& h, const ItemSet& r, const Vec& v) {
  check_sigma_args(static_cast<int>(h.edges.size()), r, v);
  std::vector<char> used(h.num_vertices, 0);
  auto can_add = [&](int e) {
    for (int vtx : h.edges[e])
      if (used[vtx]) return false;
    return true;
  };
  auto apply = [&](int e) {
    for (int vtx : h.edges[e]) used[vtx] = 1;
  };
  auto undo = [&](int e) {
    for (int vtx : h.edges[e]) used[vtx] = 0;
  };
  return sigma_bb(r, v, can_add, apply, undo);
}

double sigma_opt(const KnapsackInstance& inst, const ItemSet& r, const Vec& v) {
  check_sigma_args(inst.n(), r, v);
  double cap = 1.0 + kFeasTol;
  auto can_add = [&](int i) { return inst.sizes[i] <= cap; };
  auto apply = [&](int i) { cap -= inst.sizes[i]; };
  auto undo = [&](int i) { cap += inst.sizes[i]; };
  return sigma_bb(r, v, can_add, apply, undo);
}

double sigma_opt(const KcsInstance& inst, const ItemSet& r, const Vec& v) {
  check_sigma_args(inst.n, r, v);
  std::vector<double> load(inst.m, 0.0);
  auto can_add = [&](int j) {
    for (auto [i, a] : inst.columns[j])
      if (load[i] + a > 1.0 + kFeasTol) return false;
    return true;
  };
  auto apply = [&](int j) {
    for (auto [i, a] : inst.columns[j]) load[i] += a;
  };
  auto undo = [&](int j) {
    for (auto [i, a] : inst.columns[j]) load[i] -= a;
  };
  return sigma_bb(r, v, can_add, apply, undo);
}

GapReport exact_cg(const Hypergraph& h, const Vec& v, const FractionalPoint& x) {
  if (v.size() != h.edges.size() || x.size() != h.edges.size())
    fail_usage("exact_cg: dimension mismatch");
  ItemSet items = pruned_items(v, x);
  return exact_cg_engine(v, x, items, feas_table_hypergraph(h, items),
                         is_matching(h, support(x)));
}

GapReport exact_cg(const KnapsackInstance& inst, const Vec& v, const FractionalPoint& x) {
  if (static_cast<int>(v.size()) != inst.n() || static_cast<int>(x.size()) != inst.n())
    fail_usage("exact_cg: dimension mismatch");
  ItemSet items = pruned_items(v, x);
  return exact_cg_engine(v, x, items, feas_table_knapsack(inst, items),
                         knapsack_feasible_set(inst, support(x)));
}

GapReport exact_cg(const KcsInstance& inst, const Vec& v, const FractionalPoint& x) {
  if (static_cast<int>(v.size()) != inst.n || static_cast<int>(x.size()) != inst.n)
    fail_usage("exact_cg: dimension mismatch");
  ItemSet items = pruned_items(v, x);
  return exact_cg_engine(v, x, items, feas_table_kcs(inst, items),
                         kcs_feasible_set(inst, support(x)));
}

double cg_hg_projective_formula(int k) {
  if (k < 2) fail_usage("cg_hg_projective_formula: k must be >= 2");
  double base = 1.0 - 1.0 / k;
  double expo = static_cast<double>(k) * k - k + 1;
  return (1.0 - std::pow(base, expo)) / (k - 1.0 + 1.0 / k);
}

IgWitness ig_witness_ratio(const Hypergraph& h, const Vec& v, const Vec& y, const ItemSet& r) {
  if (!hypergraph_feasible(h, y, 1.0)) fail_usage("ig_witness_ratio: y infeasible");
  check_supp_in_r(y, r);
  double num = 0.0;
  for (size_t e = 0; e < y.size(); ++e) num += v[e] * y[e];
  return make_witness(num, sigma_opt(h, r, v), r, y);
}

IgWitness ig_witness_ratio(const KnapsackInstance& inst, const Vec& v, const Vec& y,
                           const ItemSet& r) {
  if (!knapsack_feasible_fractional(inst, y)) fail_usage("ig_witness_ratio: y infeasible");
  check_supp_in_r(y, r);
  double num = 0.0;
  for (size_t e = 0; e < y.size(); ++e) num += v[e] * y[e];
  return make_witness(num, sigma_opt(inst, r, v), r, y);
}

IgWitness ig_witness_ratio(const KcsInstance& inst, const Vec& v, const Vec& y,
                           const ItemSet& r) {
  if (!kcs_feasible(inst, y, false)) fail_usage("ig_witness_ratio: y infeasible");
  check_supp_in_r(y, r);
  double num = 0.0;
  for (size_t e = 0; e < y.size(); ++e) num += v[e] * y[e];
  return make_witness(num, sigma_opt(inst, r, v), r, y);
}

bool check_cg_le_inv_ig(const GapReport& cg, const IgWitness& witness) {
  if (witness.infinite) return cg.cg_value <= 1e-9;
  if (witness.ratio <= 0.0) fail_usage("check_cg_le_inv_ig: witness ratio not positive");
  return cg.cg_value <= 1.0 / witness.ratio + 1e-9;
}

Vec reduce_value_average(const Vec& v, const FractionalPoint& x, double t) {
  if (v.size() != x.size()) fail_usage("reduce_value_average: dimension mismatch");
  if (t < 0.0 || t > 1.0) fail_usage("reduce_value_average: t outside [0,1]");
  double sx = 0.0, svx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    svx += v[i] * x[i];
  }
  if (!(sx > 0.0)) fail_usage("reduce_value_average: sum of x is zero");
  double vavg = svx / sx;
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = (1.0 - t) * v[i] + t * vavg;
  return out;
}

FractionalPoint reduce_equalize_pair(const FractionalPoint& x, int i, int j) {
  if (i == j) fail_usage("reduce_equalize_pair: need i != j");
  if (i < 0 || j < 0 || i >= static_cast<int>(x.size()) || j >= static_cast<int>(x.size()))
    fail_usage("reduce_equalize_pair: index out of range");
  FractionalPoint out = x;
  double avg = (x[i] + x[j]) / 2.0;
  out[i] = avg;
  out[j] = avg;
  return out;
}

double cg_uniform_classk(int k, long long n, double lambda) {
  return g_func(k, n, lambda);
}

std::vector<ScanRow> conjecture_scan(const std::vector<int>& k_list,
                                     const std::vector<long long>& n_list,
                                     const std::vector<double>& lambda_grid) {
  const double fl_bound = -std::expm1(-2.0) / 2.0;  // (1-e^{-2})/2
  std::vector<ScanRow> rows;
  for (int k : k_list) {
    if (k < 1) fail_usage("conjecture_scan: k must be >= 1");
    // Proven facts about F alone (monotone non-increasing, lower bound at k+1).
    double fk1 = f_func(k, k + 1.0);
    if (fk1 < fl_bound - 1e-12)
      fail_assert("conjecture_scan: F(k,k+1) below (1-e^{-2})/2 at k=" + std::to_string(k));
    double prev = f_func(k, 0.0);
    for (int g = 1; g <= 100; ++g) {
      double lam = (k + 1.0) * g / 100.0;
      double cur = f_func(k, lam);
      if (cur > prev + 1e-10)
        fail_assert("conjecture_scan: F(k,.) increased at k=" + std::to_string(k));
      prev = cur;
    }
    for (long long n : n_list) {
      if (n < k + 1) continue;
      for (double lam : lambda_grid) {
        if (!(lam > 0.0) || lam > k + 1.0) continue;
        ScanRow row;
        row.k = k;
        row.n = n;
        row.lambda = lam;
        row.g = g_func(k, n, lam);
        row.f = f_func(k, lam);
        row.margin = row.g - row.f;
        // Anderson's inequality needs n >= lambda and s <= lambda-1 for all
        // s < k, i.e. lambda >= k.
        row.proven_region = lam >= static_cast<double>(k) && static_cast<double>(n) >= lam;
        if (row.proven_region && row.margin < -1e-12)
          fail_assert("conjecture_scan: proven-region cell G < F at k=" + std::to_string(k));
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "k,n,lambda,G,F,margin,proven_region_flag\n";
  for (const ScanRow& r : rows)
    os << r.k << "," << r.n << "," << r.lambda << "," << r.g << "," << r.f << ","
       << r.margin << "," << (r.proven_region ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace crsbench
