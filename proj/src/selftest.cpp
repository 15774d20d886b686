#include "crsbench/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "crsbench/error.hpp"
#include "crsbench/gapcalc.hpp"
#include "crsbench/harness.hpp"
#include "crsbench/hypergraph_crs.hpp"
#include "crsbench/instances.hpp"
#include "crsbench/kcspip_crs.hpp"
#include "crsbench/knapsack_crs.hpp"
#include "crsbench/rng.hpp"
#include "crsbench/special.hpp"

namespace crsbench {
namespace {

const double kHalfOneMinusExpM2 = -std::expm1(-2.0) / 2.0;  // (1-e^{-2})/2

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAIL[" << what << "]";
    }
  }
  void note(const std::string& s) { detail << " " << s; }
};

double unif(RngStream& r, double lo, double hi) { return lo + (hi - lo) * r.next_double(); }

int unif_int(RngStream& r, int lo, int hi) {  // inclusive range
  int v = lo + static_cast<int>(r.next_double() * (hi - lo + 1));
  return std::min(v, hi);
}

// Random knapsack instance with sizes in (alo, ahi], x scaled into P(a).
std::pair<KnapsackInstance, FractionalPoint> random_knap(RngStream& r, int n, double alo,
                                                         double ahi) {
  KnapsackInstance inst;
  inst.sizes.resize(n);
  inst.values.resize(n);
  FractionalPoint x(n);
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    inst.sizes[i] = alo + (ahi - alo) * std::max(1e-6, r.next_double());
    inst.values[i] = 0.1 + r.next_double();
    x[i] = std::max(0.02, r.next_double());
    t += inst.sizes[i] * x[i];
  }
  if (t > 1.0)
    for (double& xi : x) xi /= t;
  return {inst, x};
}

Scheme knap_scheme(const std::string& name, const KnapsackInstance& inst,
                   const FractionalPoint& x) {
  InstanceFile f;
  f.type = "knapsack";
  f.knap = inst;
  return make_scheme(name, f, x);
}

Scheme kcs_scheme(const std::string& name, const KcsInstance& inst,
                  const FractionalPoint& x) {
  InstanceFile f;
  f.type = "kcspip";
  f.kcs = inst;
  return make_scheme(name, f, x);
}

Scheme hg_scheme(const std::string& name, const Hypergraph& h, const FractionalPoint& x) {
  InstanceFile f;
  f.type = "hypergraph";
  f.hg = h;
  return make_scheme(name, f, x);
}

// Every supp element's estimate within the 3-sigma band above `bound`.
bool report_clears(const BalancednessReport& rep, const FractionalPoint& x, double bound,
                   double sigmas = 3.0) {
  for (int e = 0; e < static_cast<int>(x.size()); ++e) {
    if (!(x[e] > 0.0)) continue;
    if (rep.cond_samples[e] == 0) return false;
    if (rep.estimate[e] < bound - sigmas * rep.stderr_est[e]) return false;
  }
  return true;
}

int brute_chromatic(const Digraph& g) {
  int n = g.n;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int u = 0; u < n; ++u)
    for (int v : g.out[u]) adj[u][v] = adj[v][u] = true;
  for (int c = 1; c <= n; ++c) {
    std::vector<int> col(n, -1);
    auto rec = [&](auto&& self, int u) -> bool {
      if (u == n) return true;
      for (int cc = 0; cc < c; ++cc) {
        bool ok = true;
        for (int w = 0; w < u && ok; ++w)
          if (adj[u][w] && col[w] == cc) ok = false;
        if (!ok) continue;
        col[u] = cc;
        if (self(self, u + 1)) return true;
        col[u] = -1;
      }
      return false;
    };
    if (rec(rec, 0)) return c;
  }
  return n;
}

double knap_value(const KnapsackInstance& inst, const ItemSet& s) {
  double v = 0.0;
  for (int i : s) v += inst.values[i];
  return v;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  size_t n = std::max(p.size(), q.size());
  for (size_t i = 0; i < n; ++i)
    d += std::abs((i < p.size() ? p[i] : 0.0) - (i < q.size() ? q[i] : 0.0));
  return d / 2.0;
}

// ---- criteria -----------------------------------------------------------

void c1_exact_cg_fano(Check& ck, std::uint64_t, int) {
  Hypergraph fano = gen_projective_plane(2);
  Vec v(7, 1.0);
  FractionalPoint x(7, 1.0 / 3.0);
  GapReport rep = exact_cg(fano, v, x);
  double expect = (1.0 - std::pow(2.0 / 3.0, 7)) / (7.0 / 3.0);
  ck.require(std::abs(rep.cg_value - expect) <= 1e-12, "fano cg closed form");
  ck.require(std::abs(cg_hg_projective_formula(3) - expect) <= 1e-14, "formula cross-check");
  ck.require(rep.cg_value >= -std::expm1(-3.0) / 3.0, "cg >= (1-e^-3)/3");
  ck.require(rep.cg_value <= 3.0 / 7.0 + 1e-12, "cg <= 3/7");
  ck.detail << " cg=" << rep.cg_value;
}

void c2_exact_cg_classk(Check& ck, std::uint64_t seed, int) {
  RngStream r(seed, 902);
  double worst = 1.0;
  for (int i = 0; i < 100; ++i) {
    int k = 1 + i % 3;
    int n = unif_int(r, 2, 12);
    auto [inst, x] = random_knap(r, n, 1.0 / (k + 1), 1.0 / k);
    GapReport rep = exact_cg(inst, inst.values, x);
    worst = std::min(worst, rep.cg_value);
    if (rep.cg_value < kHalfOneMinusExpM2 - 1e-9) {
      ck.require(false, "instance " + std::to_string(i));
      return;
    }
  }
  ck.detail << " min cg=" << worst << " over 100 instances";
}

void c3_closed_forms(Check& ck, std::uint64_t, int) {
  ck.require(std::abs(f_func(1, 2.0) - kHalfOneMinusExpM2) <= 1e-12, "F(1,2)");
  for (int k = 1; k <= 200; ++k) {
    double fv = f_func(k, k + 1.0);
    if (k == 1)
      ck.require(std::abs(fv - kHalfOneMinusExpM2) <= 1e-12, "F(1,2) equality");
    else if (fv <= kHalfOneMinusExpM2 + 1e-12) {
      ck.require(false, "F(k,k+1) not strictly above bound at k=" + std::to_string(k));
      break;
    }
  }
  for (int k = 1; k <= 50 && ck.ok; ++k) {
    double prev = f_func(k, 0.0);
    for (int j = 1; j <= 100; ++j) {
      double cur = f_func(k, (k + 1.0) * j / 100.0);
      if (cur > prev + 1e-12) {
        ck.require(false, "F monotonicity at k=" + std::to_string(k));
        break;
      }
      prev = cur;
    }
  }
  double gap = std::abs(g_func(2, 100000, 2.5) - f_func(2, 2.5));
  ck.require(gap < 1e-4, "Poisson limit G->F");
  ck.detail << " |G(2,1e5,2.5)-F(2,2.5)|=" << gap;
}

void c4_anderson(Check& ck, std::uint64_t seed, int) {
  RngStream r(seed, 904);
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    double lambda = unif(r, 1.0, 30.0);
    long long n = static_cast<long long>(std::ceil(lambda)) + unif_int(r, 0, 500);
    long long smax = static_cast<long long>(std::floor(lambda - 1.0));
    if (smax < 0) continue;
    long long s = std::min<long long>(smax, unif_int(r, 0, static_cast<int>(smax)));
    if (binom_cdf(s, n, lambda / n) > pois_cdf(s, lambda) + 1e-12) ++failures;
  }
  ck.require(failures == 0, "binomial CDF above Poisson CDF");
  ck.detail << " failures=" << failures << "/10000";
}

void c5_deterministic_knapsack(Check& ck, std::uint64_t seed, int) {
  const double eps = 0.01;
  struct Case {
    KnapTightFamily fam;
    const char* scheme;
    int element;
    double expected;
  };
  const Case cases[] = {
      {KnapTightFamily::small_4_9, "klp_small", 0, 4.0 / 9.0 + 2.0 * eps / 9.0},
      {KnapTightFamily::gen_1_4, "klp_gen", 0, (1.0 + eps) / 4.0},
      {KnapTightFamily::small_bound_1_3, "klp_gen", 2, 1.0 / (3.0 - 2.0 * eps)},
  };
  for (const Case& c : cases) {
    auto [inst, x] = gen_knapsack_tight(c.fam, eps);
    BalancednessReport rep =
        exact_balancedness_deterministic(knap_scheme(c.scheme, inst, x), x);
    ck.require(std::abs(rep.estimate[c.element] - c.expected) <= 1e-12,
               std::string("tight family ratio ") + c.scheme);
  }
  RngStream r(seed, 905);
  double worst[3] = {1.0, 1.0, 1.0};
  const double bounds[3] = {4.0 / 9.0, 0.25, 1.0 / 3.0};
  for (int i = 0; i < 200 && ck.ok; ++i) {
    int kind = i % 3;
    int n = unif_int(r, 3, 10);
    auto [inst, x] =
        kind == 1 ? random_knap(r, n, 0.02, 1.0) : random_knap(r, n, 0.02, 0.5);
    const char* name = kind == 0 ? "klp_small" : "klp_gen";
    Scheme sch = knap_scheme(name, inst, x);
    BalancednessReport rep = exact_balancedness_deterministic(sch, x);
    worst[kind] = std::min(worst[kind], rep.min_estimate);
    if (rep.min_estimate < bounds[kind] - 1e-9) {
      ck.require(false, "exact balancedness, instance " + std::to_string(i));
      break;
    }
    if (i % 10 == 0) {
      auto viols = test_monotonicity(sch, x, 8, 0, seed + i);
      ck.require(viols.empty(), "monotonicity, instance " + std::to_string(i));
    }
  }
  ck.detail << " min ratios small=" << worst[0] << " gen=" << worst[1]
            << " gen-small=" << worst[2];
}

void c6_mc_knapsack(Check& ck, std::uint64_t seed, int threads) {
  RngStream r(seed, 906);
  const long long n_samples = 200000;
  double worst_big = 1.0, worst_comb = 1.0, worst_bansal = 1.0;
  for (int i = 0; i < 10; ++i) {
    int n = unif_int(r, 4, 8);
    auto [big_inst, big_x] = random_knap(r, n, 0.5 + 1e-6, 1.0);
    BalancednessReport rep = estimate_balancedness(knap_scheme("klp_big", big_inst, big_x),
                                                   big_x, n_samples, seed + 600 + i, threads);
    ck.require(report_clears(rep, big_x, kHalfOneMinusExpM2),
               "klp_big instance " + std::to_string(i));
    worst_big = std::min(worst_big, rep.min_estimate);

    auto [gen_inst, gen_x] = random_knap(r, n, 0.02, 1.0);
    BalancednessReport repc =
        estimate_balancedness(knap_scheme("klp_combined", gen_inst, gen_x), gen_x, n_samples,
                              seed + 620 + i, threads);
    double comb_bound = 2.0 * (std::exp(2.0) - 1.0) / (7.0 * std::exp(2.0) - 6.0);
    ck.require(report_clears(repc, gen_x, std::max(0.279, comb_bound)),
               "klp_combined instance " + std::to_string(i));
    worst_comb = std::min(worst_comb, repc.min_estimate);

    BalancednessReport repb =
        estimate_balancedness(knap_scheme("klp_bansal", gen_inst, gen_x), gen_x, n_samples,
                              seed + 640 + i, threads);
    ck.require(report_clears(repb, gen_x, 0.125), "klp_bansal instance " + std::to_string(i));
    worst_bansal = std::min(worst_bansal, repb.min_estimate);
  }
  ck.detail << " min est big=" << worst_big << " combined=" << worst_comb
            << " bansal=" << worst_bansal;
}

Hypergraph random_rank3(RngStream& r, int nv, int ne) {
  Hypergraph h;
  h.num_vertices = nv;
  while (static_cast<int>(h.edges.size()) < ne) {
    int sz = unif_int(r, 1, 3);
    ItemSet e;
    while (static_cast<int>(e.size()) < sz) {
      int v = unif_int(r, 0, nv - 1);
      if (!std::binary_search(e.begin(), e.end(), v)) e.insert(std::lower_bound(e.begin(), e.end(), v), v);
    }
    if (std::find(h.edges.begin(), h.edges.end(), e) == h.edges.end()) h.edges.push_back(e);
  }
  h.finalize();
  return h;
}

FractionalPoint random_hg_point(RngStream& r, const Hypergraph& h) {
  FractionalPoint x(h.edges.size());
  for (double& xe : x) xe = std::max(0.05, r.next_double());
  double maxload = 0.0;
  for (int v = 0; v < h.num_vertices; ++v) {
    double load = 0.0;
    for (int e : h.vertex_edges[v]) load += x[e];
    maxload = std::max(maxload, load);
  }
  if (maxload > 1.0)
    for (double& xe : x) xe /= maxload * (1.0 + 1e-12);
  return x;
}

void hg_checks_on(Check& ck, const Hypergraph& h, const FractionalPoint& x, long long n,
                  std::uint64_t seed, int threads, const std::string& tag) {
  int ne = static_cast<int>(h.edges.size());
  // Paired clock-rounding certificate: E[chi^M] = y on the same profile.
  std::vector<double> dsum(ne, 0.0), dsq(ne, 0.0);
  for (long long t = 0; t < n; ++t) {
    RngStream rng(seed + 1, static_cast<std::uint64_t>(t));
    ItemSet r = sample_r(x, rng);
    HgCrsResult res = hg_crs_profile(h, x, r, rng);
    ItemSet m = exp_clock_round(h, res.q, rng);
    size_t p = 0;
    for (int e = 0; e < ne; ++e) {
      while (p < m.size() && m[p] < e) ++p;
      double d = res.y[e] - (p < m.size() && m[p] == e ? 1.0 : 0.0);
      dsum[e] += d;
      dsq[e] += d * d;
    }
  }
  for (int e = 0; e < ne; ++e) {
    double md = dsum[e] / n;
    double var = std::max(0.0, dsq[e] / n - md * md);
    if (std::abs(md) > 4.0 * std::sqrt(var / n) + 1e-12) {
      ck.require(false, tag + " clock marginal, edge " + std::to_string(e));
      break;
    }
  }
  // Merged law vs independent-sample + conditioned profile.
  std::vector<double> s1(ne, 0.0), q1(ne, 0.0), s2(ne, 0.0), q2(ne, 0.0);
  for (long long t = 0; t < n; ++t) {
    RngStream rng(seed + 2, static_cast<std::uint64_t>(t));
    FractionalMatching y = hg_merged(h, x, rng);
    for (int e = 0; e < ne; ++e) {
      s1[e] += y[e];
      q1[e] += y[e] * y[e];
    }
    RngStream rng2(seed + 3, static_cast<std::uint64_t>(t));
    ItemSet r = sample_r(x, rng2);
    FractionalMatching y2 = hg_crs(h, x, r, rng2);
    for (int e = 0; e < ne; ++e) {
      s2[e] += y2[e];
      q2[e] += y2[e] * y2[e];
    }
  }
  for (int e = 0; e < ne; ++e) {
    double m1 = s1[e] / n, m2 = s2[e] / n;
    double v1 = std::max(0.0, q1[e] / n - m1 * m1), v2 = std::max(0.0, q2[e] / n - m2 * m2);
    if (std::abs(m1 - m2) > 4.0 * std::sqrt((v1 + v2) / n) + 1e-12) {
      ck.require(false, tag + " merged vs composed, edge " + std::to_string(e));
      break;
    }
  }
  // Balancedness lower bound at the instance's rank.
  int k = h.rank();
  double bound = -std::expm1(-static_cast<double>(k)) / k;
  BalancednessReport rep =
      estimate_balancedness(hg_scheme("hg_crs", h, x), x, n, seed + 4, threads);
  ck.require(report_clears(rep, x, bound), tag + " balancedness");
  ck.detail << " " << tag << " min=" << rep.min_estimate;
}

void c7_hypergraph(Check& ck, std::uint64_t seed, int threads) {
  Hypergraph fano = gen_projective_plane(2);
  FractionalPoint xf(7, 1.0 / 3.0);
  hg_checks_on(ck, fano, xf, 200000, seed + 700, threads, "fano");
  RngStream r(seed, 907);
  for (int i = 0; i < 3 && ck.ok; ++i) {
    Hypergraph h = random_rank3(r, 7, 8);
    FractionalPoint x = random_hg_point(r, h);
    hg_checks_on(ck, h, x, 50000, seed + 710 + 10 * i, threads, "rand" + std::to_string(i));
  }
}

void c8_kcspip(Check& ck, std::uint64_t seed, int threads) {
  for (int d = 1; d <= 3; ++d)
    ck.require(brute_chromatic(gen_circulant_tournament(d)) == 2 * d + 1,
               "circulant chromatic d=" + std::to_string(d));
  int corpus_id = 0;
  for (int k : {2, 3, 4}) {
    KcsParams params = default_params(k);
    std::vector<std::pair<KcsInstance, FractionalPoint>> corpus;
    corpus.push_back(gen_kcs_nat(k, 0.1));
    corpus.push_back(gen_kcs_str(k, 0.01));
    for (auto& [inst, x] : corpus) {
      long long runs = 1700;
      long long in_r = 0, in_r0 = 0, in_r2 = 0, in_rf = 0;
      double m0 = 0.0, m1 = 0.0, m2 = 0.0, mf = 0.0;
      for (long long t = 0; t < runs; ++t) {
        RngStream rng(seed + 800 + corpus_id, static_cast<std::uint64_t>(t));
        ItemSet r = sample_r(x, rng);
        KcsTrace tr = kcs_crs_trace(inst, x, r, params, rng);
        in_r += static_cast<long long>(r.size());
        in_r0 += static_cast<long long>(tr.r0.size());
        in_r2 += static_cast<long long>(tr.r2.size());
        in_rf += static_cast<long long>(tr.rf.size());
        m0 += tr.r0.size();
        m1 += tr.r1.size();
        m2 += tr.r2.size();
        mf += tr.rf.size();
      }
      // Stage laws, pooled over items.
      double p0 = params.alpha / inst.k;
      double est0 = static_cast<double>(in_r0) / in_r;
      ck.require(std::abs(est0 - p0) <= 4.0 * std::sqrt(p0 * (1.0 - p0) / in_r),
                 "stage law R0, corpus " + std::to_string(corpus_id));
      double pf = 1.0 / (2.0 * params.d + 1.0);
      if (in_r2 > 0) {
        double estf = static_cast<double>(in_rf) / in_r2;
        ck.require(std::abs(estf - pf) <= 4.0 * std::sqrt(pf * (1.0 - pf) / in_r2),
                   "stage law RF, corpus " + std::to_string(corpus_id));
      }
      ck.note("k=" + std::to_string(k) + " retention |R0..RF|/run=" +
              std::to_string(m0 / runs) + "/" + std::to_string(m1 / runs) + "/" +
              std::to_string(m2 / runs) + "/" + std::to_string(mf / runs));
      BalancednessReport rep = estimate_balancedness(kcs_scheme("kcs_bansal", inst, x), x,
                                                     20000, seed + 850 + corpus_id, threads);
      ck.require(report_clears(rep, x, 1.0 / (8.0 * inst.k)),
                 "kcs_bansal, corpus " + std::to_string(corpus_id));
      ++corpus_id;
    }
  }
}

void c9_gap_examples(Check& ck, std::uint64_t seed, int) {
  {
    auto [inst, x] = gen_kcs_nat(3, 0.1);
    double ip = sigma_opt(inst, full_item_set(inst.n), inst.values);
    double lp = 0.0;
    for (double xe : x) lp += xe;
    ck.require(std::abs(ip - 1.0) <= 1e-12, "kcs-nat IP");
    ck.require(std::abs(lp - 7.0 * (2.0 - 0.1) / 3.0) <= 1e-12, "kcs-nat LP value");
    ck.require(kcs_feasible(inst, x, false), "kcs-nat x feasible");
  }
  for (int k = 1; k <= 3; ++k) {
    auto [inst, x] = gen_kcs_str(k, 0.01);
    double ip = sigma_opt(inst, full_item_set(inst.n), inst.values);
    double lp = 0.0;
    for (double xe : x) lp += xe;
    ck.require(std::abs(ip - 1.0) <= 1e-12, "kcs-str IP, k=" + std::to_string(k));
    ck.require(std::abs(lp - (2.0 * k - 1.0) * (1.0 - 0.01 * k)) <= 1e-12,
               "kcs-str LP value, k=" + std::to_string(k));
    ck.require(kcs_feasible(inst, x, false), "kcs-str x feasible");
  }
  for (int d = 1; d <= 3; ++d) {
    double eps = 0.05;
    auto [inst, x] = gen_dknapsack_example(d, eps);
    double ip = sigma_opt(inst, full_item_set(inst.n), inst.values);
    double lp = 0.0;
    for (double xe : x) lp += xe;
    double x1 = (1.0 - 2.0 * eps) / (1.0 + (2.0 * d - 3.0) * eps);
    ck.require(std::abs(ip - 1.0) <= 1e-12, "dknap IP, d=" + std::to_string(d));
    ck.require(std::abs(lp - (d * x1 + 1.0)) <= 1e-12, "dknap LP value, d=" + std::to_string(d));
    ck.require(kcs_feasible(inst, x, false), "dknap x feasible");
  }
  for (int k = 1; k <= 3; ++k) {
    double eps = 0.01;
    auto [inst, x] = gen_class_k_gap(k, 8, eps);
    Vec v(inst.n(), 1.0 / k);  // scale so the integral optimum is exactly one knapsack's worth
    double ip = sigma_opt(inst, full_item_set(inst.n()), v);
    double lp = 0.0;
    for (double xe : x) lp += xe / k;
    double stated = (k + 1.0) / ((1.0 + eps * (k + 1.0)) * k);
    ck.require(std::abs(ip - 1.0) <= 1e-12, "classk IP, k=" + std::to_string(k));
    ck.require(std::abs(lp - stated) <= 1e-12, "classk LP value, k=" + std::to_string(k));
    ck.require(knapsack_feasible_fractional(inst, x), "classk x feasible");
  }
  RngStream r(seed, 909);
  for (int i = 0; i < 100; ++i) {
    int n = unif_int(r, 3, 12);
    auto [inst, x] = random_knap(r, n, 0.02, 0.5);
    auto [lp_point, lp] = greedy_fractional_knapsack(inst);
    ItemSet s = greedy_integral_two_thirds(inst);
    double ip = sigma_opt(inst, full_item_set(n), inst.values);
    double val = knap_value(inst, s);
    if (val < (2.0 / 3.0) * lp - 1e-9 || val > ip + 1e-9) {
      ck.require(false, "two-thirds rounding, instance " + std::to_string(i));
      break;
    }
  }
  for (int i = 0; i < 100 && ck.ok; ++i) {
    int k = 1 + i % 3;
    int n = unif_int(r, k + 1, 12);
    auto [inst, x] = random_knap(r, n, 1.0 / (k + 1), 1.0 / k);
    auto [lp_point, lp] = greedy_fractional_knapsack(inst);
    ItemSet s = classk_integral_round(inst);
    double ip = sigma_opt(inst, full_item_set(n), inst.values);
    double val = knap_value(inst, s);
    if (val < lp * k / (k + 1.0) - 1e-9 || val > ip + 1e-9) {
      ck.require(false, "class-k rounding, instance " + std::to_string(i));
      break;
    }
  }
}

void c10_distribution_identities(Check& ck, std::uint64_t seed, int threads) {
  {  // min of exponentials is Exp(xi + eta): mean and variance at 4 sigma
    const double xi = 1.5, eta = 2.5, rate = xi + eta;
    const long long n = 100000;
    double s = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    long long first_wins = 0;
    for (long long t = 0; t < n; ++t) {
      RngStream rng(seed + 1000, static_cast<std::uint64_t>(t));
      double a = rng.sample_exponential(xi);
      double b = rng.sample_exponential(eta);
      double m = std::min(a, b);
      if (a < b) ++first_wins;
      s += m;
      s2 += m * m;
      s3 += m * m * m;
      s4 += m * m * m * m;
    }
    double mean = s / n, var = std::max(0.0, s2 / n - mean * mean);
    double se_mean = std::sqrt(var / n);
    ck.require(std::abs(mean - 1.0 / rate) <= 4.0 * se_mean, "exp-min mean");
    // se of the sample variance via the empirical fourth central moment
    double m4 = s4 / n - 4.0 * mean * (s3 / n) + 6.0 * mean * mean * (s2 / n) -
                3.0 * std::pow(mean, 4);
    double se_var = std::sqrt(std::max(0.0, m4 - var * var) / n);
    ck.require(std::abs(var - 1.0 / (rate * rate)) <= 4.0 * se_var, "exp-min variance");
    double p = xi / rate, phat = static_cast<double>(first_wins) / n;
    ck.require(std::abs(phat - p) <= 4.0 * std::sqrt(p * (1.0 - p) / n), "exp argmin law");
  }
  {  // Pois(1.2) + Pois(0.7) vs Pois(1.9): empirical TV < 0.01 at N = 1e6
    const long long n = 1000000;
    std::vector<double> h1(41, 0.0), h2(41, 0.0);
    for (long long t = 0; t < n; ++t) {
      RngStream rng(seed + 1001, static_cast<std::uint64_t>(t));
      int a = rng.sample_poisson(1.2) + rng.sample_poisson(0.7);
      int b = rng.sample_poisson(1.9);
      ++h1[std::min(a, 40)];
      ++h2[std::min(b, 40)];
    }
    for (double& v : h1) v /= n;
    for (double& v : h2) v /= n;
    double tv = tv_distance(h1, h2);
    ck.require(tv < 0.01, "poisson additivity TV");
    ck.detail << " tv_add=" << tv;
  }
  {  // sum of 1e4 Bernoulli(xi/1e4) vs the Pois(xi) pmf: TV < 0.01
    const double xi = 2.0;
    const long long n = 200000, ell = 10000;
    std::vector<double> h(41, 0.0);
    for (long long t = 0; t < n; ++t) {
      RngStream rng(seed + 1002, static_cast<std::uint64_t>(t));
      int sum = 0;
      for (long long j = 0; j < ell; ++j)
        if (rng.next_double() < xi / ell) ++sum;
      ++h[std::min<long long>(sum, 40)];
    }
    for (double& v : h) v /= n;
    std::vector<double> pmf(41, 0.0);
    double prev = 0.0;
    for (int j = 0; j <= 40; ++j) {
      double cdf = pois_cdf(j, xi);
      pmf[j] = cdf - prev;
      prev = cdf;
    }
    double tv = tv_distance(h, pmf);
    ck.require(tv < 0.01, "bernoulli-sum Poisson limit TV");
    ck.detail << " tv_bern=" << tv;
  }
  {  // determinism across reruns and thread counts
    RngStream r(seed, 910);
    auto [inst, x] = random_knap(r, 6, 0.02, 1.0);
    Scheme sch = knap_scheme("klp_combined", inst, x);
    BalancednessReport a = estimate_balancedness(sch, x, 20000, seed + 1003, 1);
    BalancednessReport b = estimate_balancedness(sch, x, 20000, seed + 1003, 3);
    BalancednessReport c = estimate_balancedness(sch, x, 20000, seed + 1003, threads);
    ck.require(a.estimate == b.estimate && a.estimate == c.estimate &&
                   a.stderr_est == b.stderr_est && a.stderr_est == c.stderr_est,
               "thread-count determinism");
  }
}

struct CriterionDef {
  int id;
  const char* name;
  void (*fn)(Check&, std::uint64_t, int);
};

const CriterionDef kCriteria[] = {
    {1, "exact correlation gap, Fano plane", c1_exact_cg_fano},
    {2, "exact correlation gap, random class-k knapsack", c2_exact_cg_classk},
    {3, "closed forms F, G", c3_closed_forms},
    {4, "binomial-vs-Poisson CDF inequality", c4_anderson},
    {5, "deterministic knapsack schemes, exact", c5_deterministic_knapsack},
    {6, "randomized knapsack schemes, Monte Carlo", c6_mc_knapsack},
    {7, "hypergraph scheme", c7_hypergraph},
    {8, "k-column-sparse packing scheme", c8_kcspip},
    {9, "integrality-gap examples and roundings", c9_gap_examples},
    {10, "distribution identities and determinism", c10_distribution_identities},
};

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, int threads, std::ostream& log,
                            const std::vector<int>& ids) {
  SelftestReport report;
  report.all_pass = true;
  auto t0 = std::chrono::steady_clock::now();
  for (const CriterionDef& def : kCriteria) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), def.id) == ids.end()) continue;
    Check ck;
    auto c0 = std::chrono::steady_clock::now();
    try {
      def.fn(ck, seed, threads);
    } catch (const std::exception& ex) {
      ck.require(false, std::string("exception: ") + ex.what());
    }
    auto c1 = std::chrono::steady_clock::now();
    CriterionResult res;
    res.id = def.id;
    res.name = def.name;
    res.pass = ck.ok;
    res.seconds = std::chrono::duration<double>(c1 - c0).count();
    res.detail = ck.detail.str();
    report.all_pass = report.all_pass && res.pass;
    log << "[criterion " << res.id << "] " << (res.pass ? "PASS" : "FAIL") << " " << res.name
        << res.detail << "\n";
    log.flush();
    report.criteria.push_back(std::move(res));
  }
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // no timing in the log: `selftest` output must be byte-identical across reruns
  log << (report.all_pass ? "SELFTEST PASS" : "SELFTEST FAIL") << " ("
      << report.criteria.size() << " criteria)\n";
  return report;
}

SelftestReport run_selftest(std::uint64_t seed, int threads, std::ostream& log) {
  return run_selftest(seed, threads, log, {});
}

}  // namespace crsbench
