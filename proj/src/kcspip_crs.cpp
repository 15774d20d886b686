#include "crsbench/kcspip_crs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crsbench/error.hpp"

namespace crsbench {
namespace {

constexpr std::uint64_t kColorChild = 0x636f6c6f72ULL;

bool contains(const ItemSet& s, int j) {
  return std::binary_search(s.begin(), s.end(), j);
}

std::vector<std::vector<int>> undirected_adj(const std::vector<std::vector<int>>& out) {
  int n = static_cast<int>(out.size());
  std::vector<std::set<int>> adj(n);
  for (int u = 0; u < n; ++u)
    for (int v : out[u]) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
  std::vector<std::vector<int>> res(n);
  for (int u = 0; u < n; ++u) res[u].assign(adj[u].begin(), adj[u].end());
  return res;
}

// Min-degree elimination via bucket queue, then greedy smallest-free-color in
// reverse removal order.
std::vector<int> color_impl(const std::vector<std::vector<int>>& out, int d) {
  int n = static_cast<int>(out.size());
  for (int u = 0; u < n; ++u)
    if (static_cast<int>(out[u].size()) > d)
      fail_usage("degeneracy_color: out-degree exceeds d");
  if (n == 0) return {};
  auto adj = undirected_adj(out);
  std::vector<int> deg(n);
  int maxdeg = 0;
  for (int u = 0; u < n; ++u) {
    deg[u] = static_cast<int>(adj[u].size());
    maxdeg = std::max(maxdeg, deg[u]);
  }
  std::vector<std::vector<int>> bucket(maxdeg + 1);
  for (int u = 0; u < n; ++u) bucket[deg[u]].push_back(u);
  std::vector<bool> removed(n, false);
  std::vector<int> order;
  order.reserve(n);
  int cursor = 0;
  for (int step = 0; step < n; ++step) {
    if (cursor > 0) --cursor;  // degrees drop by at most 1 per removal
    int u = -1;
    while (u < 0) {
      while (cursor <= maxdeg && bucket[cursor].empty()) ++cursor;
      int cand = bucket[cursor].back();
      bucket[cursor].pop_back();
      if (!removed[cand] && deg[cand] == cursor) u = cand;  // else stale entry
    }
    removed[u] = true;
    order.push_back(u);
    for (int v : adj[u])
      if (!removed[v]) {
        --deg[v];
        bucket[deg[v]].push_back(v);
      }
  }
  std::vector<int> color(n, -1);
  for (int idx = n - 1; idx >= 0; --idx) {
    int u = order[idx];
    std::vector<bool> used(2 * d + 2, false);
    for (int v : adj[u])
      if (color[v] >= 0 && color[v] < 2 * d + 2) used[color[v]] = true;
    int c = 0;
    while (used[c]) ++c;
    color[u] = c;
    if (c > 2 * d) fail_assert("degeneracy_color: needed more than 2d+1 colors");
  }
  return color;
}

}  // namespace

KcsParams default_params(int k) {
  if (k < 1) fail_usage("default_params: k must be >= 1");
  double alpha = std::pow(static_cast<double>(k), 0.4);
  alpha = std::min(alpha, static_cast<double>(k));
  double ell = std::max(3.0, std::log(static_cast<double>(k)));
  double term = alpha <= 1.0 ? 0.0 : std::sqrt(alpha * std::log(alpha));
  int d = std::max(1, static_cast<int>(std::ceil(2.0 * alpha + term)));
  return {alpha, ell, d};
}

BlockingFlags blocking_events(const KcsInstance& inst, const ItemSet& r, int j, double ell) {
  if (ell < 2.0) fail_usage("blocking_events: ell must be >= 2");
  if (j < 0 || j >= inst.n || !contains(r, j)) fail_usage("blocking_events: j not in r");
  BlockingFlags flags;
  for (auto [i, aij] : inst.columns[j]) {
    bool med_j = aij > 1.0 / ell && aij <= 0.5;
    bool tiny_j = aij > 0.0 && aij <= 1.0 / ell;
    int med_count = 0;
    double mt_sum = 0.0;
    bool other_big = false;
    for (auto [j2, a2] : inst.rows[i]) {
      if (!contains(r, j2)) continue;
      if (a2 > 0.5) {
        if (j2 != j) other_big = true;
      } else {
        if (a2 > 1.0 / ell) ++med_count;
        mt_sum += a2;
      }
    }
    if (other_big) flags.bb = true;
    if (med_j && med_count >= 3) flags.mb = true;
    if (tiny_j && (med_count >= 2 || mt_sum > 1.0)) flags.tb = true;
  }
  return flags;
}

BlockingDigraph build_blocking_digraph(const KcsInstance& inst, const ItemSet& r1) {
  BlockingDigraph g;
  g.items = r1;
  int n = static_cast<int>(r1.size());
  g.out.assign(n, {});
  std::vector<int> pos(inst.n, -1);
  for (int p = 0; p < n; ++p) pos[r1[p]] = p;
  std::vector<std::set<int>> arcs(n);
  for (int i = 0; i < inst.m; ++i) {
    std::vector<int> bigs, touchers;
    for (auto [j, a] : inst.rows[i]) {
      if (pos[j] < 0) continue;
      touchers.push_back(pos[j]);
      if (a > 0.5) bigs.push_back(pos[j]);
    }
    if (bigs.empty()) continue;
    for (int pj : touchers)
      for (int pb : bigs)
        if (pb != pj) arcs[pj].insert(pb);
  }
  for (int p = 0; p < n; ++p) g.out[p].assign(arcs[p].begin(), arcs[p].end());
  return g;
}

std::vector<int> degeneracy_color(const BlockingDigraph& g, int d) {
  return color_impl(g.out, d);
}

std::vector<int> degeneracy_color(const Digraph& g, int d) {
  return color_impl(g.out, d);
}

KcsTrace kcs_crs_trace(const KcsInstance& inst, const FractionalPoint& x, const ItemSet& r,
                       const KcsParams& params, const RngStream& rng) {
  if (static_cast<int>(x.size()) != inst.n) fail_usage("kcs_crs: dimension mismatch");
  for (int j : r) {
    if (j < 0 || j >= inst.n) fail_usage("kcs_crs: bad index in r");
    if (!(x[j] > 0.0)) fail_usage("kcs_crs: r not contained in supp(x)");
  }
  KcsTrace tr;
  double p = params.alpha / inst.k;
  if (p > 1.0) fail_usage("kcs_crs: alpha/k exceeds 1");
  for (int j : r) {
    RngStream s = rng.derive(j);
    if (s.sample_bernoulli(p)) tr.r0.push_back(j);
  }
  // Simultaneous removal: every flag judged against the full R_0.
  for (int j : tr.r0) {
    BlockingFlags f = blocking_events(inst, tr.r0, j, params.ell);
    if (!f.mb && !f.tb) tr.r1.push_back(j);
  }
  BlockingDigraph g = build_blocking_digraph(inst, tr.r1);
  std::vector<int> keep_pos;
  for (int pj = 0; pj < static_cast<int>(g.items.size()); ++pj)
    if (static_cast<int>(g.out[pj].size()) <= params.d) keep_pos.push_back(pj);
  BlockingDigraph g2;
  std::vector<int> newpos(g.items.size(), -1);
  for (int np = 0; np < static_cast<int>(keep_pos.size()); ++np) {
    newpos[keep_pos[np]] = np;
    g2.items.push_back(g.items[keep_pos[np]]);
    tr.r2.push_back(g.items[keep_pos[np]]);
  }
  g2.out.assign(g2.items.size(), {});
  for (int np = 0; np < static_cast<int>(keep_pos.size()); ++np)
    for (int q : g.out[keep_pos[np]])
      if (newpos[q] >= 0) g2.out[np].push_back(newpos[q]);
  std::vector<int> color = degeneracy_color(g2, params.d);
  for (int c : color) tr.colors_used = std::max(tr.colors_used, c + 1);
  RngStream cs = rng.derive(kColorChild);
  int palette = 2 * params.d + 1;
  tr.chosen_color = static_cast<int>(cs.next_double() * palette);
  if (tr.chosen_color >= palette) tr.chosen_color = palette - 1;
  for (int p2 = 0; p2 < static_cast<int>(g2.items.size()); ++p2)
    if (color[p2] == tr.chosen_color) tr.rf.push_back(g2.items[p2]);
  // Output contract: independent in the digraph and feasible per constraint.
  for (int p2 = 0; p2 < static_cast<int>(g2.items.size()); ++p2) {
    if (color[p2] != tr.chosen_color) continue;
    for (int q : g2.out[p2])
      if (color[q] == tr.chosen_color) fail_assert("kcs_crs: color class not independent");
  }
  if (!kcs_feasible_set(inst, tr.rf)) fail_assert("kcs_crs: infeasible output");
  return tr;
}

ItemSet kcs_crs(const KcsInstance& inst, const FractionalPoint& x, const ItemSet& r,
                const KcsParams& params, const RngStream& rng) {
  return kcs_crs_trace(inst, x, r, params, rng).rf;
}

ItemSet kcs_bansal_crs(const KcsInstance& inst, const FractionalPoint& x, const ItemSet& r,
                       const RngStream& rng) {
  if (static_cast<int>(x.size()) != inst.n) fail_usage("kcs_bansal_crs: dimension mismatch");
  ItemSet s;
  for (int j : r) {
    if (j < 0 || j >= inst.n) fail_usage("kcs_bansal_crs: bad index in r");
    if (!(x[j] > 0.0)) fail_usage("kcs_bansal_crs: r not contained in supp(x)");
    RngStream sj = rng.derive(j);
    if (sj.sample_bernoulli(1.0 / (4.0 * inst.k))) s.push_back(j);
  }
  std::vector<int> big_count(inst.m, 0);
  std::vector<double> small_sum(inst.m, 0.0);
  for (int j : s)
    for (auto [i, a] : inst.columns[j]) {
      if (a > 0.5)
        ++big_count[i];
      else
        small_sum[i] += a;
    }
  ItemSet out;
  for (int j : s) {
    bool deleted = false;
    for (auto [i, a] : inst.columns[j]) {
      bool other_big = a > 0.5 ? big_count[i] >= 2 : big_count[i] >= 1;
      if (other_big || small_sum[i] > 1.0 + kFeasTol) {
        deleted = true;
        break;
      }
    }
    if (!deleted) out.push_back(j);
  }
  if (!kcs_feasible_set(inst, out)) fail_assert("kcs_bansal_crs: infeasible output");
  return out;
}

double kcs_cg_upper_formula(int k, long long n, double eps) {
  if (k < 2) fail_usage("kcs_cg_upper_formula: k must be >= 2");
  if (n < 1) fail_usage("kcs_cg_upper_formula: n must be >= 1");
  double xj = (2.0 - eps) / k;
  if (xj > 1.0) fail_usage("kcs_cg_upper_formula: (2-eps)/k exceeds 1");
  double miss = std::pow(1.0 - xj, static_cast<double>(n));
  return (1.0 - miss) / ((2.0 - eps) * (k - 1.0 + 1.0 / k));
}

double kcs_cg_upper_limit(int k) {
  if (k < 2) fail_usage("kcs_cg_upper_limit: k must be >= 2");
  return -std::expm1(-2.0 / k) / (2.0 * (k - 1.0 + 1.0 / k));
}

}  // namespace crsbench
