#include "crsbench/hypergraph_crs.hpp"

#include <cmath>

#include "crsbench/error.hpp"

namespace crsbench {
namespace {

// Child-index offsets inside a trial's stream space.
constexpr std::uint64_t kClockSpace = 0x636c6f636bULL;  // clocks live apart from q draws

void check_loads(const Hypergraph& h, const FractionalMatching& y) {
  for (int v = 0; v < h.num_vertices; ++v) {
    double load = 0.0;
    for (int e : h.vertex_edges[v]) load += y[e];
    if (load > 1.0 + kFeasTol) fail_assert("hypergraph scheme emitted vertex load > 1");
  }
}

FractionalMatching y_from_profile(const Hypergraph& h, const PoissonProfile& q) {
  FractionalMatching y(h.edges.size(), 0.0);
  for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
    if (q[e] == 0) continue;
    long long denom = 0;
    for (int f : h.neighbor[e]) denom += q[f];
    y[e] = static_cast<double>(q[e]) / static_cast<double>(denom);
  }
  check_loads(h, y);
  return y;
}

}  // namespace

double hg_keep_probability(double x) {
  if (x < 0.0 || x > 1.0) fail_usage("hg_keep_probability: x outside [0,1]");
  if (x == 0.0) return 1.0;
  if (x < 1e-6) return -std::expm1(-x) / x;  // expm1 avoids cancellation
  return (1.0 - std::exp(-x)) / x;
}

HgCrsResult hg_crs_profile(const Hypergraph& h, const FractionalPoint& x, const ItemSet& r,
                           const RngStream& rng) {
  if (x.size() != h.edges.size()) fail_usage("hg_crs: dimension mismatch");
  PoissonProfile q(h.edges.size(), 0);
  for (int e : r) {
    if (e < 0 || e >= static_cast<int>(h.edges.size())) fail_usage("hg_crs: bad edge in r");
    if (!(x[e] > 0.0)) fail_usage("hg_crs: r not contained in supp(x)");
    RngStream s = rng.derive(e);
    if (s.sample_bernoulli(hg_keep_probability(x[e])))
      q[e] = s.sample_truncated_poisson_geq1(x[e]);
  }
  return {y_from_profile(h, q), q};
}

FractionalMatching hg_crs(const Hypergraph& h, const FractionalPoint& x, const ItemSet& r,
                          const RngStream& rng) {
  return hg_crs_profile(h, x, r, rng).y;
}

HgCrsResult hg_merged_profile(const Hypergraph& h, const FractionalPoint& x,
                              const RngStream& rng) {
  if (x.size() != h.edges.size()) fail_usage("hg_merged: dimension mismatch");
  PoissonProfile q(h.edges.size(), 0);
  for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
    if (x[e] < 0.0 || x[e] > 1.0) fail_usage("hg_merged: x outside [0,1]");
    RngStream s = rng.derive(e);
    q[e] = s.sample_poisson(x[e]);
  }
  return {y_from_profile(h, q), q};
}

FractionalMatching hg_merged(const Hypergraph& h, const FractionalPoint& x,
                             const RngStream& rng) {
  return hg_merged_profile(h, x, rng).y;
}

ItemSet exp_clock_round(const Hypergraph& h, const PoissonProfile& q, const RngStream& rng) {
  if (q.size() != h.edges.size()) fail_usage("exp_clock_round: dimension mismatch");
  int ne = static_cast<int>(h.edges.size());
  Vec d(ne, 0.0);
  for (int e = 0; e < ne; ++e) {
    if (q[e] < 0) fail_usage("exp_clock_round: negative profile entry");
    if (q[e] >= 1) {
      RngStream s = rng.derive(kClockSpace + e);
      d[e] = s.sample_exponential(static_cast<double>(q[e]));
    }
  }
  ItemSet m;
  for (int e = 0; e < ne; ++e) {
    if (q[e] == 0) continue;
    bool win = true;
    for (int f : h.neighbor[e]) {
      if (f == e || q[f] == 0) continue;
      if (d[f] < d[e] || (d[f] == d[e] && f < e)) {
        win = false;
        break;
      }
    }
    if (win) m.push_back(e);
  }
  if (!is_matching(h, m)) fail_assert("exp_clock_round produced a non-matching");
  return m;
}

ItemSet hg_crs_set(const Hypergraph& h, const FractionalPoint& x, const ItemSet& r,
                   const RngStream& rng) {
  HgCrsResult res = hg_crs_profile(h, x, r, rng);
  return exp_clock_round(h, res.q, rng);
}

}  // namespace crsbench
