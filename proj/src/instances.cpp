#include "crsbench/instances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "crsbench/error.hpp"

namespace crsbench {
namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool sorted_distinct(const ItemSet& s) {
  for (size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] >= s[i]) return false;
  return true;
}

}  // namespace

ItemSet full_item_set(int n) {
  ItemSet s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

ItemSet support(const Vec& x) {
  ItemSet s;
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    if (x[i] > 0.0) s.push_back(i);
  return s;
}

void Hypergraph::finalize() {
  if (num_vertices < 1) fail_usage("Hypergraph: need at least one vertex");
  if (weights && weights->size() != edges.size())
    fail_usage("Hypergraph: weights length mismatch");
  vertex_edges.assign(num_vertices, {});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const ItemSet& edge = edges[e];
    if (edge.empty()) fail_usage("Hypergraph: empty edge");
    if (!sorted_distinct(edge)) fail_usage("Hypergraph: edge not sorted/distinct");
    for (int v : edge) {
      if (v < 0 || v >= num_vertices) fail_usage("Hypergraph: vertex id out of range");
      vertex_edges[v].push_back(e);
    }
  }
  neighbor.assign(edges.size(), {});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    std::set<int> nb;
    for (int v : edges[e])
      for (int f : vertex_edges[v]) nb.insert(f);
    neighbor[e].assign(nb.begin(), nb.end());
  }
}

int Hypergraph::rank() const {
  size_t k = 1;
  for (const auto& e : edges) k = std::max(k, e.size());
  return static_cast<int>(k);
}

void KnapsackInstance::validate() const {
  if (sizes.empty() || sizes.size() != values.size())
    fail_usage("KnapsackInstance: need matching nonempty sizes/values");
  for (double a : sizes)
    if (a < 0.0 || a > 1.0) fail_usage("KnapsackInstance: size outside [0,1]");
  for (double v : values)
    if (!(v > 0.0)) fail_usage("KnapsackInstance: values must be positive");
}

void KcsInstance::finalize() {
  if (m < 1 || n < 1) fail_usage("KcsInstance: need m, n >= 1");
  if (static_cast<int>(columns.size()) != n) fail_usage("KcsInstance: columns size mismatch");
  if (static_cast<int>(values.size()) != n) fail_usage("KcsInstance: values size mismatch");
  if (k < 1) fail_usage("KcsInstance: sparsity k must be >= 1");
  rows.assign(m, {});
  for (int j = 0; j < n; ++j) {
    if (!(values[j] > 0.0)) fail_usage("KcsInstance: values must be positive");
    if (static_cast<int>(columns[j].size()) > k)
      fail_usage("KcsInstance: column " + std::to_string(j) + " exceeds sparsity k");
    std::set<int> seen;
    for (auto [i, a] : columns[j]) {
      if (i < 0 || i >= m) fail_usage("KcsInstance: constraint id out of range");
      if (!seen.insert(i).second) fail_usage("KcsInstance: duplicate constraint in column");
      if (!(a > 0.0) || a > 1.0) fail_usage("KcsInstance: coefficient outside (0,1]");
      rows[i].emplace_back(j, a);
    }
  }
}

bool hypergraph_feasible(const Hypergraph& h, const FractionalPoint& x, double b) {
  if (b < 0.0) fail_usage("hypergraph_feasible: b must be nonnegative");
  if (x.size() != h.edges.size()) fail_usage("hypergraph_feasible: dimension mismatch");
  for (double xe : x)
    if (xe < 0.0) fail_usage("hypergraph_feasible: x must be nonnegative");
  for (int v = 0; v < h.num_vertices; ++v) {
    double load = 0.0;
    for (int e : h.vertex_edges[v]) load += x[e];
    if (load > b + kFeasTol) return false;
  }
  return true;
}

bool is_matching(const Hypergraph& h, const ItemSet& s) {
  std::set<int> used;
  for (int e : s) {
    if (e < 0 || e >= static_cast<int>(h.edges.size()))
      fail_usage("is_matching: invalid edge index");
    for (int v : h.edges[e])
      if (!used.insert(v).second) return false;
  }
  return true;
}

bool knapsack_feasible_set(const KnapsackInstance& inst, const ItemSet& s) {
  double sum = 0.0, c = 0.0;
  for (int i : s) {
    if (i < 0 || i >= inst.n()) fail_usage("knapsack_feasible_set: invalid index");
    double y = inst.sizes[i] - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum <= 1.0 + kFeasTol;
}

bool knapsack_feasible_fractional(const KnapsackInstance& inst, const Vec& y) {
  if (y.size() != inst.sizes.size())
    fail_usage("knapsack_feasible_fractional: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    if (y[i] < -kFeasTol || y[i] > 1.0 + kFeasTol) return false;
    sum += inst.sizes[i] * y[i];
  }
  return sum <= 1.0 + kFeasTol;
}

bool kcs_feasible(const KcsInstance& inst, const FractionalPoint& x, bool strengthened) {
  if (static_cast<int>(x.size()) != inst.n) fail_usage("kcs_feasible: dimension mismatch");
  for (double xj : x)
    if (xj < 0.0 || xj > 1.0 + kFeasTol) return false;
  for (int i = 0; i < inst.m; ++i) {
    double load = 0.0, big = 0.0;
    for (auto [j, a] : inst.rows[i]) {
      load += a * x[j];
      if (a > 0.5) big += x[j];
    }
    if (load > 1.0 + kFeasTol) return false;
    if (strengthened && big > 1.0 + kFeasTol) return false;
  }
  return true;
}

bool kcs_feasible_set(const KcsInstance& inst, const ItemSet& s) {
  std::vector<double> load(inst.m, 0.0);
  for (int j : s) {
    if (j < 0 || j >= inst.n) fail_usage("kcs_feasible_set: invalid index");
    for (auto [i, a] : inst.columns[j]) load[i] += a;
  }
  for (double l : load)
    if (l > 1.0 + kFeasTol) return false;
  return true;
}

int item_class(double a_i) {
  if (!(a_i > 0.0) || a_i > 1.0) fail_usage("item_class: size outside (0,1]");
  int k = std::max(1, static_cast<int>(std::floor(1.0 / a_i)));
  while (a_i * k > 1.0) ++k;                // ensure a <= 1/k
  while (a_i * (k + 1) <= 1.0) ++k;         // ensure a > 1/(k+1)
  return k;
}

Hypergraph gen_projective_plane(int p) {
  Hypergraph h;
  if (p == 1) {  // degenerate order-1 plane: the triangle
    h.num_vertices = 3;
    h.edges = {{0, 1}, {0, 2}, {1, 2}};
    h.finalize();
    return h;
  }
  if (!is_prime(p)) fail_unsupported("gen_projective_plane: order must be prime or 1");
  // Homogeneous coordinates over Z_p, first nonzero coordinate normalized to 1:
  // (1,b,c), (0,1,c), (0,0,1) -- p^2 + p + 1 points; lines use the same set.
  std::vector<std::array<int, 3>> pts;
  for (int b = 0; b < p; ++b)
    for (int c = 0; c < p; ++c) pts.push_back({1, b, c});
  for (int c = 0; c < p; ++c) pts.push_back({0, 1, c});
  pts.push_back({0, 0, 1});
  int np = static_cast<int>(pts.size());
  h.num_vertices = np;
  h.edges.resize(np);
  for (int l = 0; l < np; ++l) {
    for (int q = 0; q < np; ++q) {
      int dot = pts[l][0] * pts[q][0] + pts[l][1] * pts[q][1] + pts[l][2] * pts[q][2];
      if (dot % p == 0) h.edges[l].push_back(q);
    }
  }
  h.finalize();
  return h;
}

std::pair<KnapsackInstance, FractionalPoint> gen_class_k_uniform(int k, int n, double eps) {
  if (k < 1) fail_usage("gen_class_k_uniform: k must be >= 1");
  if (n <= k) fail_usage("gen_class_k_uniform: need n >= k+1");
  if (!(eps > 0.0)) fail_usage("gen_class_k_uniform: eps must be positive");
  double a = (1.0 + eps) / (k + 1);
  if (item_class(a) != k) fail_usage("gen_class_k_uniform: eps too large for class k");
  KnapsackInstance inst{Vec(n, a), Vec(n, 1.0)};
  FractionalPoint x(n, static_cast<double>(k + 1) / ((1.0 + eps) * n));
  return {inst, x};
}

std::pair<KnapsackInstance, FractionalPoint> gen_class_k_gap(int k, int n, double eps) {
  if (k < 1) fail_usage("gen_class_k_gap: k must be >= 1");
  if (n <= k) fail_usage("gen_class_k_gap: need n >= k+1");
  if (!(eps > 0.0)) fail_usage("gen_class_k_gap: eps must be positive");
  double a = 1.0 / (k + 1) + eps;
  if (item_class(a) != k) fail_usage("gen_class_k_gap: eps too large for class k");
  KnapsackInstance inst{Vec(n, a), Vec(n, 1.0)};
  FractionalPoint x(n, 1.0 / (n * a));  // uniform point of LP value 1/a
  return {inst, x};
}

std::pair<KcsInstance, FractionalPoint> gen_kcs_nat(int k, double eps) {
  if (k < 2) fail_usage("gen_kcs_nat: k must be >= 2");
  if (!(eps > 0.0) || eps >= 1.0) fail_usage("gen_kcs_nat: eps outside (0,1)");
  Hypergraph plane = gen_projective_plane(k - 1);  // lines = constraints, points = items
  KcsInstance inst;
  inst.m = static_cast<int>(plane.edges.size());
  inst.n = plane.num_vertices;
  inst.k = k;
  inst.values.assign(inst.n, 1.0);
  inst.columns.assign(inst.n, {});
  double a = 1.0 / (2.0 - eps);
  for (int l = 0; l < inst.m; ++l)
    for (int q : plane.edges[l]) inst.columns[q].emplace_back(l, a);
  inst.finalize();
  FractionalPoint x(inst.n, (2.0 - eps) / k);
  return {inst, x};
}

std::pair<KcsInstance, FractionalPoint> gen_kcs_str(int k, double eps) {
  if (k < 1) fail_usage("gen_kcs_str: k must be >= 1");
  if (!(eps > 0.0) || eps >= 1.0 / k) fail_usage("gen_kcs_str: need 0 < eps < 1/k");
  int n = 2 * k - 1;
  KcsInstance inst;
  inst.m = n;
  inst.n = n;
  inst.k = k;
  inst.values.assign(n, 1.0);
  inst.columns.assign(n, {});
  for (int i = 0; i < n; ++i) {
    inst.columns[i].emplace_back(i, 1.0);
    for (int t = 1; t <= k - 1; ++t) inst.columns[(i + t) % n].emplace_back(i, eps);
  }
  for (auto& col : inst.columns) std::sort(col.begin(), col.end());
  inst.finalize();
  FractionalPoint x(n, 1.0 - k * eps);
  return {inst, x};
}

std::pair<KcsInstance, FractionalPoint> gen_dknapsack_example(int d, double eps) {
  if (d < 1) fail_usage("gen_dknapsack_example: d must be >= 1");
  if (!(eps > 0.0) || eps >= 1.0 / (2 * d)) fail_usage("gen_dknapsack_example: eps too large");
  KcsInstance inst;
  inst.m = d;
  inst.n = d + 1;
  inst.k = d;
  inst.values.assign(inst.n, 1.0);
  inst.columns.assign(inst.n, {});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d + 1; ++j)
      inst.columns[j].emplace_back(i, i == j ? 1.0 - eps : 2.0 * eps);
  inst.finalize();
  FractionalPoint x(inst.n, 1.0);
  double x1 = (1.0 - 2.0 * eps) / (1.0 + (2.0 * d - 3.0) * eps);
  for (int j = 0; j < d; ++j) x[j] = x1;
  return {inst, x};
}

Digraph gen_circulant_tournament(int d) {
  if (d < 1) fail_usage("gen_circulant_tournament: d must be >= 1");
  Digraph g;
  g.n = 2 * d + 1;
  g.out.assign(g.n, {});
  for (int i = 0; i < g.n; ++i)
    for (int t = 1; t <= d; ++t) g.out[i].push_back((i + t) % g.n);
  return g;
}

std::pair<KnapsackInstance, FractionalPoint> gen_knapsack_tight(KnapTightFamily which,
                                                                double eps) {
  if (!(eps > 0.0) || eps >= 0.5) fail_usage("gen_knapsack_tight: eps outside (0, 0.5)");
  switch (which) {
    case KnapTightFamily::small_4_9: {
      double a = 1.0 / (2.0 + eps);
      return {{Vec(3, a), Vec(3, 1.0)}, {eps, 1.0, 1.0}};
    }
    case KnapTightFamily::gen_1_4: {
      double a = 1.0 / (1.0 + eps);
      return {{Vec(2, a), Vec(2, 1.0)}, {eps, 1.0}};
    }
    case KnapTightFamily::small_bound_1_3: {
      double a = (1.0 - eps) / 2.0;
      return {{Vec{a, a, 0.5}, Vec(3, 1.0)}, {1.0, 1.0, 2.0 * eps}};
    }
  }
  fail_usage("gen_knapsack_tight: unknown family");
}

}  // namespace crsbench
