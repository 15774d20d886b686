#ifndef CRSBENCH_INSTANCES_HPP
#define CRSBENCH_INSTANCES_HPP

#include <optional>
#include <utility>
#include <vector>

namespace crsbench {

// Ground-set indices are 0-based everywhere, including the JSON format.
using ItemSet = std::vector<int>;  // sorted, distinct
using Vec = std::vector<double>;
using FractionalPoint = Vec;  // x_e in [0,1], indexed by the ground set

constexpr double kFeasTol = 1e-12;

struct Hypergraph {
  int num_vertices = 0;
  std::vector<ItemSet> edges;  // each sorted ascending, nonempty
  std::optional<Vec> weights;

  // Derived incidence structure, built by finalize().
  std::vector<ItemSet> vertex_edges;  // vertex -> incident edge ids
  std::vector<ItemSet> neighbor;     // edge -> edges sharing a vertex, incl. itself

  void finalize();  // validates and builds the indices above
  int rank() const;
};

struct KnapsackInstance {
  Vec sizes;   // a_i in [0,1]
  Vec values;  // v_i > 0

  void validate() const;
  int n() const { return static_cast<int>(sizes.size()); }
};

struct KcsInstance {
  int m = 0;  // constraints
  int n = 0;  // items
  std::vector<std::vector<std::pair<int, double>>> columns;  // (constraint, coeff in (0,1])
  Vec values;
  int k = 1;  // column sparsity bound

  std::vector<std::vector<std::pair<int, double>>> rows;  // built by finalize()

  void finalize();
};

struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> out;
};

// --- feasibility predicates ---------------------------------------------

bool hypergraph_feasible(const Hypergraph& h, const FractionalPoint& x, double b);
bool is_matching(const Hypergraph& h, const ItemSet& s);
bool knapsack_feasible_set(const KnapsackInstance& inst, const ItemSet& s);
bool kcs_feasible(const KcsInstance& inst, const FractionalPoint& x, bool strengthened);
bool kcs_feasible_set(const KcsInstance& inst, const ItemSet& s);
bool knapsack_feasible_fractional(const KnapsackInstance& inst, const Vec& y);
int item_class(double a_i);  // unique k >= 1 with 1/(k+1) < a_i <= 1/k

// --- generators -----------------------------------------------------------

Hypergraph gen_projective_plane(int p);  // p prime, or 1 for the triangle

std::pair<KnapsackInstance, FractionalPoint> gen_class_k_uniform(int k, int n, double eps);
// Integrality-gap variant: a = (1/(k+1) + eps) * 1_n, x = LP-greedy point.
std::pair<KnapsackInstance, FractionalPoint> gen_class_k_gap(int k, int n, double eps);

std::pair<KcsInstance, FractionalPoint> gen_kcs_nat(int k, double eps);
std::pair<KcsInstance, FractionalPoint> gen_kcs_str(int k, double eps);
std::pair<KcsInstance, FractionalPoint> gen_dknapsack_example(int d, double eps);

Digraph gen_circulant_tournament(int d);

enum class KnapTightFamily { small_4_9, gen_1_4, small_bound_1_3 };
std::pair<KnapsackInstance, FractionalPoint> gen_knapsack_tight(KnapTightFamily which,
                                                                double eps);

ItemSet full_item_set(int n);
ItemSet support(const Vec& x);

}  // namespace crsbench

#endif
