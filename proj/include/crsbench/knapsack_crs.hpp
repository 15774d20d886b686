#ifndef CRSBENCH_KNAPSACK_CRS_HPP
#define CRSBENCH_KNAPSACK_CRS_HPP

#include <utility>
#include <vector>

#include "crsbench/instances.hpp"
#include "crsbench/rng.hpp"

namespace crsbench {

// y_i in [0,1], sum a_i y_i <= 1, support inside the input set.
using FractionalKnapsackSolution = Vec;

struct ConvexDecomposition {
  std::vector<double> lambda;   // > 0, sums to 1
  std::vector<ItemSet> parts;   // each feasible
};

// Class-1 scheme (every used item has a_i > 1/2): the hypergraph scheme run on
// the star graph with one hub; (1-e^{-2})/2-balanced for x in P(a).
FractionalKnapsackSolution klp_big_crs(const KnapsackInstance& inst, const FractionalPoint& x,
                                       const ItemSet& r, const RngStream& rng);

// Deterministic small-item scheme: chi^R if a(R) <= 1, else 2 chi^R / (3 a(R)).
FractionalKnapsackSolution klp_small_crs(const KnapsackInstance& inst,
                                         const FractionalPoint& x, const ItemSet& r);

// Deterministic general scheme: chi^R if a(R) <= 1, else chi^R / (2 a(R)).
FractionalKnapsackSolution klp_gen_crs(const KnapsackInstance& inst, const FractionalPoint& x,
                                       const ItemSet& r);

// Mixture: with probability q = 6(e^2-1)/(7e^2-6) the general scheme, otherwise
// the big scheme on the class-1 items of R. >= 2(e^2-1)/(7e^2-6) >= 0.279-balanced.
FractionalKnapsackSolution klp_combined_crs(const KnapsackInstance& inst,
                                            const FractionalPoint& x, const ItemSet& r,
                                            const RngStream& rng);
double klp_combined_mix_probability();

// Bansal-style sample-and-alter scheme: subsample R at 1/4, delete conflicting
// items from the subsample, return the survivors. 1/8-balanced for x in P(a).
ItemSet klp_bansal_crs(const KnapsackInstance& inst, const FractionalPoint& x,
                       const ItemSet& r, const RngStream& rng);

// LP optimum by the greedy algorithm: sort by v/a (ties by lower index), fill.
std::pair<FractionalPoint, double> greedy_fractional_knapsack(const KnapsackInstance& inst);

// Constructive 3/2-approximation for small-item instances (value >= (2/3) * LP).
ItemSet greedy_integral_two_thirds(const KnapsackInstance& inst);

// Constructive (k+1)/k-approximation for class-k instances.
ItemSet classk_integral_round(const KnapsackInstance& inst);

// Convex decomposition of feasible sets dominating y componentwise (Carr-Vempala
// style certificate); exact enumeration + pivoting, |supp(y)| <= 20.
ConvexDecomposition decompose_dominating(const KnapsackInstance& inst,
                                         const FractionalKnapsackSolution& y,
                                         double r_approx = 1.0);

// Sample a part from the decomposition, then thin to hit Pr[i in out] = y_i.
ItemSet round_fractional_point(const KnapsackInstance& inst,
                               const FractionalKnapsackSolution& y, const RngStream& rng);

}  // namespace crsbench

#endif
