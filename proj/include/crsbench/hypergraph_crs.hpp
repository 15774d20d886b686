#ifndef CRSBENCH_HYPERGRAPH_CRS_HPP
#define CRSBENCH_HYPERGRAPH_CRS_HPP

#include <vector>

#include "crsbench/instances.hpp"
#include "crsbench/rng.hpp"

namespace crsbench {

// q_e >= 1 exactly on the retained edge set, 0 elsewhere.
using PoissonProfile = std::vector<int>;

// y_e in [0,1] with vertex loads <= 1; support inside the input set.
using FractionalMatching = Vec;

struct HgCrsResult {
  FractionalMatching y;
  PoissonProfile q;
};

// Randomness convention for every scheme in this codebase: the passed stream is
// a per-trial master; element e consumes rng.derive(e), so runs on nested sets
// A c B share random bits for common elements (common random numbers).
HgCrsResult hg_crs_profile(const Hypergraph& h, const FractionalPoint& x, const ItemSet& r,
                           const RngStream& rng);
FractionalMatching hg_crs(const Hypergraph& h, const FractionalPoint& x, const ItemSet& r,
                          const RngStream& rng);

HgCrsResult hg_merged_profile(const Hypergraph& h, const FractionalPoint& x,
                              const RngStream& rng);
FractionalMatching hg_merged(const Hypergraph& h, const FractionalPoint& x,
                             const RngStream& rng);

// Exponential-clock rounding: d_e ~ Exp(q_e); select e iff its clock beats every
// intersecting edge's clock. Ties (measure zero) go to the lowest edge index.
ItemSet exp_clock_round(const Hypergraph& h, const PoissonProfile& q, const RngStream& rng);

// hg_crs followed by exp_clock_round on the same profile: a set-valued scheme.
ItemSet hg_crs_set(const Hypergraph& h, const FractionalPoint& x, const ItemSet& r,
                   const RngStream& rng);

// (1 - e^{-x})/x, the step-1 keep probability; 1 at x = 0.
double hg_keep_probability(double x);

}  // namespace crsbench

#endif
