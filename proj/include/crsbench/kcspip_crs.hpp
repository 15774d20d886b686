#ifndef CRSBENCH_KCSPIP_CRS_HPP
#define CRSBENCH_KCSPIP_CRS_HPP

#include <vector>

#include "crsbench/instances.hpp"
#include "crsbench/rng.hpp"

namespace crsbench {

struct KcsParams {
  double alpha;  // sampling intensity; alpha/k <= 1
  double ell;    // medium/tiny threshold, >= 2
  int d;         // out-degree cutoff, >= 1
};

struct BlockingFlags {
  bool bb = false;
  bool mb = false;
  bool tb = false;
};

struct BlockingDigraph {
  ItemSet items;                      // vertices, sorted item ids
  std::vector<std::vector<int>> out;  // positions into items
};

// alpha = k^{0.4} (clamped to k), ell = max(3, ln k),
// d = ceil(2 alpha + sqrt(alpha ln alpha)), sqrt term zero when alpha <= 1.
KcsParams default_params(int k);

// Definition-exact blocking events for j with respect to r, thresholds
// med(i) = (1/ell, 1/2], tiny(i) = (0, 1/ell].
BlockingFlags blocking_events(const KcsInstance& inst, const ItemSet& r, int j, double ell);

// Arc j -> j' iff some constraint i has a_ij > 0 and a_ij' > 1/2, j != j'.
BlockingDigraph build_blocking_digraph(const KcsInstance& inst, const ItemSet& r1);

// Degeneracy-ordered greedy coloring of the undirected version; requires every
// out-degree <= d, uses <= 2d+1 colors. Returns a color per vertex.
std::vector<int> degeneracy_color(const BlockingDigraph& g, int d);
std::vector<int> degeneracy_color(const Digraph& g, int d);

struct KcsTrace {
  ItemSet r0, r1, r2, rf;
  int colors_used = 0;
  int chosen_color = -1;
};

// The six-stage scheme: sample alpha/k, drop medium/tiny blocking events, build
// the blocking digraph, drop out-degree > d, color with <= 2d+1 colors, return a
// uniformly chosen color class.
KcsTrace kcs_crs_trace(const KcsInstance& inst, const FractionalPoint& x, const ItemSet& r,
                       const KcsParams& params, const RngStream& rng);
ItemSet kcs_crs(const KcsInstance& inst, const FractionalPoint& x, const ItemSet& r,
                const KcsParams& params, const RngStream& rng);

// Sample-and-alter scheme at rate 1/(4k); 1/(8k)-balanced for the natural LP.
ItemSet kcs_bansal_crs(const KcsInstance& inst, const FractionalPoint& x, const ItemSet& r,
                       const RngStream& rng);

// CG upper bound from the projective-plane instance:
// finite n: (1-(1-(2-eps)/k)^n) / ((2-eps)(k-1+1/k)); and its eps->0, n->inf limit.
double kcs_cg_upper_formula(int k, long long n, double eps);
double kcs_cg_upper_limit(int k);

}  // namespace crsbench

#endif
