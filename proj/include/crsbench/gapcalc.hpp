#ifndef CRSBENCH_GAPCALC_HPP
#define CRSBENCH_GAPCALC_HPP

#include <string>
#include <vector>

#include "crsbench/instances.hpp"

namespace crsbench {

enum class CgExtension { generic, limit_one };

struct GapReport {
  double cg_value = 0.0;
  double numerator = 0.0;    // E[sigma_v(R(x))]
  double denominator = 0.0;  // sum v_e x_e
  CgExtension extension_case = CgExtension::generic;
};

struct IgWitness {
  ItemSet r;
  Vec y;
  double ratio = 0.0;  // sum v_e y_e / sigma_v(r)
  bool infinite = false;
};

// Exact optimum of sum_{e in S} v_e over feasible S subseteq r; |r| <= 24.
double sigma_opt(const Hypergraph& h, const ItemSet& r, const Vec& v);
double sigma_opt(const KnapsackInstance& inst, const ItemSet& r, const Vec& v);
double sigma_opt(const KcsInstance& inst, const ItemSet& r, const Vec& v);

// Exact correlation gap by subset enumeration over supp(x) (after pruning
// items with v_e = 0 or x_e = 0); |supp| <= 20.
GapReport exact_cg(const Hypergraph& h, const Vec& v, const FractionalPoint& x);
GapReport exact_cg(const KnapsackInstance& inst, const Vec& v, const FractionalPoint& x);
GapReport exact_cg(const KcsInstance& inst, const Vec& v, const FractionalPoint& x);

// (1 - (1-1/k)^{k^2-k+1}) / (k - 1 + 1/k): CG of the order-(k-1) plane instance.
double cg_hg_projective_formula(int k);

IgWitness ig_witness_ratio(const Hypergraph& h, const Vec& v, const Vec& y, const ItemSet& r);
IgWitness ig_witness_ratio(const KnapsackInstance& inst, const Vec& v, const Vec& y,
                           const ItemSet& r);
IgWitness ig_witness_ratio(const KcsInstance& inst, const Vec& v, const Vec& y,
                           const ItemSet& r);

bool check_cg_le_inv_ig(const GapReport& cg, const IgWitness& witness);

// v~(t) = (1-t) v + t v_avg 1_n with v_avg = sum v_i x_i / sum x_i.
Vec reduce_value_average(const Vec& v, const FractionalPoint& x, double t);

// Replace x_i, x_j by their average.
FractionalPoint reduce_equalize_pair(const FractionalPoint& x, int i, int j);

// CG of the uniform class-k instance at x = (lambda/n) 1_n: equals G(k,n,lambda).
double cg_uniform_classk(int k, long long n, double lambda);

struct ScanRow {
  int k;
  long long n;
  double lambda;
  double g;
  double f;
  double margin;         // g - f
  bool proven_region;    // lambda in [k, k+1]: Anderson's inequality applies
};

// Numerical scan behind the G >= F conjecture; asserts only proven-region cells
// and the F monotonicity/lower-bound facts. Throws on a proven-region failure.
std::vector<ScanRow> conjecture_scan(const std::vector<int>& k_list,
                                     const std::vector<long long>& n_list,
                                     const std::vector<double>& lambda_grid);
std::string scan_to_csv(const std::vector<ScanRow>& rows);

}  // namespace crsbench

#endif
