#include "crsbench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "crsbench/error.hpp"
#include "crsbench/hypergraph_crs.hpp"
#include "crsbench/kcspip_crs.hpp"
#include "crsbench/knapsack_crs.hpp"

namespace crsbench {
namespace {

constexpr std::uint64_t kSampleSpace = 0x73616d70'00000000ULL;  // "samp"
constexpr std::uint64_t kChainStream = 0x636861696eULL;         // "chain"
constexpr int kFixedBatches = 64;

struct Accum {
  std::vector<long long> cnt;
  std::vector<double> sum, sumsq;
  explicit Accum(int n) : cnt(n, 0), sum(n, 0.0), sumsq(n, 0.0) {}
  void add(int e, double v) {
    ++cnt[e];
    sum[e] += v;
    sumsq[e] += v * v;
  }
  void merge(const Accum& o) {
    for (size_t e = 0; e < cnt.size(); ++e) {
      cnt[e] += o.cnt[e];
      sum[e] += o.sum[e];
      sumsq[e] += o.sumsq[e];
    }
  }
};

// Runs the scheme and records, per element of r, the retained value (y_e or the
// membership indicator).
void run_trial(const Scheme& scheme, const FractionalPoint& x, const RngStream& rng,
               Accum& acc) {
  ItemSet r = sample_r(x, rng);
  if (scheme.fractional) {
    Vec y = scheme.run_frac(r, rng);
    for (int e : r) acc.add(e, y[e]);
  } else {
    ItemSet s = scheme.run_set(r, rng);
    size_t p = 0;
    for (int e : r) {
      while (p < s.size() && s[p] < e) ++p;
      acc.add(e, p < s.size() && s[p] == e ? 1.0 : 0.0);
    }
  }
}

BalancednessReport finalize(const Accum& acc, const FractionalPoint& x, long long n) {
  int nn = static_cast<int>(x.size());
  BalancednessReport rep;
  rep.n_samples = n;
  rep.estimate.assign(nn, -1.0);
  rep.stderr_est.assign(nn, 0.0);
  rep.cond_samples.assign(nn, 0);
  for (int e = 0; e < nn; ++e) {
    rep.cond_samples[e] = acc.cnt[e];
    if (!(x[e] > 0.0) || acc.cnt[e] == 0) continue;
    double m = acc.sum[e] / acc.cnt[e];
    double var = std::max(0.0, acc.sumsq[e] / acc.cnt[e] - m * m);
    double se = std::sqrt(var / acc.cnt[e]);
    rep.estimate[e] = m;
    rep.stderr_est[e] = se;
    rep.min_estimate = std::min(rep.min_estimate, m);
    rep.min_lower3 = std::min(rep.min_lower3, m - 3.0 * se);
  }
  return rep;
}

ItemSet random_subset(const ItemSet& base, double p, RngStream& rng) {
  ItemSet out;
  for (int e : base)
    if (rng.sample_bernoulli(p)) out.push_back(e);
  return out;
}

}  // namespace

ItemSet sample_r(const FractionalPoint& x, const RngStream& rng) {
  ItemSet r;
  for (int e = 0; e < static_cast<int>(x.size()); ++e) {
    if (!(x[e] > 0.0)) continue;
    RngStream s = rng.derive(kSampleSpace + static_cast<std::uint64_t>(e));
    if (x[e] >= 1.0 || s.sample_bernoulli(x[e])) r.push_back(e);
  }
  return r;
}

Scheme make_scheme(const std::string& name, const InstanceFile& inst,
                   const FractionalPoint& x) {
  Scheme s;
  s.name = name;
  if (inst.type == "hypergraph") {
    if (!inst.hg) fail_usage("make_scheme: missing hypergraph payload");
    const Hypergraph h = *inst.hg;
    if (name == "hg_crs") {
      s.fractional = true;
      s.run_frac = [h, x](const ItemSet& r, const RngStream& rng) {
        return hg_crs(h, x, r, rng);
      };
    } else if (name == "hg_merged") {
      // Merged variant: ignores the sampled r, draws its own Poisson profile.
      s.fractional = true;
      s.run_frac = [h, x](const ItemSet&, const RngStream& rng) {
        return hg_merged(h, x, rng);
      };
    } else if (name == "hg_crs_set") {
      s.run_set = [h, x](const ItemSet& r, const RngStream& rng) {
        return hg_crs_set(h, x, r, rng);
      };
    } else {
      fail_usage("make_scheme: unknown hypergraph scheme " + name);
    }
  } else if (inst.type == "knapsack") {
    if (!inst.knap) fail_usage("make_scheme: missing knapsack payload");
    const KnapsackInstance k = *inst.knap;
    if (name == "klp_big") {
      s.fractional = true;
      s.run_frac = [k, x](const ItemSet& r, const RngStream& rng) {
        return klp_big_crs(k, x, r, rng);
      };
    } else if (name == "klp_small") {
      s.fractional = true;
      s.deterministic = true;
      s.run_frac = [k, x](const ItemSet& r, const RngStream&) {
        return klp_small_crs(k, x, r);
      };
    } else if (name == "klp_gen") {
      s.fractional = true;
      s.deterministic = true;
      s.run_frac = [k, x](const ItemSet& r, const RngStream&) {
        return klp_gen_crs(k, x, r);
      };
    } else if (name == "klp_combined") {
      s.fractional = true;
      s.run_frac = [k, x](const ItemSet& r, const RngStream& rng) {
        return klp_combined_crs(k, x, r, rng);
      };
    } else if (name == "klp_bansal") {
      s.run_set = [k, x](const ItemSet& r, const RngStream& rng) {
        return klp_bansal_crs(k, x, r, rng);
      };
    } else {
      fail_usage("make_scheme: unknown knapsack scheme " + name);
    }
  } else if (inst.type == "kcspip") {
    if (!inst.kcs) fail_usage("make_scheme: missing kcspip payload");
    const KcsInstance k = *inst.kcs;
    if (name == "kcs") {
      KcsParams params = default_params(k.k);
      s.run_set = [k, x, params](const ItemSet& r, const RngStream& rng) {
        return kcs_crs(k, x, r, params, rng);
      };
    } else if (name == "kcs_bansal") {
      s.run_set = [k, x](const ItemSet& r, const RngStream& rng) {
        return kcs_bansal_crs(k, x, r, rng);
      };
    } else {
      fail_usage("make_scheme: unknown kcspip scheme " + name);
    }
  } else {
    fail_usage("make_scheme: unknown instance type " + inst.type);
  }
  return s;
}

std::vector<std::string> scheme_names_for(const std::string& instance_type) {
  if (instance_type == "hypergraph") return {"hg_crs", "hg_merged", "hg_crs_set"};
  if (instance_type == "knapsack")
    return {"klp_big", "klp_small", "klp_gen", "klp_combined", "klp_bansal"};
  if (instance_type == "kcspip") return {"kcs", "kcs_bansal"};
  fail_usage("scheme_names_for: unknown instance type " + instance_type);
}

BalancednessReport estimate_balancedness(const Scheme& scheme, const FractionalPoint& x,
                                         long long n, std::uint64_t seed, int threads) {
  if (n < 1) fail_usage("estimate_balancedness: need n >= 1");
  if (threads < 1) threads = 1;
  int nn = static_cast<int>(x.size());
  // Fixed batch partition: results do not depend on the thread count.
  int batches = static_cast<int>(std::min<long long>(n, kFixedBatches));
  std::vector<Accum> parts(batches, Accum(nn));
  auto work = [&](int b) {
    long long lo = n * b / batches, hi = n * (b + 1) / batches;
    for (long long t = lo; t < hi; ++t)
      run_trial(scheme, x, RngStream(seed, static_cast<std::uint64_t>(t)), parts[b]);
  };
  if (threads == 1) {
    for (int b = 0; b < batches; ++b) work(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int b = w; b < batches; b += threads) work(b);
      });
    for (auto& th : pool) th.join();
  }
  Accum total(nn);
  for (const Accum& p : parts) total.merge(p);
  return finalize(total, x, n);
}

BalancednessReport exact_balancedness_deterministic(const Scheme& scheme,
                                                    const FractionalPoint& x) {
  if (!scheme.deterministic)
    fail_usage("exact_balancedness_deterministic: scheme is not deterministic");
  int nn = static_cast<int>(x.size());
  ItemSet supp = support(x);
  if (supp.size() > 16) fail_unsupported("exact_balancedness_deterministic: |supp| > 16");
  int ns = static_cast<int>(supp.size());
  std::vector<double> num(nn, 0.0);
  RngStream dummy(0, 0);
  for (unsigned mask = 0; mask < (1u << ns); ++mask) {
    double pr = 1.0;
    ItemSet r;
    for (int b = 0; b < ns; ++b) {
      if (mask & (1u << b)) {
        pr *= x[supp[b]];
        r.push_back(supp[b]);
      } else {
        pr *= 1.0 - x[supp[b]];
      }
    }
    if (pr == 0.0) continue;
    if (scheme.fractional) {
      Vec y = scheme.run_frac(r, dummy);
      for (int e : r) num[e] += pr * y[e];
    } else {
      ItemSet s = scheme.run_set(r, dummy);
      for (int e : s) num[e] += pr;
    }
  }
  BalancednessReport rep;
  rep.n_samples = 0;
  rep.estimate.assign(nn, -1.0);
  rep.stderr_est.assign(nn, 0.0);
  rep.cond_samples.assign(nn, 0);
  for (int e = 0; e < nn; ++e) {
    if (!(x[e] > 0.0)) continue;
    rep.estimate[e] = num[e] / x[e];
    rep.min_estimate = std::min(rep.min_estimate, rep.estimate[e]);
  }
  rep.min_lower3 = rep.min_estimate;
  return rep;
}

std::vector<MonotonicityViolation> test_monotonicity_chains(
    const Scheme& scheme, const std::vector<std::pair<ItemSet, ItemSet>>& chains, long long n,
    std::uint64_t seed) {
  if (n == 0 && !scheme.deterministic)
    fail_usage("test_monotonicity: exact mode needs a deterministic scheme");
  std::vector<MonotonicityViolation> out;
  for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
    const auto& [a, b] = chains[c];
    for (int e : a)
      if (!std::binary_search(b.begin(), b.end(), e))
        fail_usage("test_monotonicity: chain is not nested");
    if (n == 0) {
      RngStream dummy(0, 0);
      auto value = [&](const ItemSet& r, int e) {
        if (scheme.fractional) return scheme.run_frac(r, dummy)[e];
        ItemSet s = scheme.run_set(r, dummy);
        return std::binary_search(s.begin(), s.end(), e) ? 1.0 : 0.0;
      };
      for (int e : a) {
        double pa = value(a, e), pb = value(b, e);
        if (pa < pb - 1e-12)
          out.push_back({c, e, pa, pb, pb - pa - 1e-12});
      }
      continue;
    }
    // Coupled streams: the same per-trial master drives both arms, so shared
    // elements consume identical random bits.
    int nn = 0;
    for (int e : b) nn = std::max(nn, e + 1);
    std::vector<double> dsum(nn, 0.0), dsq(nn, 0.0), asum(nn, 0.0), bsum(nn, 0.0);
    for (long long t = 0; t < n; ++t) {
      RngStream rng(seed, static_cast<std::uint64_t>(t) * chains.size() + c);
      auto retained = [&](const ItemSet& r, std::vector<double>& into) {
        if (scheme.fractional) {
          Vec y = scheme.run_frac(r, rng);
          for (int e : r) into[e] = y[e];
        } else {
          ItemSet s = scheme.run_set(r, rng);
          for (int e : s) into[e] = 1.0;
        }
      };
      std::vector<double> ya(nn, 0.0), yb(nn, 0.0);
      retained(a, ya);
      retained(b, yb);
      for (int e : a) {
        double d = ya[e] - yb[e];
        dsum[e] += d;
        dsq[e] += d * d;
        asum[e] += ya[e];
        bsum[e] += yb[e];
      }
    }
    for (int e : a) {
      double md = dsum[e] / n;
      double var = std::max(0.0, dsq[e] / n - md * md);
      double slack = 3.0 * std::sqrt(var / n);
      if (md < -slack)
        out.push_back({c, e, asum[e] / n, bsum[e] / n, -md - slack});
    }
  }
  return out;
}

std::vector<MonotonicityViolation> test_monotonicity(const Scheme& scheme,
                                                     const FractionalPoint& x, int chain_count,
                                                     long long n, std::uint64_t seed) {
  ItemSet supp = support(x);
  if (supp.empty()) return {};
  std::vector<std::pair<ItemSet, ItemSet>> chains;
  RngStream master(seed, kChainStream);
  for (int c = 0; c < chain_count; ++c) {
    RngStream cs = master.derive(static_cast<std::uint64_t>(c));
    ItemSet b = random_subset(supp, 0.75, cs);
    if (b.empty()) b.push_back(supp[c % supp.size()]);
    ItemSet a = random_subset(b, 0.5, cs);
    if (a.size() == b.size() && !a.empty()) a.pop_back();
    chains.emplace_back(std::move(a), std::move(b));
  }
  return test_monotonicity_chains(scheme, chains, n, seed);
}

std::vector<HarnessRow> report_to_rows(const ExperimentConfig& cfg,
                                       const BalancednessReport& rep,
                                       const FractionalPoint& x) {
  std::vector<HarnessRow> rows;
  for (int e = 0; e < static_cast<int>(x.size()); ++e) {
    if (!(x[e] > 0.0)) continue;
    HarnessRow row;
    row.scheme = cfg.scheme;
    row.instance_id = cfg.instance_id.empty() ? cfg.instance_path : cfg.instance_id;
    row.element = e;
    row.n_samples = rep.n_samples;
    row.estimate = rep.estimate[e];
    row.stderr_est = rep.stderr_est[e];
    row.bound = cfg.bound;
    row.pass = rep.estimate[e] >= cfg.bound - cfg.tol_multiplier * rep.stderr_est[e];
    rows.push_back(row);
  }
  return rows;
}

std::string rows_to_csv(const std::vector<HarnessRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "scheme,instance_id,element,n_samples,estimate,stderr,bound,pass\n";
  for (const HarnessRow& r : rows)
    os << r.scheme << "," << r.instance_id << "," << r.element << "," << r.n_samples << ","
       << r.estimate << "," << r.stderr_est << "," << r.bound << "," << (r.pass ? 1 : 0)
       << "\n";
  return os.str();
}

std::vector<HarnessRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_samples < 1) fail_usage("run_experiment: n_samples must be >= 1");
  InstanceFile inst = load_instance(cfg.instance_path);
  FractionalPoint x;
  if (inst.x) {
    x = *inst.x;
  } else {
    fail_usage("run_experiment: instance has no fractional point");
  }
  Scheme scheme = make_scheme(cfg.scheme, inst, x);
  BalancednessReport rep =
      estimate_balancedness(scheme, x, cfg.n_samples, cfg.seed, cfg.threads);
  std::vector<HarnessRow> rows = report_to_rows(cfg, rep, x);
  std::string csv = rows_to_csv(rows);
  if (!cfg.out_csv.empty()) {
    std::ofstream f(cfg.out_csv, std::ios::binary);
    if (!f) fail_io("run_experiment: cannot open " + cfg.out_csv);
    f << csv;
    if (!f) fail_io("run_experiment: write failed for " + cfg.out_csv);
  }
  if (!cfg.out_json.empty()) {
    nlohmann::json j;
    j["config"] = {{"scheme", cfg.scheme},
                   {"instance_path", cfg.instance_path},
                   {"instance_id", cfg.instance_id},
                   {"n_samples", cfg.n_samples},
                   {"seed", cfg.seed},
                   {"bound", cfg.bound},
                   {"tol_multiplier", cfg.tol_multiplier}};
    j["min_estimate"] = rep.min_estimate;
    j["min_lower3"] = rep.min_lower3;
    auto& jr = j["rows"] = nlohmann::json::array();
    for (const HarnessRow& r : rows)
      jr.push_back({{"scheme", r.scheme},
                    {"instance_id", r.instance_id},
                    {"element", r.element},
                    {"n_samples", r.n_samples},
                    {"estimate", r.estimate},
                    {"stderr", r.stderr_est},
                    {"bound", r.bound},
                    {"pass", r.pass}});
    std::ofstream f(cfg.out_json, std::ios::binary);
    if (!f) fail_io("run_experiment: cannot open " + cfg.out_json);
    f << j.dump(2) << "\n";
    if (!f) fail_io("run_experiment: write failed for " + cfg.out_json);
  }
  return rows;
}

}  // namespace crsbench
