#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crsbench/error.hpp"
#include "crsbench/gapcalc.hpp"
#include "crsbench/harness.hpp"
#include "crsbench/hypergraph_crs.hpp"
#include "crsbench/instances.hpp"
#include "crsbench/json_io.hpp"
#include "crsbench/kcspip_crs.hpp"
#include "crsbench/knapsack_crs.hpp"
#include "crsbench/selftest.hpp"
#include "crsbench/special.hpp"

namespace {

using namespace crsbench;

std::uint64_t resolve_seed(bool seed_set, std::uint64_t seed_flag) {
  if (seed_set) return seed_flag;
  if (const char* env = std::getenv("CRSBENCH_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      fail_usage("CRSBENCH_SEED is not a valid unsigned integer");
    }
  }
  return 42;
}

double parse_number(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos)
      return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    return std::stod(s);
  } catch (...) {
    fail_usage("cannot parse number: " + s);
  }
}

// "uniform:1/3" or "list:[0.1,0.2,...]"
Vec parse_point(const std::string& spec, int n) {
  if (spec.rfind("uniform:", 0) == 0) return Vec(n, parse_number(spec.substr(8)));
  if (spec.rfind("list:", 0) == 0) {
    nlohmann::json j = nlohmann::json::parse(spec.substr(5), nullptr, false);
    if (j.is_discarded() || !j.is_array()) fail_usage("bad list in point spec: " + spec);
    Vec v;
    for (const auto& e : j) v.push_back(e.get<double>());
    if (static_cast<int>(v.size()) != n) fail_usage("point length mismatch in: " + spec);
    return v;
  }
  fail_usage("point spec must start with uniform: or list:");
}

ItemSet parse_set(const std::string& spec) {
  std::string body = spec;
  if (body.rfind("list:", 0) == 0) body = body.substr(5);
  if (!body.empty() && body.front() == '[') {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_array()) fail_usage("bad set spec: " + spec);
    ItemSet s;
    for (const auto& e : j) s.push_back(e.get<int>());
    std::sort(s.begin(), s.end());
    return s;
  }
  ItemSet s;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) s.push_back(std::stoi(tok));
  std::sort(s.begin(), s.end());
  return s;
}

Vec point_for(const InstanceFile& inst, const std::string& x_spec) {
  if (!x_spec.empty()) return parse_point(x_spec, inst.ground_size());
  if (inst.x) return *inst.x;
  fail_usage("no fractional point: pass --x or store one in the instance JSON");
}

Vec values_for(const InstanceFile& inst, const std::string& v_spec) {
  if (!v_spec.empty()) return parse_point(v_spec, inst.ground_size());
  if (inst.v) return *inst.v;
  if (inst.type == "knapsack") return inst.knap->values;
  if (inst.type == "kcspip") return inst.kcs->values;
  return Vec(inst.ground_size(), 1.0);
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_io("cannot open " + path);
  f << text;
  if (!f) fail_io("write failed for " + path);
}

std::vector<int> parse_range(const std::string& spec) {
  auto dots = spec.find("..");
  std::vector<int> out;
  if (dots == std::string::npos) {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
  }
  int lo = std::stoi(spec.substr(0, dots)), hi = std::stoi(spec.substr(dots + 2));
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

int cmd_gen(const std::string& family, int p, int k, int n, int d, double eps,
            const std::string& variant, const std::string& out) {
  InstanceFile f;
  if (family == "fano" || family == "projective") {
    Hypergraph h = gen_projective_plane(family == "fano" ? 2 : p);
    f.type = "hypergraph";
    int ne = static_cast<int>(h.edges.size());
    f.hg = std::move(h);
    f.x = Vec(ne, 1.0 / f.hg->rank());
    f.v = Vec(ne, 1.0);
  } else if (family == "classk" || family == "classk-gap") {
    auto [inst, x] = family == "classk" ? gen_class_k_uniform(k, n, eps)
                                        : gen_class_k_gap(k, n, eps);
    f.type = "knapsack";
    f.knap = std::move(inst);
    f.x = x;
  } else if (family == "kcs-nat") {
    auto [inst, x] = gen_kcs_nat(k, eps);
    f.type = "kcspip";
    f.kcs = std::move(inst);
    f.x = x;
  } else if (family == "kcs-str") {
    auto [inst, x] = gen_kcs_str(k, eps);
    f.type = "kcspip";
    f.kcs = std::move(inst);
    f.x = x;
  } else if (family == "dknap") {
    auto [inst, x] = gen_dknapsack_example(d, eps);
    f.type = "kcspip";
    f.kcs = std::move(inst);
    f.x = x;
  } else if (family == "knap-tight") {
    KnapTightFamily which;
    if (variant == "small-4/9")
      which = KnapTightFamily::small_4_9;
    else if (variant == "gen-1/4")
      which = KnapTightFamily::gen_1_4;
    else if (variant == "small-bound-1/3")
      which = KnapTightFamily::small_bound_1_3;
    else
      fail_usage("knap-tight needs --variant small-4/9 | gen-1/4 | small-bound-1/3");
    auto [inst, x] = gen_knapsack_tight(which, eps);
    f.type = "knapsack";
    f.knap = std::move(inst);
    f.x = x;
  } else if (family == "circulant") {
    Digraph g = gen_circulant_tournament(d);
    nlohmann::json j{{"type", "digraph"}, {"n", g.n}, {"out", g.out}};
    write_or_print(j.dump(2) + "\n", out);
    return 0;
  } else {
    fail_usage("unknown family: " + family);
  }
  write_or_print(instance_to_json(f) + "\n", out);
  return 0;
}

int cmd_crs(const std::string& scheme_name, const std::string& instance_path,
            const std::string& x_spec, const std::string& r_spec, bool do_sample_r,
            std::uint64_t seed) {
  InstanceFile inst = load_instance(instance_path);
  Vec x = point_for(inst, x_spec);
  RngStream rng(seed, 0);
  ItemSet r;
  if (do_sample_r)
    r = sample_r(x, rng);
  else if (!r_spec.empty())
    r = parse_set(r_spec);
  else
    r = support(x);
  nlohmann::json j;
  j["scheme"] = scheme_name;
  j["r"] = r;
  if (scheme_name == "kcs" && inst.type == "kcspip") {
    KcsParams params = default_params(inst.kcs->k);
    KcsTrace tr = kcs_crs_trace(*inst.kcs, x, r, params, rng);
    j["stage_sizes"] = {{"r0", tr.r0.size()},
                       {"r1", tr.r1.size()},
                       {"r2", tr.r2.size()},
                       {"rf", tr.rf.size()}};
    j["set"] = tr.rf;
    j["feasible"] = kcs_feasible_set(*inst.kcs, tr.rf);
  } else {
    Scheme sch = make_scheme(scheme_name, inst, x);
    if (sch.fractional) {
      Vec y = sch.run_frac(r, rng);
      j["y"] = y;
      bool feas = inst.type == "hypergraph" ? hypergraph_feasible(*inst.hg, y, 1.0)
                                            : knapsack_feasible_fractional(*inst.knap, y);
      j["feasible"] = feas;
    } else {
      ItemSet s = sch.run_set(r, rng);
      j["set"] = s;
      bool feas = inst.type == "hypergraph" ? is_matching(*inst.hg, s)
                 : inst.type == "knapsack"  ? knapsack_feasible_set(*inst.knap, s)
                                            : kcs_feasible_set(*inst.kcs, s);
      j["feasible"] = feas;
    }
  }
  std::cout << j.dump(2) << "\n";
  std::cout << (j["feasible"].get<bool>() ? "feasible" : "INFEASIBLE") << "\n";
  return 0;
}

int cmd_balancedness(const std::string& scheme_name, const std::string& instance_path,
                     const std::string& x_spec, long long samples, std::uint64_t seed,
                     int threads, double bound, double tol, bool exact,
                     const std::string& out_csv, const std::string& out_json) {
  ExperimentConfig cfg;
  cfg.scheme = scheme_name;
  cfg.instance_path = instance_path;
  cfg.n_samples = samples;
  cfg.seed = seed;
  cfg.bound = bound;
  cfg.tol_multiplier = tol;
  cfg.threads = threads;
  InstanceFile inst = load_instance(instance_path);
  Vec x = point_for(inst, x_spec);
  Scheme sch = make_scheme(scheme_name, inst, x);
  BalancednessReport rep = exact ? exact_balancedness_deterministic(sch, x)
                                 : estimate_balancedness(sch, x, samples, seed, threads);
  std::vector<HarnessRow> rows = report_to_rows(cfg, rep, x);
  std::string csv = rows_to_csv(rows);
  std::cout << csv;
  if (!out_csv.empty()) write_or_print(csv, out_csv);
  if (!out_json.empty()) {
    nlohmann::json j;
    j["config"] = {{"scheme", cfg.scheme},       {"instance_path", cfg.instance_path},
                   {"n_samples", rep.n_samples}, {"seed", cfg.seed},
                   {"bound", cfg.bound},         {"tol_multiplier", cfg.tol_multiplier},
                   {"exact", exact}};
    j["min_estimate"] = rep.min_estimate;
    j["min_lower3"] = rep.min_lower3;
    write_or_print(j.dump(2) + "\n", out_json);
  }
  for (const HarnessRow& row : rows)
    if (!row.pass) fail_assert("balancedness bound violated at element " +
                               std::to_string(row.element));
  return 0;
}

int cmd_monotonicity(const std::string& scheme_name, const std::string& instance_path,
                     const std::string& x_spec, int chains, long long samples,
                     std::uint64_t seed) {
  InstanceFile inst = load_instance(instance_path);
  Vec x = point_for(inst, x_spec);
  Scheme sch = make_scheme(scheme_name, inst, x);
  auto viols = test_monotonicity(sch, x, chains, samples, seed);
  std::cout << "chains=" << chains << " samples_per_chain=" << samples
            << " violations=" << viols.size() << "\n";
  for (const auto& v : viols)
    std::cout << "violation chain=" << v.chain << " element=" << v.element
              << " est_small=" << v.est_a << " est_large=" << v.est_b << "\n";
  if (!viols.empty()) fail_assert("monotonicity violations found");
  std::cout << "monotone: no violations\n";
  return 0;
}

int cmd_cg(const std::string& instance_path, const std::string& x_spec,
           const std::string& v_spec) {
  InstanceFile inst = load_instance(instance_path);
  Vec x = point_for(inst, x_spec);
  Vec v = values_for(inst, v_spec);
  GapReport rep;
  if (inst.type == "hypergraph")
    rep = exact_cg(*inst.hg, v, x);
  else if (inst.type == "knapsack")
    rep = exact_cg(*inst.knap, v, x);
  else
    rep = exact_cg(*inst.kcs, v, x);
  nlohmann::json j{{"cg", rep.cg_value},
                   {"numerator", rep.numerator},
                   {"denominator", rep.denominator},
                   {"extension_case",
                    rep.extension_case == CgExtension::limit_one ? "limit_one" : "generic"}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_ig(const std::string& instance_path, const std::string& y_spec,
           const std::string& r_spec, const std::string& v_spec) {
  InstanceFile inst = load_instance(instance_path);
  Vec y = y_spec.empty() ? point_for(inst, "") : parse_point(y_spec, inst.ground_size());
  Vec v = values_for(inst, v_spec);
  ItemSet r = r_spec.empty() ? full_item_set(inst.ground_size()) : parse_set(r_spec);
  IgWitness w;
  if (inst.type == "hypergraph")
    w = ig_witness_ratio(*inst.hg, v, y, r);
  else if (inst.type == "knapsack")
    w = ig_witness_ratio(*inst.knap, v, y, r);
  else
    w = ig_witness_ratio(*inst.kcs, v, y, r);
  nlohmann::json j{{"ratio", w.ratio}, {"infinite", w.infinite}, {"r", w.r}, {"y", w.y}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_scan(const std::string& k_spec, const std::string& n_spec, double grid_step,
             const std::string& out) {
  std::vector<int> ks = parse_range(k_spec);
  std::vector<long long> ns;
  for (int n : parse_range(n_spec)) ns.push_back(n);
  if (ks.empty() || ns.empty()) fail_usage("scan: empty k or n list");
  int kmax = *std::max_element(ks.begin(), ks.end());
  std::vector<double> grid;
  for (double lam = grid_step; lam <= kmax + 1.0 + 1e-12; lam += grid_step) grid.push_back(lam);
  auto rows = conjecture_scan(ks, ns, grid);
  write_or_print(scan_to_csv(rows), out);
  return 0;
}

int cmd_selftest(std::uint64_t seed, int threads, const std::string& criteria) {
  std::vector<int> ids;
  if (!criteria.empty()) ids = parse_range(criteria);
  SelftestReport rep = run_selftest(seed, threads, std::cout, ids);
  if (!rep.all_pass) fail_assert("selftest failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(17);
  CLI::App app{"contention resolution scheme and correlation gap workbench"};
  app.require_subcommand(1);

  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  app.add_option_function<std::uint64_t>(
         "--seed",
         [&](std::uint64_t v) {
           seed_flag = v;
           seed_set = true;
         },
         "root seed (default: CRSBENCH_SEED env var, else 42)")
      ->expected(1);
  int threads = 1;
  app.add_option("--threads", threads, "parallel trial cap; output independent of it");

  std::string family, variant, out, instance_path, scheme_name, x_spec, v_spec, y_spec,
      r_spec, out_json, k_spec = "1..8", n_spec = "25,100,1000", criteria;
  int p = 2, k = 1, n = 2, d = 1, chains = 20;
  double eps = 0.01, bound = 0.0, tol = 3.0, grid_step = 0.25;
  long long samples = 100000;
  bool do_sample_r = false, exact = false;

  auto* gen = app.add_subcommand("gen", "generate an instance JSON");
  gen->add_option("--family", family,
                  "fano|projective|classk|classk-gap|kcs-nat|kcs-str|dknap|circulant|knap-tight")
      ->required();
  gen->add_option("--p", p, "plane order (projective)");
  gen->add_option("--k", k, "class / sparsity parameter");
  gen->add_option("--n", n, "item count");
  gen->add_option("--d", d, "dimension / tournament parameter");
  gen->add_option("--eps", eps, "perturbation epsilon");
  gen->add_option("--variant", variant, "knap-tight family: small-4/9|gen-1/4|small-bound-1/3");
  gen->add_option("--out", out, "output path (default stdout)");

  auto* crs = app.add_subcommand("crs", "run one scheme draw");
  crs->add_option("--scheme", scheme_name, "scheme name")->required();
  crs->add_option("--instance", instance_path, "instance JSON path")->required();
  crs->add_option("--x", x_spec, "fractional point (uniform:V or list:[...])");
  crs->add_option("--r", r_spec, "explicit sampled set, e.g. 0,2,5");
  crs->add_flag("--sample-r", do_sample_r, "sample R(x) from the seed");

  auto* bal = app.add_subcommand("balancedness", "estimate or enumerate balancedness");
  bal->add_option("--scheme", scheme_name, "scheme name")->required();
  bal->add_option("--instance", instance_path, "instance JSON path")->required();
  bal->add_option("--x", x_spec, "fractional point");
  bal->add_option("--samples", samples, "Monte Carlo trials");
  bal->add_option("--bound", bound, "claimed balancedness bound");
  bal->add_option("--tol", tol, "sigma multiplier for the pass column");
  bal->add_flag("--exact", exact, "exact enumeration (deterministic schemes, |supp|<=16)");
  bal->add_option("--out", out, "CSV output path");
  bal->add_option("--json", out_json, "JSON summary path");

  auto* mono = app.add_subcommand("monotonicity", "test scheme monotonicity");
  mono->add_option("--scheme", scheme_name, "scheme name")->required();
  mono->add_option("--instance", instance_path, "instance JSON path")->required();
  mono->add_option("--x", x_spec, "fractional point");
  mono->add_option("--chains", chains, "number of nested pairs");
  mono->add_option("--samples", samples, "trials per chain; 0 = exact (deterministic)");

  auto* cg = app.add_subcommand("cg", "exact correlation gap by enumeration");
  cg->add_option("--instance", instance_path, "instance JSON path")->required();
  cg->add_option("--x", x_spec, "fractional point");
  cg->add_option("--v", v_spec, "value vector");
  cg->add_flag("--exact", exact, "exact enumeration (the only mode; accepted for clarity)");

  auto* ig = app.add_subcommand("ig", "integrality-gap witness ratio");
  ig->add_option("--instance", instance_path, "instance JSON path")->required();
  ig->add_option("--y", y_spec, "fractional witness point (default: instance x)");
  ig->add_option("--r", r_spec, "ground subset (default: all)");
  ig->add_option("--v", v_spec, "value vector");

  auto* scan = app.add_subcommand("scan", "numerical conjecture scan (G vs F)");
  scan->add_option("--k", k_spec, "k values, e.g. 1..20 or 1,2,5");
  scan->add_option("--n", n_spec, "n values, e.g. 25,100,1000");
  scan->add_option("--grid-step", grid_step, "lambda grid step");
  scan->add_option("--out", out, "CSV output path");

  auto* st = app.add_subcommand("selftest", "run the acceptance criteria");
  st->add_option("--criteria", criteria, "subset, e.g. 1..3 or 5,7");

  // let --seed / --threads appear after the subcommand name
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
    std::uint64_t seed = resolve_seed(seed_set, seed_flag);
    if (threads < 1) fail_usage("--threads must be >= 1");
    if (gen->parsed())
      return cmd_gen(family, p, k, n, d, eps, variant, out);
    if (crs->parsed())
      return cmd_crs(scheme_name, instance_path, x_spec, r_spec, do_sample_r, seed);
    if (bal->parsed())
      return cmd_balancedness(scheme_name, instance_path, x_spec, samples, seed, threads,
                              bound, tol, exact, out, out_json);
    if (mono->parsed())
      return cmd_monotonicity(scheme_name, instance_path, x_spec, chains, samples, seed);
    if (cg->parsed()) return cmd_cg(instance_path, x_spec, v_spec);
    if (ig->parsed()) return cmd_ig(instance_path, y_spec, r_spec, v_spec);
    if (scan->parsed()) return cmd_scan(k_spec, n_spec, grid_step, out);
    if (st->parsed()) return cmd_selftest(seed, threads, criteria);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const crsbench::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case crsbench::Error::Kind::usage:
      case crsbench::Error::Kind::unsupported:
        return 2;
      case crsbench::Error::Kind::assertion:
        return 3;
      case crsbench::Error::Kind::io:
        return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
