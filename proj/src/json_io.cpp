#include "crsbench/json_io.hpp"

#include <fstream>
#include <sstream>

#include "crsbench/error.hpp"
#include "json.hpp"

namespace crsbench {

using nlohmann::json;

int InstanceFile::ground_size() const {
  if (hg) return static_cast<int>(hg->edges.size());
  if (knap) return knap->n();
  if (kcs) return kcs->n;
  return 0;
}

std::string instance_to_json(const InstanceFile& f) {
  json j;
  j["type"] = f.type;
  if (f.type == "hypergraph") {
    if (!f.hg) fail_usage("instance_to_json: hypergraph payload missing");
    j["num_vertices"] = f.hg->num_vertices;
    j["edges"] = f.hg->edges;
    if (f.hg->weights) j["weights"] = *f.hg->weights;
  } else if (f.type == "knapsack") {
    if (!f.knap) fail_usage("instance_to_json: knapsack payload missing");
    j["sizes"] = f.knap->sizes;
    j["values"] = f.knap->values;
  } else if (f.type == "kcspip") {
    if (!f.kcs) fail_usage("instance_to_json: kcspip payload missing");
    j["m"] = f.kcs->m;
    j["n"] = f.kcs->n;
    j["k"] = f.kcs->k;
    json cols = json::array();
    for (const auto& col : f.kcs->columns) {
      json c = json::array();
      for (auto [i, a] : col) c.push_back(json::array({i, a}));
      cols.push_back(c);
    }
    j["columns"] = cols;
    j["values"] = f.kcs->values;
  } else {
    fail_usage("instance_to_json: unknown type '" + f.type + "'");
  }
  if (f.x) j["x"] = *f.x;
  if (f.v) j["v"] = *f.v;
  return j.dump(2);
}

InstanceFile instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail_io(std::string("instance JSON parse error: ") + e.what());
  }
  InstanceFile f;
  try {
    f.type = j.at("type").get<std::string>();
    if (f.type == "hypergraph") {
      Hypergraph h;
      h.num_vertices = j.at("num_vertices").get<int>();
      h.edges = j.at("edges").get<std::vector<ItemSet>>();
      if (j.contains("weights")) h.weights = j["weights"].get<Vec>();
      h.finalize();
      f.hg = std::move(h);
    } else if (f.type == "knapsack") {
      KnapsackInstance k;
      k.sizes = j.at("sizes").get<Vec>();
      k.values = j.at("values").get<Vec>();
      k.validate();
      f.knap = std::move(k);
    } else if (f.type == "kcspip") {
      KcsInstance k;
      k.m = j.at("m").get<int>();
      k.n = j.at("n").get<int>();
      k.k = j.at("k").get<int>();
      for (const auto& col : j.at("columns")) {
        std::vector<std::pair<int, double>> c;
        for (const auto& entry : col)
          c.emplace_back(entry.at(0).get<int>(), entry.at(1).get<double>());
        k.columns.push_back(std::move(c));
      }
      k.values = j.at("values").get<Vec>();
      k.finalize();
      f.kcs = std::move(k);
    } else {
      fail_io("instance JSON: unknown type '" + f.type + "'");
    }
    if (j.contains("x")) f.x = j["x"].get<Vec>();
    if (j.contains("v")) f.v = j["v"].get<Vec>();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail_io(std::string("instance JSON field error: ") + e.what());
  }
  return f;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void save_instance(const InstanceFile& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("cannot write instance file: " + path);
  out << instance_to_json(f) << "\n";
  if (!out) fail_io("write failed: " + path);
}

}  // namespace crsbench
