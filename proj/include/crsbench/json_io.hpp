#ifndef CRSBENCH_JSON_IO_HPP
#define CRSBENCH_JSON_IO_HPP

#include <optional>
#include <string>

#include "crsbench/instances.hpp"

namespace crsbench {

// On-disk instance container. Exactly one of hg/knap/kcs is populated,
// matching `type` in {"hypergraph","knapsack","kcspip"}. All indices 0-based.
struct InstanceFile {
  std::string type;
  std::optional<Hypergraph> hg;
  std::optional<KnapsackInstance> knap;
  std::optional<KcsInstance> kcs;
  std::optional<FractionalPoint> x;
  std::optional<Vec> v;

  int ground_size() const;
};

InstanceFile load_instance(const std::string& path);
void save_instance(const InstanceFile& f, const std::string& path);

std::string instance_to_json(const InstanceFile& f);
InstanceFile instance_from_json(const std::string& text);

}  // namespace crsbench

#endif
