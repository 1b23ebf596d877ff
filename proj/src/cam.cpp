#include "sensemake/cam.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <tuple>

namespace sensemake {

CamNetwork CamNetwork::build(const std::vector<MemorySpec>& memories,
                             const std::vector<std::pair<std::string, std::string>>& incompatible,
                             const WeightConfig& weights, const DynamicsParams& params) {
  if (!(params.a_min <= params.rest && params.rest <= params.a_max))
    throw Error(ErrorKind::SchemaViolation, "need a_min <= rest <= a_max");

  std::set<std::string> memory_names, attribute_names;
  for (const auto& mem : memories) {
    if (mem.name.empty()) throw Error(ErrorKind::DuplicateMemory, "empty memory name");
    if (!memory_names.insert(mem.name).second)
      throw Error(ErrorKind::DuplicateMemory, "memory '" + mem.name + "' declared twice");
    if (mem.attributes.empty())
      throw Error(ErrorKind::EmptyMemory, "memory '" + mem.name + "' has no attributes");
    for (const auto& attr : mem.attributes) attribute_names.insert(attr);
  }
  for (const auto& attr : attribute_names)
    if (memory_names.count(attr))
      throw Error(ErrorKind::DuplicateMemory, "'" + attr + "' is both a memory and an attribute");
  for (const auto& [a, b] : incompatible) {
    if (a == b)
      throw Error(ErrorKind::SelfIncompatibility, "'" + a + "' incompatible with itself");
    if (!attribute_names.count(a) || !attribute_names.count(b))
      throw Error(ErrorKind::UnknownUnit, "incompatible pair (" + a + ", " + b +
                                              ") names an unknown attribute");
  }

  CamNetwork net;
  net.params_ = params;
  for (const auto& n : memory_names) net.names_.push_back(n);
  for (const auto& n : attribute_names) net.names_.push_back(n);
  std::sort(net.names_.begin(), net.names_.end());
  net.kinds_.resize(net.names_.size());
  for (std::size_t i = 0; i < net.names_.size(); ++i)
    net.kinds_[i] = memory_names.count(net.names_[i]) ? UnitKind::Memory : UnitKind::Attribute;
  net.clamped_.assign(net.names_.size(), std::nullopt);
  net.external_.assign(net.names_.size(), 0.0);

  // One link per unordered pair; duplicate memberships/pairs collapse.
  std::map<std::pair<std::size_t, std::size_t>, double> link_map;
  for (const auto& mem : memories) {
    std::size_t mi = net.index_of(mem.name);
    std::vector<std::string> attrs(mem.attributes.begin(), mem.attributes.end());
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    for (const auto& attr : attrs) {
      std::size_t ai = net.index_of(attr);
      link_map[{std::min(mi, ai), std::max(mi, ai)}] = weights.excitatory;
    }
    net.memberships_.emplace_back(mem.name, std::move(attrs));
  }
  std::sort(net.memberships_.begin(), net.memberships_.end());
  for (const auto& [a, b] : incompatible) {
    std::size_t ai = net.index_of(a), bi = net.index_of(b);
    link_map[{std::min(ai, bi), std::max(ai, bi)}] = weights.inhibitory;
  }

  for (const auto& [pair, w] : link_map) net.links_.emplace_back(pair.first, pair.second, w);

  if (weights.scale_by_max_degree && !net.links_.empty()) {
    std::vector<std::size_t> degree(net.names_.size(), 0);
    for (const auto& [i, j, w] : net.links_) {
      ++degree[i];
      ++degree[j];
    }
    double scale = 1.0 / static_cast<double>(*std::max_element(degree.begin(), degree.end()));
    for (auto& link : net.links_) std::get<2>(link) *= scale;
  }

  net.neighbors_.assign(net.names_.size(), {});
  for (const auto& [i, j, w] : net.links_) {
    net.neighbors_[i].emplace_back(j, w);
    net.neighbors_[j].emplace_back(i, w);
  }
  return net;
}

CamNetwork build_cam(const std::vector<MemorySpec>& memories,
                     const std::vector<std::pair<std::string, std::string>>& incompatible,
                     const WeightConfig& weights, const DynamicsParams& params) {
  return CamNetwork::build(memories, incompatible, weights, params);
}

std::size_t CamNetwork::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) throw Error(ErrorKind::UnknownUnit, "'" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

CamNetwork CamNetwork::clamp(const Cue& cue) const {
  CamNetwork out = *this;
  for (const auto& [name, entry] : cue) {
    std::size_t i = out.index_of(name);
    if (entry.hard_clamp) {
      double v = std::clamp(entry.value, params_.a_min, params_.a_max);
      out.clamped_[i] = v;
    } else {
      out.external_[i] = entry.value;
    }
  }
  return out;
}

SettleResult CamNetwork::settle() const {
  const auto& p = params_;
  SettleResult result;
  result.activations.resize(size());
  for (std::size_t i = 0; i < size(); ++i)
    result.activations[i] = clamped_[i] ? *clamped_[i] : p.rest;
  auto& a = result.activations;

  for (std::size_t sweep = 0; sweep < p.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    // Asynchronous round-robin in name order; each update sees the latest
    // values. This order is semantics-bearing.
    for (std::size_t i = 0; i < size(); ++i) {
      if (clamped_[i]) continue;
      double net_input = external_[i];
      for (const auto& [j, w] : neighbors_[i]) net_input += w * a[j];
      double pos = std::max(net_input, 0.0);
      double neg = std::min(net_input, 0.0);
      double next = a[i] + p.epsilon * ((p.a_max - a[i]) * pos + (a[i] - p.a_min) * neg) -
                    p.epsilon * p.decay * (a[i] - p.rest);
      next = std::clamp(next, p.a_min, p.a_max);
      max_delta = std::max(max_delta, std::abs(next - a[i]));
      a[i] = next;
      assert(a[i] >= p.a_min && a[i] <= p.a_max);
    }
    result.energy_trace.push_back(energy(a));
    result.sweeps = sweep + 1;
    if (max_delta < p.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double CamNetwork::energy(const std::vector<double>& activations) const {
  double e = 0.0;
  for (const auto& [i, j, w] : links_) e -= w * activations[i] * activations[j];
  for (std::size_t i = 0; i < size(); ++i) {
    e -= external_[i] * activations[i];
    double d = activations[i] - params_.rest;
    e += 0.5 * params_.decay * d * d;
  }
  return e;
}

SynthesizedSign synthesize_sign(const CamNetwork& net, const SettleResult& result,
                                double theta_on) {
  if (!(theta_on > net.params().rest && theta_on <= net.params().a_max))
    throw Error(ErrorKind::SchemaViolation, "theta_on outside (rest, a_max]");
  SynthesizedSign sign;
  std::set<std::string> active;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (net.kind(i) == UnitKind::Attribute && result.activations[i] >= theta_on) {
      sign.active_attributes.push_back(net.unit_names()[i]);
      active.insert(net.unit_names()[i]);
    }
  for (const auto& [memory, attrs] : net.memberships())
    if (std::any_of(attrs.begin(), attrs.end(),
                    [&](const std::string& attr) { return active.count(attr) > 0; }))
      sign.contributing_memories.push_back(memory);
  sign.recombined = sign.contributing_memories.size() >= 2;
  return sign;
}

}  // namespace sensemake
