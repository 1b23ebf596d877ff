#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sensemake/errors.hpp"

namespace sensemake {

enum class UnitKind { Memory, Attribute };

struct DynamicsParams {
  double a_max = 1.0;
  double a_min = -0.2;
  double rest = -0.1;
  double epsilon = 0.1;
  double decay = 0.1;
  double tol = 1e-6;
  std::size_t max_sweeps = 10000;
};

struct WeightConfig {
  double excitatory = 1.0;
  double inhibitory = -1.0;
  bool scale_by_max_degree = true;
};

struct CueEntry {
  bool hard_clamp = false;
  double value = 0.0;  // clamp activation, or external input
};

using Cue = std::map<std::string, CueEntry>;

struct MemorySpec {
  std::string name;
  std::vector<std::string> attributes;
};

struct SettleResult {
  std::vector<double> activations;  // unit order of the network
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<double> energy_trace;  // one entry per sweep
};

struct SynthesizedSign {
  std::vector<std::string> active_attributes;     // activation >= theta_on
  std::vector<std::string> contributing_memories;  // memories linked to an active attribute
  bool recombined = false;                        // contributing memories >= 2
};

/// Memory/attribute units joined by symmetric excitatory (memory-attribute)
/// and inhibitory (incompatible attribute pair) links. Units are ordered
/// lexicographically by name; identically named attributes are one shared
/// unit. Topology is immutable; clamp() returns a modified copy.
class CamNetwork {
 public:
  static CamNetwork build(const std::vector<MemorySpec>& memories,
                          const std::vector<std::pair<std::string, std::string>>& incompatible,
                          const WeightConfig& weights = {}, const DynamicsParams& params = {});

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& unit_names() const { return names_; }
  std::size_t index_of(const std::string& name) const;
  UnitKind kind(std::size_t i) const { return kinds_[i]; }
  const DynamicsParams& params() const { return params_; }
  DynamicsParams& params() { return params_; }

  /// Unordered links as (i, j, weight) with i < j.
  const std::vector<std::tuple<std::size_t, std::size_t, double>>& links() const { return links_; }
  const std::vector<std::pair<std::string, std::vector<std::string>>>& memberships() const {
    return memberships_;
  }

  CamNetwork clamp(const Cue& cue) const;
  bool is_clamped(std::size_t i) const { return clamped_[i].has_value(); }
  std::optional<double> clamp_value(std::size_t i) const { return clamped_[i]; }
  double external_input(std::size_t i) const { return external_[i]; }

  SettleResult settle() const;

  /// E = -sum_links w*a_i*a_j - sum_i ext_i*a_i + (decay/2)*sum_i (a_i - rest)^2.
  /// Held fixed for regression; the exhaustive oracle evaluates the same form.
  double energy(const std::vector<double>& activations) const;

 private:
  std::vector<std::string> names_;
  std::vector<UnitKind> kinds_;
  std::vector<std::tuple<std::size_t, std::size_t, double>> links_;
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors_;
  std::vector<std::optional<double>> clamped_;
  std::vector<double> external_;
  std::vector<std::pair<std::string, std::vector<std::string>>> memberships_;  // memory -> attributes
  DynamicsParams params_;
};

CamNetwork build_cam(const std::vector<MemorySpec>& memories,
                     const std::vector<std::pair<std::string, std::string>>& incompatible,
                     const WeightConfig& weights = {}, const DynamicsParams& params = {});

SynthesizedSign synthesize_sign(const CamNetwork& net, const SettleResult& result, double theta_on);

}  // namespace sensemake
