#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sensemake/cam.hpp"
#include "sensemake/frames.hpp"
#include "sensemake/loop.hpp"

namespace sensemake {

/// A parsed scenario file: the validated spec plus the declarative sections
/// needed to re-emit the document in canonical form.
struct ScenarioDoc {
  ScenarioSpec spec;

  // raw declarative sections
  std::optional<FrameGraph> frames;
  std::vector<Variable> variables;  // empty when the net comes from frames
  std::vector<Cpt> cpts;
  std::vector<MemorySpec> memories;
  std::vector<std::pair<std::string, std::string>> incompatible;
  WeightConfig weights;
  DynamicsParams dynamics;
  std::string notes;
  std::vector<std::string> fitted;  // CPT cells fitted to quoted marginals
};

/// Parse and validate a scenario document. Diagnostics name the section and
/// cause. Throws Malformed / SchemaViolation / UnknownReference plus any
/// construction error from the underlying builders.
ScenarioDoc parse_scenario(const std::string& text);

ScenarioDoc load_scenario(const std::string& path);

/// Canonical emission: sorted keys, sorted section entries, LF endings.
/// serialize(parse(serialize(parse(x)))) == serialize(parse(x)).
std::string serialize_scenario(const ScenarioDoc& doc);

}  // namespace sensemake
