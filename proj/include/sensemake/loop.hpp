#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sensemake/bayesnet.hpp"
#include "sensemake/cam.hpp"
#include "sensemake/frames.hpp"

namespace sensemake {

/// Maps one attribute unit onto a network variable state pair.
struct Binding {
  std::string unit;
  std::string variable;
  std::string state_if_on;
  std::string state_if_off;
};

struct DecisionRule {
  std::string query;
  std::string trigger_state;
  double threshold = 0.5;
  std::string action_if_high;
  std::string action_if_low;
};

struct LoopParams {
  double theta_on = 0.5;
  double theta_off = 0.0;
  std::size_t max_rounds = 5;
};

/// A validated scenario: network, optional memory network, bindings,
/// decision rule, and loop parameters.
struct ScenarioSpec {
  std::optional<BayesNet> net;
  std::map<std::pair<std::string, std::string>, RelationKind> edge_kinds;  // when frame-compiled
  std::optional<CamNetwork> cam;
  std::vector<Binding> bindings;
  std::optional<DecisionRule> decision;
  LoopParams loop;
};

struct RoundTrace {
  std::size_t round = 0;
  std::size_t sweeps = 0;
  bool converged = false;
  SynthesizedSign sign;
  Evidence extracted;
  Evidence applied;  // cumulative evidence in effect for this round's inference
  Distribution posterior;
};

struct SensemakingDecision {
  std::string action;
  Distribution final_posterior;
  std::vector<RoundTrace> trace;
  std::size_t rounds = 0;
  bool fixpoint = false;
};

/// Threshold settled activations into hard evidence. Units at or above
/// theta_on emit their on-state, at or below theta_off their off-state, the
/// dead zone in between emits nothing. Unbound units are ignored.
Evidence extract_evidence(const CamNetwork& net, const SettleResult& result,
                          const std::vector<Binding>& bindings, double theta_on, double theta_off);

std::string decide(const Distribution& posterior, const DecisionRule& rule);

/// Run the full loop: initial inference, settle on the cue, extract and apply
/// evidence, final inference, decide; repeat until the extracted evidence
/// reaches a fixpoint or max_rounds.
SensemakingDecision run_sensemaking(const ScenarioSpec& scenario,
                                    const std::vector<std::string>& cue_units);

}  // namespace sensemake
