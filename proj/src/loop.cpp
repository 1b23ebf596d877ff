#include "sensemake/loop.hpp"

#include <algorithm>
#include <set>

#include "sensemake/inference.hpp"

namespace sensemake {

Evidence extract_evidence(const CamNetwork& net, const SettleResult& result,
                          const std::vector<Binding>& bindings, double theta_on,
                          double theta_off) {
  if (!(theta_off < theta_on))
    throw Error(ErrorKind::SchemaViolation, "need theta_off < theta_on");
  Evidence evidence;
  for (const auto& binding : bindings) {
    std::size_t i = net.index_of(binding.unit);
    double a = result.activations[i];
    std::string state;
    if (a >= theta_on)
      state = binding.state_if_on;
    else if (a <= theta_off)
      state = binding.state_if_off;
    else
      continue;
    auto [it, inserted] = evidence.emplace(binding.variable, state);
    if (!inserted && it->second != state)
      throw Error(ErrorKind::ConflictingEvidence,
                  "variable '" + binding.variable + "' bound to both '" + it->second + "' and '" +
                      state + "'");
  }
  return evidence;
}

std::string decide(const Distribution& posterior, const DecisionRule& rule) {
  if (posterior.variable != rule.query)
    throw Error(ErrorKind::VariableMismatch, "posterior is over '" + posterior.variable +
                                                 "', rule queries '" + rule.query + "'");
  // Tie goes to the protective action.
  return posterior.prob_of(rule.trigger_state) >= rule.threshold ? rule.action_if_high
                                                                 : rule.action_if_low;
}

SensemakingDecision run_sensemaking(const ScenarioSpec& scenario,
                                    const std::vector<std::string>& cue_units) {
  if (!scenario.net) throw Error(ErrorKind::SchemaViolation, "scenario has no network");
  if (!scenario.decision) throw Error(ErrorKind::SchemaViolation, "scenario has no decision rule");
  if (scenario.loop.max_rounds < 1)
    throw Error(ErrorKind::SchemaViolation, "max_rounds must be >= 1");
  const BayesNet& net = *scenario.net;
  const DecisionRule& rule = *scenario.decision;

  SensemakingDecision decision;
  Evidence applied;

  // No memory network: the loop degenerates to plain inference on the net.
  if (!scenario.cam) {
    RoundTrace round;
    round.round = 1;
    round.posterior = posterior(net, applied, rule.query);
    decision.final_posterior = round.posterior;
    decision.trace.push_back(std::move(round));
    decision.rounds = 1;
    decision.fixpoint = true;
    decision.action = decide(decision.final_posterior, rule);
    return decision;
  }

  Cue cue;
  for (const auto& unit : cue_units)
    cue[unit] = CueEntry{true, scenario.cam->params().a_max};
  CamNetwork clamped = scenario.cam->clamp(cue);

  decision.final_posterior = posterior(net, applied, rule.query);  // initial inference

  for (std::size_t r = 1; r <= scenario.loop.max_rounds; ++r) {
    RoundTrace round;
    round.round = r;

    SettleResult settled = clamped.settle();
    round.sweeps = settled.sweeps;
    round.converged = settled.converged;
    round.sign = synthesize_sign(clamped, settled, scenario.loop.theta_on);
    round.extracted = extract_evidence(clamped, settled, scenario.bindings, scenario.loop.theta_on,
                                       scenario.loop.theta_off);

    bool fixpoint = round.extracted == applied;
    // Earlier evidence persists; a later round may only contradict it by
    // raising ConflictingEvidence, never by silent retraction.
    for (const auto& [var, state] : round.extracted) {
      auto [it, inserted] = applied.emplace(var, state);
      if (!inserted && it->second != state)
        throw Error(ErrorKind::ConflictingEvidence,
                    "round " + std::to_string(r) + " re-binds '" + var + "' to '" + state + "'");
    }
    round.applied = applied;
    round.posterior = posterior(net, applied, rule.query);
    decision.final_posterior = round.posterior;
    decision.trace.push_back(std::move(round));
    decision.rounds = r;
    if (fixpoint) {
      decision.fixpoint = true;
      break;
    }
  }
  decision.action = decide(decision.final_posterior, rule);
  return decision;
}

}  // namespace sensemake
