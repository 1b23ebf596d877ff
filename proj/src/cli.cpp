#include "sensemake/cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "sensemake/inference.hpp"
#include "sensemake/loop.hpp"
#include "sensemake/oracle.hpp"
#include "sensemake/scenario.hpp"

namespace sensemake {

namespace {

using nlohmann::json;

std::string fixed9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", x);
  return buf;
}

Evidence parse_evidence(const std::vector<std::string>& pairs) {
  Evidence evidence;
  for (const auto& pair : pairs) {
    auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size())
      throw Error(ErrorKind::Malformed, "evidence must be VAR=STATE, got '" + pair + "'");
    evidence[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return evidence;
}

json distribution_json(const Distribution& dist) {
  json probs(json::value_t::object);
  for (std::size_t i = 0; i < dist.states.size(); ++i)
    probs[dist.states[i]] = fixed9(dist.probs[i]);
  return {{"variable", dist.variable}, {"probs", probs}};
}

void print_distribution(std::ostream& out, const Distribution& dist) {
  for (std::size_t i = 0; i < dist.states.size(); ++i)
    out << "P(" << dist.variable << "=" << dist.states[i] << ")=" << fixed9(dist.probs[i]) << "\n";
}

struct Options {
  std::string file;
  std::vector<std::string> evidence;
  std::string query;
  std::vector<std::string> clamps;
  std::vector<std::string> externals;
  std::vector<std::string> cues;
  std::optional<double> tol;
  std::optional<std::size_t> max_sweeps;
  std::optional<std::size_t> max_rounds;
  bool as_json = false;
  bool check = false;
  unsigned seed = 0;  // reserved; kept so scripts can pass it uniformly
};

Cue parse_cue(const Options& opt, const DynamicsParams& params) {
  Cue cue;
  for (const auto& spec : opt.clamps) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
      cue[spec] = CueEntry{true, params.a_max};
    else
      cue[spec.substr(0, eq)] = CueEntry{true, std::stod(spec.substr(eq + 1))};
  }
  for (const auto& spec : opt.externals) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::Malformed, "external input must be UNIT=VALUE, got '" + spec + "'");
    cue[spec.substr(0, eq)] = CueEntry{false, std::stod(spec.substr(eq + 1))};
  }
  return cue;
}

void apply_overrides(ScenarioDoc& doc, const Options& opt) {
  if (!doc.spec.cam) return;
  DynamicsParams& params = doc.spec.cam->params();
  if (opt.tol) params.tol = *opt.tol;
  if (opt.max_sweeps) params.max_sweeps = *opt.max_sweeps;
  if (opt.max_rounds) doc.spec.loop.max_rounds = *opt.max_rounds;
}

int cmd_validate(const Options& opt, std::ostream& out) {
  ScenarioDoc doc = load_scenario(opt.file);
  if (opt.as_json) {
    out << serialize_scenario(doc);
    return 0;
  }
  out << "ok";
  if (doc.spec.net) out << " net=" << doc.spec.net->size() << " vars";
  if (doc.spec.cam) out << " cam=" << doc.spec.cam->size() << " units";
  out << " bindings=" << doc.spec.bindings.size() << "\n";
  return 0;
}

int cmd_infer(const Options& opt, std::ostream& out) {
  ScenarioDoc doc = load_scenario(opt.file);
  if (!doc.spec.net) throw Error(ErrorKind::SchemaViolation, "scenario has no network");
  Evidence evidence = parse_evidence(opt.evidence);
  Distribution dist = posterior(*doc.spec.net, evidence, opt.query);
  if (opt.as_json)
    out << json{{"posterior", distribution_json(dist)}}.dump(2) << "\n";
  else
    print_distribution(out, dist);
  return 0;
}

int cmd_settle(const Options& opt, std::ostream& out) {
  ScenarioDoc doc = load_scenario(opt.file);
  apply_overrides(doc, opt);
  if (!doc.spec.cam) throw Error(ErrorKind::SchemaViolation, "scenario has no memory network");
  CamNetwork net = doc.spec.cam->clamp(parse_cue(opt, doc.spec.cam->params()));
  SettleResult result = net.settle();
  SynthesizedSign sign = synthesize_sign(net, result, doc.spec.loop.theta_on);
  if (opt.as_json) {
    json acts(json::value_t::object);
    for (std::size_t i = 0; i < net.size(); ++i)
      acts[net.unit_names()[i]] = fixed9(result.activations[i]);
    out << json{{"activations", acts},
                {"converged", result.converged},
                {"sweeps", result.sweeps},
                {"energy", fixed9(net.energy(result.activations))},
                {"sign",
                 {{"active_attributes", sign.active_attributes},
                  {"contributing_memories", sign.contributing_memories},
                  {"recombined", sign.recombined}}}}
               .dump(2)
        << "\n";
    return 0;
  }
  out << "converged=" << (result.converged ? "yes" : "no") << " sweeps=" << result.sweeps
      << " energy=" << fixed9(net.energy(result.activations)) << "\n";
  for (std::size_t i = 0; i < net.size(); ++i)
    out << net.unit_names()[i] << " " << fixed9(result.activations[i]) << "\n";
  out << "recombined=" << (sign.recombined ? "yes" : "no") << "\n";
  return 0;
}

int cmd_sensemake(const Options& opt, std::ostream& out) {
  ScenarioDoc doc = load_scenario(opt.file);
  apply_overrides(doc, opt);
  SensemakingDecision decision = run_sensemaking(doc.spec, opt.cues);
  if (opt.as_json) {
    json rounds = json::array();
    for (const auto& round : decision.trace) {
      json extracted(json::value_t::object);
      for (const auto& [var, state] : round.extracted) extracted[var] = state;
      rounds.push_back({{"round", round.round},
                        {"sweeps", round.sweeps},
                        {"converged", round.converged},
                        {"extracted", extracted},
                        {"recombined", round.sign.recombined},
                        {"posterior", distribution_json(round.posterior)}});
    }
    out << json{{"action", decision.action},
                {"rounds", decision.rounds},
                {"fixpoint", decision.fixpoint},
                {"trace", rounds},
                {"posterior", distribution_json(decision.final_posterior)}}
               .dump(2)
        << "\n";
    return 0;
  }
  for (const auto& round : decision.trace) {
    out << "round " << round.round << ": sweeps=" << round.sweeps << " evidence={";
    bool first = true;
    for (const auto& [var, state] : round.extracted) {
      if (!first) out << ", ";
      out << var << "=" << state;
      first = false;
    }
    out << "}\n";
  }
  print_distribution(out, decision.final_posterior);
  out << "action=" << decision.action << " rounds=" << decision.rounds
      << " fixpoint=" << (decision.fixpoint ? "yes" : "no") << "\n";
  return 0;
}

int cmd_oracle(const Options& opt, std::ostream& out) {
  ScenarioDoc doc = load_scenario(opt.file);
  apply_overrides(doc, opt);
  bool all_ok = true;

  if (doc.spec.net && !opt.query.empty()) {
    Evidence evidence = parse_evidence(opt.evidence);
    Distribution ve = posterior(*doc.spec.net, evidence, opt.query);
    Distribution brute = oracle::enumerate_joint(*doc.spec.net, evidence, opt.query);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < ve.probs.size(); ++i)
      max_diff = std::max(max_diff, std::fabs(ve.probs[i] - brute.probs[i]));
    bool ok = max_diff < 1e-9;
    all_ok = all_ok && ok;
    out << "inference " << (ok ? "agree" : "DISAGREE") << " max_diff=" << max_diff << "\n";
  }

  if (doc.spec.cam) {
    CamNetwork net = doc.spec.cam->clamp(parse_cue(opt, doc.spec.cam->params()));
    SettleResult result = net.settle();
    oracle::EnergyLandscape landscape = oracle::min_energy_states(net);
    // Compare the thresholded attribute pattern, not raw activations: the
    // oracle enumerates on/off configurations only.
    auto pattern = [&](const std::vector<double>& acts) {
      std::vector<bool> bits;
      for (std::size_t i = 0; i < net.size(); ++i)
        if (net.kind(i) == UnitKind::Attribute)
          bits.push_back(acts[i] >= doc.spec.loop.theta_on);
      return bits;
    };
    auto settled = pattern(result.activations);
    bool ok = false;
    for (const auto& minimizer : landscape.minimizers)
      if (pattern(minimizer) == settled) ok = true;
    all_ok = all_ok && ok;
    out << "settle " << (ok ? "agree" : "DISAGREE") << " min_energy=" << fixed9(landscape.min_energy)
        << " minimizers=" << landscape.minimizers.size() << "\n";
  }

  if (opt.check && !all_ok) throw Error(ErrorKind::ImpossibleEvidence, "oracle disagreement");
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"deterministic sensemaking engine"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "scenario file")->required();
    sub->add_flag("--json", opt.as_json, "machine-readable output");
    return sub;
  };

  auto* validate = add_common(app.add_subcommand("validate", "check a scenario file"));
  (void)validate;

  auto* infer = add_common(app.add_subcommand("infer", "posterior for one variable"));
  infer->add_option("--query", opt.query, "query variable")->required();
  infer->add_option("--evidence", opt.evidence, "VAR=STATE evidence, repeatable");

  auto* settle = add_common(app.add_subcommand("settle", "relax the memory network"));
  settle->add_option("--clamp", opt.clamps, "UNIT[=VALUE] hard clamp, repeatable");
  settle->add_option("--ext", opt.externals, "UNIT=VALUE external input, repeatable");
  settle->add_option("--tol", opt.tol, "convergence tolerance");
  settle->add_option("--max-sweeps", opt.max_sweeps, "sweep limit");

  auto* sense = add_common(app.add_subcommand("sensemake", "run the full loop"));
  sense->add_option("--cue", opt.cues, "cue unit, repeatable");
  sense->add_option("--tol", opt.tol, "convergence tolerance");
  sense->add_option("--max-sweeps", opt.max_sweeps, "sweep limit");
  sense->add_option("--max-rounds", opt.max_rounds, "loop round limit");

  auto* orc = add_common(app.add_subcommand("oracle", "cross-check against brute force"));
  orc->add_option("--query", opt.query, "query variable for the inference check");
  orc->add_option("--evidence", opt.evidence, "VAR=STATE evidence, repeatable");
  orc->add_option("--clamp", opt.clamps, "UNIT[=VALUE] hard clamp, repeatable");
  orc->add_flag("--check", opt.check, "nonzero exit on disagreement");

  app.add_option("--seed", opt.seed, "reserved")->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand("validate")) return cmd_validate(opt, out);
    if (app.got_subcommand("infer")) return cmd_infer(opt, out);
    if (app.got_subcommand("settle")) return cmd_settle(opt, out);
    if (app.got_subcommand("sensemake")) return cmd_sensemake(opt, out);
    return cmd_oracle(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sensemake
