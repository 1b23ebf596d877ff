#include "sensemake/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sensemake {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, where + ": " + what);
}

const json* maybe(const json& doc, const char* key) {
  auto it = doc.find(key);
  return it == doc.end() ? nullptr : &*it;
}

std::string require_string(const json& node, const char* key, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end() || !it->is_string()) schema_error(where, std::string("missing string '") + key + "'");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& node, const std::string& where) {
  if (!node.is_array()) schema_error(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) schema_error(where, "expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<Variable> parse_variables(const json& section) {
  std::vector<Variable> out;
  if (!section.is_array()) schema_error("variables", "expected an array");
  for (const auto& v : section) {
    Variable var;
    var.name = require_string(v, "name", "variables");
    var.states = string_list(v.at("states"), "variables." + var.name + ".states");
    out.push_back(std::move(var));
  }
  return out;
}

std::vector<Cpt> parse_cpts(const json& section) {
  std::vector<Cpt> out;
  if (!section.is_array()) schema_error("cpts", "expected an array");
  for (const auto& c : section) {
    Cpt cpt;
    cpt.child = require_string(c, "child", "cpts");
    const std::string where = "cpts." + cpt.child;
    if (const json* parents = maybe(c, "parents")) cpt.parents = string_list(*parents, where + ".parents");
    auto rows = maybe(c, "rows");
    if (!rows || !rows->is_array()) schema_error(where, "missing 'rows' array");
    for (const auto& row : *rows) {
      std::vector<std::string> given;
      if (const json* g = maybe(row, "given")) given = string_list(*g, where + ".rows.given");
      auto p = maybe(row, "p");
      if (!p || !p->is_array()) schema_error(where, "row missing 'p' array");
      std::vector<double> probs;
      for (const auto& x : *p) {
        if (!x.is_number()) schema_error(where, "row 'p' entries must be numbers");
        probs.push_back(x.get<double>());
      }
      if (!cpt.rows.emplace(std::move(given), std::move(probs)).second)
        schema_error(where, "duplicate row key");
    }
    out.push_back(std::move(cpt));
  }
  return out;
}

FrameGraph parse_frames(const json& frames, const json* relations) {
  FrameGraph graph;
  if (!frames.is_array()) schema_error("frames", "expected an array");
  for (const auto& f : frames) {
    Frame frame;
    frame.name = require_string(f, "name", "frames");
    frame.elements = string_list(f.at("elements"), "frames." + frame.name + ".elements");
    graph.frames.push_back(std::move(frame));
  }
  if (relations) {
    if (!relations->is_array()) schema_error("relations", "expected an array");
    for (const auto& r : *relations) {
      SignRelation rel;
      rel.source = require_string(r, "source", "relations");
      rel.target = require_string(r, "target", "relations");
      graph.relations.push_back(std::move(rel));
    }
  }
  return graph;
}

std::vector<MemorySpec> parse_memories(const json& section) {
  std::vector<MemorySpec> out;
  if (!section.is_array()) schema_error("memories", "expected an array");
  for (const auto& m : section) {
    MemorySpec mem;
    mem.name = require_string(m, "name", "memories");
    mem.attributes = string_list(m.at("attributes"), "memories." + mem.name + ".attributes");
    out.push_back(std::move(mem));
  }
  return out;
}

double number_or(const json& node, const char* key, double fallback, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) return fallback;
  if (!it->is_number()) schema_error(where, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

ScenarioDoc parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Malformed, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Malformed, "top level must be an object");

  static const std::set<std::string> known = {"variables", "cpts",   "frames",   "relations",
                                              "memories",  "incompatible", "bindings", "decision",
                                              "params",    "notes",  "fitted"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) schema_error(key, "unknown section");

  ScenarioDoc out;
  if (const json* notes = maybe(doc, "notes")) out.notes = notes->get<std::string>();
  if (const json* fitted = maybe(doc, "fitted")) out.fitted = string_list(*fitted, "fitted");

  // params first: dynamics and weights feed the memory network builder.
  if (const json* params = maybe(doc, "params")) {
    out.spec.loop.theta_on = number_or(*params, "theta_on", out.spec.loop.theta_on, "params");
    out.spec.loop.theta_off = number_or(*params, "theta_off", out.spec.loop.theta_off, "params");
    if (auto it = params->find("max_rounds"); it != params->end()) {
      if (!it->is_number_integer() || it->get<long long>() < 1)
        schema_error("params.max_rounds", "must be an integer >= 1");
      out.spec.loop.max_rounds = it->get<std::size_t>();
    }
    if (const json* dyn = maybe(*params, "dynamics")) {
      out.dynamics.a_max = number_or(*dyn, "a_max", out.dynamics.a_max, "params.dynamics");
      out.dynamics.a_min = number_or(*dyn, "a_min", out.dynamics.a_min, "params.dynamics");
      out.dynamics.rest = number_or(*dyn, "rest", out.dynamics.rest, "params.dynamics");
      out.dynamics.epsilon = number_or(*dyn, "epsilon", out.dynamics.epsilon, "params.dynamics");
      out.dynamics.decay = number_or(*dyn, "decay", out.dynamics.decay, "params.dynamics");
      out.dynamics.tol = number_or(*dyn, "tol", out.dynamics.tol, "params.dynamics");
      if (auto it = dyn->find("max_sweeps"); it != dyn->end())
        out.dynamics.max_sweeps = it->get<std::size_t>();
    }
    if (const json* w = maybe(*params, "weights")) {
      out.weights.excitatory = number_or(*w, "excitatory", out.weights.excitatory, "params.weights");
      out.weights.inhibitory = number_or(*w, "inhibitory", out.weights.inhibitory, "params.weights");
      if (auto it = w->find("scale_by_max_degree"); it != w->end())
        out.weights.scale_by_max_degree = it->get<bool>();
    }
  }

  const json* variables = maybe(doc, "variables");
  const json* cpts = maybe(doc, "cpts");
  const json* frames = maybe(doc, "frames");
  if (frames && variables)
    schema_error("variables", "give either 'frames' or 'variables', not both");
  if (cpts) out.cpts = parse_cpts(*cpts);

  if (frames) {
    out.frames = parse_frames(*frames, maybe(doc, "relations"));
    std::map<std::string, CptAssignment> assignments;
    for (const auto& cpt : out.cpts) assignments[cpt.child] = {cpt.parents, cpt.rows};
    CompiledNet compiled = compile_to_bn(*out.frames, assignments);
    out.spec.net = std::move(compiled.net);
    out.spec.edge_kinds = std::move(compiled.edge_kinds);
  } else if (variables) {
    out.variables = parse_variables(*variables);
    out.spec.net = build_network(out.variables, out.cpts);
  } else if (maybe(doc, "relations") || cpts) {
    schema_error("cpts", "cpts/relations given without 'variables' or 'frames'");
  }

  if (const json* memories = maybe(doc, "memories")) {
    out.memories = parse_memories(*memories);
    if (const json* inc = maybe(doc, "incompatible")) {
      if (!inc->is_array()) schema_error("incompatible", "expected an array of pairs");
      for (const auto& pair : *inc) {
        auto names = string_list(pair, "incompatible");
        if (names.size() != 2) schema_error("incompatible", "each entry must be a pair");
        out.incompatible.emplace_back(names[0], names[1]);
      }
    }
    out.spec.cam = build_cam(out.memories, out.incompatible, out.weights, out.dynamics);
  } else if (maybe(doc, "incompatible")) {
    schema_error("incompatible", "given without 'memories'");
  }

  if (const json* bindings = maybe(doc, "bindings")) {
    if (!bindings->is_array()) schema_error("bindings", "expected an array");
    if (!out.spec.cam) schema_error("bindings", "given without 'memories'");
    if (!out.spec.net) schema_error("bindings", "given without a network");
    std::set<std::string> bound_units;
    for (const auto& b : *bindings) {
      Binding binding;
      binding.unit = require_string(b, "unit", "bindings");
      binding.variable = require_string(b, "variable", "bindings");
      binding.state_if_on = require_string(b, "on", "bindings");
      binding.state_if_off = require_string(b, "off", "bindings");
      const std::string where = "bindings." + binding.unit;
      if (!bound_units.insert(binding.unit).second)
        schema_error(where, "unit bound twice");
      std::size_t unit;
      try {
        unit = out.spec.cam->index_of(binding.unit);
      } catch (const Error&) {
        throw Error(ErrorKind::UnknownReference, where + ": unknown unit");
      }
      if (out.spec.cam->kind(unit) != UnitKind::Attribute)
        schema_error(where, "only attribute units may be bound");
      if (!out.spec.net->has(binding.variable))
        throw Error(ErrorKind::UnknownReference, where + ": unknown variable '" + binding.variable + "'");
      out.spec.net->state_index(binding.variable, binding.state_if_on);
      out.spec.net->state_index(binding.variable, binding.state_if_off);
      out.spec.bindings.push_back(std::move(binding));
    }
  }

  if (const json* decision = maybe(doc, "decision")) {
    if (!out.spec.net) schema_error("decision", "given without a network");
    DecisionRule rule;
    rule.query = require_string(*decision, "query", "decision");
    rule.trigger_state = require_string(*decision, "trigger", "decision");
    rule.threshold = number_or(*decision, "threshold", 0.5, "decision");
    rule.action_if_high = require_string(*decision, "action_if_high", "decision");
    rule.action_if_low = require_string(*decision, "action_if_low", "decision");
    if (rule.threshold < 0.0 || rule.threshold > 1.0)
      schema_error("decision.threshold", "outside [0,1]");
    if (!out.spec.net->has(rule.query))
      throw Error(ErrorKind::UnknownReference, "decision.query: unknown variable '" + rule.query + "'");
    out.spec.net->state_index(rule.query, rule.trigger_state);
    out.spec.decision = std::move(rule);
  }

  if (!(out.spec.loop.theta_off < out.spec.loop.theta_on))
    schema_error("params", "need theta_off < theta_on");
  return out;
}

ScenarioDoc load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Malformed, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioDoc& doc) {
  json out(json::value_t::object);
  if (!doc.notes.empty()) out["notes"] = doc.notes;
  if (!doc.fitted.empty()) out["fitted"] = doc.fitted;

  auto emit_cpts = [&](const std::vector<Cpt>& cpts) {
    std::vector<Cpt> sorted = cpts;
    std::sort(sorted.begin(), sorted.end(),
              [](const Cpt& a, const Cpt& b) { return a.child < b.child; });
    json arr = json::array();
    for (const auto& cpt : sorted) {
      json rows = json::array();
      for (const auto& [given, probs] : cpt.rows)
        rows.push_back({{"given", given}, {"p", probs}});
      arr.push_back({{"child", cpt.child}, {"parents", cpt.parents}, {"rows", rows}});
    }
    return arr;
  };

  if (doc.frames) {
    std::vector<Frame> frames = doc.frames->frames;
    std::sort(frames.begin(), frames.end(),
              [](const Frame& a, const Frame& b) { return a.name < b.name; });
    json arr = json::array();
    for (auto& frame : frames) {
      std::sort(frame.elements.begin(), frame.elements.end());
      arr.push_back({{"name", frame.name}, {"elements", frame.elements}});
    }
    out["frames"] = arr;
    std::vector<std::pair<std::string, std::string>> rels;
    for (const auto& rel : doc.frames->relations) rels.emplace_back(rel.source, rel.target);
    std::sort(rels.begin(), rels.end());
    json rarr = json::array();
    for (const auto& [s, t] : rels) rarr.push_back({{"source", s}, {"target", t}});
    out["relations"] = rarr;
    out["cpts"] = emit_cpts(doc.cpts);
  } else if (!doc.variables.empty()) {
    std::vector<Variable> vars = doc.variables;
    std::sort(vars.begin(), vars.end(),
              [](const Variable& a, const Variable& b) { return a.name < b.name; });
    json arr = json::array();
    for (const auto& v : vars) arr.push_back({{"name", v.name}, {"states", v.states}});
    out["variables"] = arr;
    out["cpts"] = emit_cpts(doc.cpts);
  }

  if (!doc.memories.empty()) {
    std::vector<MemorySpec> memories = doc.memories;
    std::sort(memories.begin(), memories.end(),
              [](const MemorySpec& a, const MemorySpec& b) { return a.name < b.name; });
    json arr = json::array();
    for (auto& mem : memories) {
      std::sort(mem.attributes.begin(), mem.attributes.end());
      mem.attributes.erase(std::unique(mem.attributes.begin(), mem.attributes.end()),
                           mem.attributes.end());
      arr.push_back({{"name", mem.name}, {"attributes", mem.attributes}});
    }
    out["memories"] = arr;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto [a, b] : doc.incompatible) pairs.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    json parr = json::array();
    for (const auto& [a, b] : pairs) parr.push_back({a, b});
    out["incompatible"] = parr;
  }

  if (!doc.spec.bindings.empty()) {
    std::vector<Binding> bindings = doc.spec.bindings;
    std::sort(bindings.begin(), bindings.end(),
              [](const Binding& a, const Binding& b) { return a.unit < b.unit; });
    json arr = json::array();
    for (const auto& b : bindings)
      arr.push_back({{"unit", b.unit},
                     {"variable", b.variable},
                     {"on", b.state_if_on},
                     {"off", b.state_if_off}});
    out["bindings"] = arr;
  }

  if (doc.spec.decision) {
    const auto& rule = *doc.spec.decision;
    out["decision"] = {{"query", rule.query},
                       {"trigger", rule.trigger_state},
                       {"threshold", rule.threshold},
                       {"action_if_high", rule.action_if_high},
                       {"action_if_low", rule.action_if_low}};
  }

  out["params"] = {
      {"theta_on", doc.spec.loop.theta_on},
      {"theta_off", doc.spec.loop.theta_off},
      {"max_rounds", doc.spec.loop.max_rounds},
      {"dynamics",
       {{"a_max", doc.dynamics.a_max},
        {"a_min", doc.dynamics.a_min},
        {"rest", doc.dynamics.rest},
        {"epsilon", doc.dynamics.epsilon},
        {"decay", doc.dynamics.decay},
        {"tol", doc.dynamics.tol},
        {"max_sweeps", doc.dynamics.max_sweeps}}},
      {"weights",
       {{"excitatory", doc.weights.excitatory},
        {"inhibitory", doc.weights.inhibitory},
        {"scale_by_max_degree", doc.weights.scale_by_max_degree}}}};

  return out.dump(2) + "\n";
}

}  // namespace sensemake
