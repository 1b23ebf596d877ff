#include "sensemake/frames.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "sensemake/inference.hpp"

namespace sensemake {

namespace {

// element -> frame name; enforces network-wide uniqueness
std::map<std::string, std::string> element_index(const FrameGraph& graph) {
  std::map<std::string, std::string> index;
  for (const auto& frame : graph.frames) {
    if (frame.elements.empty())
      throw Error(ErrorKind::SchemaViolation, "frame '" + frame.name + "' has no elements");
    for (const auto& el : frame.elements)
      if (!index.emplace(el, frame.name).second)
        throw Error(ErrorKind::UnknownElement,
                    "element '" + el + "' appears in more than one frame");
  }
  return index;
}

}  // namespace

FrameGraph classify_relations(FrameGraph graph) {
  auto index = element_index(graph);
  for (auto& rel : graph.relations) {
    if (!index.count(rel.source))
      throw Error(ErrorKind::UnknownElement, "relation source '" + rel.source + "'");
    if (!index.count(rel.target))
      throw Error(ErrorKind::UnknownElement, "relation target '" + rel.target + "'");
    if (rel.source == rel.target)
      throw Error(ErrorKind::SelfRelation, "'" + rel.source + "' related to itself");
    rel.kind =
        index[rel.source] == index[rel.target] ? RelationKind::Within : RelationKind::Across;
  }
  return graph;
}

CompiledNet compile_to_bn(const FrameGraph& graph,
                          const std::map<std::string, CptAssignment>& assignments) {
  FrameGraph labeled = classify_relations(graph);
  auto index = element_index(labeled);

  std::map<std::string, std::set<std::string>> incoming;
  for (const auto& [el, frame] : index) incoming[el] = {};
  for (const auto& rel : labeled.relations) incoming[rel.target].insert(rel.source);

  std::vector<Variable> variables;
  std::vector<Cpt> cpts;
  for (const auto& [el, frame] : index) {
    auto it = assignments.find(el);
    if (it == assignments.end())
      throw Error(ErrorKind::MissingCptAssignment, "no cpt for element '" + el + "'");
    const CptAssignment& assign = it->second;
    std::set<std::string> declared(assign.parents.begin(), assign.parents.end());
    if (declared != incoming[el] || declared.size() != assign.parents.size())
      throw Error(ErrorKind::ParentMismatch,
                  "cpt parents for '" + el + "' do not match its incoming relations");
    variables.push_back({el, {"1", "0"}});
    cpts.push_back({el, assign.parents, assign.rows});
  }

  CompiledNet out{build_network(std::move(variables), std::move(cpts)), {}};
  for (const auto& rel : labeled.relations) out.edge_kinds[{rel.source, rel.target}] = rel.kind;
  return out;
}

DenotationReport interpret_sign(const CompiledNet& compiled, const Evidence& sign_evidence,
                                const std::vector<std::string>& targets, double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw Error(ErrorKind::SchemaViolation, "threshold outside [0,1]");
  DenotationReport report;
  report.threshold = threshold;

  // Forward adjacency for chain readout.
  std::map<std::string, std::vector<std::string>> next;
  for (const auto& [edge, kind] : compiled.edge_kinds) next[edge.first].push_back(edge.second);

  for (const auto& target : targets) {
    Denotation d;
    d.element = target;
    d.posterior = posterior(compiled.net, sign_evidence, target);
    d.flagged = d.posterior.probs[0] >= threshold;

    // Shortest relation path from any instantiated sign; BFS over sources in
    // lexicographic order so the reported chain is deterministic.
    std::map<std::string, std::string> parent;
    std::deque<std::string> queue;
    for (const auto& [var, state] : sign_evidence) {
      parent.emplace(var, "");
      queue.push_back(var);
    }
    while (!queue.empty()) {
      std::string u = queue.front();
      queue.pop_front();
      if (u == target) break;
      for (const auto& v : next[u])
        if (parent.emplace(v, u).second) queue.push_back(v);
    }
    if (parent.count(target) && !sign_evidence.count(target)) {
      for (std::string v = target; !v.empty(); v = parent[v]) d.chain.push_back(v);
      std::reverse(d.chain.begin(), d.chain.end());
    }
    report.denotations.push_back(std::move(d));
  }
  return report;
}

}  // namespace sensemake
