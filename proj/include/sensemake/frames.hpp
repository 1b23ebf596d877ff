#pragma once

#include <map>
#include <string>
#include <vector>

#include "sensemake/bayesnet.hpp"

namespace sensemake {

struct Frame {
  std::string name;
  std::vector<std::string> elements;
};

enum class RelationKind { Unclassified, Within, Across };

/// Directed denotation link between two elements (sign -> denoted).
struct SignRelation {
  std::string source;  // element name; unique across frames
  std::string target;
  RelationKind kind = RelationKind::Unclassified;
};

struct FrameGraph {
  std::vector<Frame> frames;
  std::vector<SignRelation> relations;
};

/// Bayes net compiled from a frame graph; edge kinds are reporting metadata
/// only and never influence inference.
struct CompiledNet {
  BayesNet net;
  std::map<std::pair<std::string, std::string>, RelationKind> edge_kinds;
};

struct Denotation {
  std::string element;
  Distribution posterior;
  bool flagged = false;
  std::vector<std::string> chain;  // relation path from an instantiated sign, if any
};

struct DenotationReport {
  double threshold = 0.5;
  std::vector<Denotation> denotations;
};

/// CPT rows for one element; parents are derived from incoming relations but
/// the declared order here fixes the row-key order.
struct CptAssignment {
  std::vector<std::string> parents;
  std::map<std::vector<std::string>, std::vector<double>> rows;
};

/// Label every relation within/across. Throws on unresolved endpoints or
/// self-relations.
FrameGraph classify_relations(FrameGraph graph);

CompiledNet compile_to_bn(const FrameGraph& graph,
                          const std::map<std::string, CptAssignment>& assignments);

DenotationReport interpret_sign(const CompiledNet& compiled, const Evidence& sign_evidence,
                                const std::vector<std::string>& targets, double threshold = 0.5);

}  // namespace sensemake
