#include "sensemake/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sensemake {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::MissingCpt: return "MissingCpt";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::UnknownParent: return "UnknownParent";
    case ErrorKind::RowNotNormalized: return "RowNotNormalized";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::ImpossibleEvidence: return "ImpossibleEvidence";
    case ErrorKind::UnknownElement: return "UnknownElement";
    case ErrorKind::SelfRelation: return "SelfRelation";
    case ErrorKind::MissingCptAssignment: return "MissingCptAssignment";
    case ErrorKind::ParentMismatch: return "ParentMismatch";
    case ErrorKind::DuplicateMemory: return "DuplicateMemory";
    case ErrorKind::SelfIncompatibility: return "SelfIncompatibility";
    case ErrorKind::EmptyMemory: return "EmptyMemory";
    case ErrorKind::UnknownUnit: return "UnknownUnit";
    case ErrorKind::ConflictingEvidence: return "ConflictingEvidence";
    case ErrorKind::VariableMismatch: return "VariableMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::UnknownReference: return "UnknownReference";
  }
  return "Error";
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

void validate_cpt(const Variable& var, const Cpt& cpt,
                  const std::map<std::string, std::size_t>& index,
                  const std::vector<Variable>& variables) {
  std::set<std::string> seen_parents;
  std::size_t combos = 1;
  std::vector<const Variable*> parent_vars;
  for (const auto& p : cpt.parents) {
    auto it = index.find(p);
    if (it == index.end())
      throw Error(ErrorKind::UnknownParent, "variable '" + cpt.child + "' names unknown parent '" + p + "'");
    if (!seen_parents.insert(p).second)
      throw Error(ErrorKind::UnknownParent, "variable '" + cpt.child + "' repeats parent '" + p + "'");
    parent_vars.push_back(&variables[it->second]);
    combos *= variables[it->second].states.size();
  }
  if (cpt.rows.size() != combos) {
    std::ostringstream msg;
    msg << "cpt for '" << cpt.child << "' has " << cpt.rows.size() << " rows, expected " << combos;
    throw Error(ErrorKind::RowNotNormalized, msg.str());
  }
  for (const auto& [key, probs] : cpt.rows) {
    if (key.size() != cpt.parents.size())
      throw Error(ErrorKind::RowNotNormalized,
                  "cpt row key arity mismatch for '" + cpt.child + "' row [" + join(key) + "]");
    for (std::size_t i = 0; i < key.size(); ++i) {
      const auto& states = parent_vars[i]->states;
      if (std::find(states.begin(), states.end(), key[i]) == states.end())
        throw Error(ErrorKind::UnknownState,
                    "cpt row for '" + cpt.child + "' uses unknown state '" + key[i] +
                        "' of parent '" + cpt.parents[i] + "'");
    }
    if (probs.size() != var.states.size())
      throw Error(ErrorKind::RowNotNormalized,
                  "cpt row for '" + cpt.child + "' row [" + join(key) + "] has wrong length");
    double sum = 0.0;
    for (double p : probs) {
      if (p < 0.0 || p > 1.0 || !std::isfinite(p))
        throw Error(ErrorKind::RowNotNormalized,
                    "cpt entry out of [0,1] for '" + cpt.child + "' row [" + join(key) + "]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg << "cpt row for '" << cpt.child << "' row [" << join(key) << "] sums to " << sum;
      throw Error(ErrorKind::RowNotNormalized, msg.str());
    }
  }
}

}  // namespace

BayesNet BayesNet::build(std::vector<Variable> variables, std::vector<Cpt> cpts) {
  BayesNet net;
  std::sort(variables.begin(), variables.end(),
            [](const Variable& a, const Variable& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& v = variables[i];
    if (v.name.empty()) throw Error(ErrorKind::DuplicateVariable, "empty variable name");
    if (!net.index_.emplace(v.name, i).second)
      throw Error(ErrorKind::DuplicateVariable, "variable '" + v.name + "' declared twice");
    if (v.states.empty())
      throw Error(ErrorKind::UnknownState, "variable '" + v.name + "' has no states");
    std::set<std::string> labels(v.states.begin(), v.states.end());
    if (labels.size() != v.states.size())
      throw Error(ErrorKind::UnknownState, "variable '" + v.name + "' repeats a state label");
  }
  net.variables_ = std::move(variables);

  net.cpts_.resize(net.variables_.size());
  std::vector<bool> have(net.variables_.size(), false);
  for (auto& cpt : cpts) {
    auto it = net.index_.find(cpt.child);
    if (it == net.index_.end())
      throw Error(ErrorKind::UnknownVariable, "cpt for undeclared variable '" + cpt.child + "'");
    if (have[it->second])
      throw Error(ErrorKind::MissingCpt, "variable '" + cpt.child + "' has two cpts");
    have[it->second] = true;
    validate_cpt(net.variables_[it->second], cpt, net.index_, net.variables_);
    net.cpts_[it->second] = std::move(cpt);
  }
  for (std::size_t i = 0; i < have.size(); ++i)
    if (!have[i])
      throw Error(ErrorKind::MissingCpt, "variable '" + net.variables_[i].name + "' has no cpt");

  // Kahn's algorithm over the derived edge relation.
  std::vector<std::size_t> indeg(net.size(), 0);
  std::vector<std::vector<std::size_t>> children(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    indeg[i] = net.cpts_[i].parents.size();
    for (const auto& p : net.cpts_[i].parents) children[net.index_.at(p)].push_back(i);
  }
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (indeg[i] == 0) queue.push_back(i);
  std::size_t popped = 0;
  while (popped < queue.size()) {
    std::size_t u = queue[popped++];
    for (std::size_t c : children[u])
      if (--indeg[c] == 0) queue.push_back(c);
  }
  if (popped != net.size()) {
    std::vector<std::string> cyc;
    for (std::size_t i = 0; i < net.size(); ++i)
      if (indeg[i] > 0) cyc.push_back(net.variables_[i].name);
    throw Error(ErrorKind::CycleDetected, "cycle through {" + join(cyc) + "}");
  }
  return net;
}

BayesNet build_network(std::vector<Variable> variables, std::vector<Cpt> cpts) {
  if (variables.empty()) throw Error(ErrorKind::DuplicateVariable, "no variables given");
  return BayesNet::build(std::move(variables), std::move(cpts));
}

double Distribution::prob_of(const std::string& state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end())
    throw Error(ErrorKind::UnknownState, "'" + state + "' is not a state of '" + variable + "'");
  return probs[static_cast<std::size_t>(it - states.begin())];
}

std::size_t BayesNet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(ErrorKind::UnknownVariable, "'" + name + "'");
  return it->second;
}

std::size_t BayesNet::state_index(const std::string& var, const std::string& state) const {
  const auto& states = variables_[index_of(var)].states;
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end())
    throw Error(ErrorKind::UnknownState, "'" + state + "' is not a state of '" + var + "'");
  return static_cast<std::size_t>(it - states.begin());
}

std::vector<std::pair<std::string, std::string>> BayesNet::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& cpt : cpts_)
    for (const auto& p : cpt.parents) out.emplace_back(p, cpt.child);
  std::sort(out.begin(), out.end());
  return out;
}

void BayesNet::check_evidence(const Evidence& evidence) const {
  for (const auto& [var, state] : evidence) state_index(var, state);
}

}  // namespace sensemake
