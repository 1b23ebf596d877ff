#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sensemake/errors.hpp"

namespace sensemake {

/// A finite discrete variable. States are ordered; by convention the first
/// state of a binary variable is the "true/present" one.
struct Variable {
  std::string name;
  std::vector<std::string> states;
};

/// Conditional probability table of one variable given its parents.
/// Rows are keyed by the parent-state tuple in the declared parent order;
/// std::map keeps them in lexicographic order for stable serialization.
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::map<std::vector<std::string>, std::vector<double>> rows;
};

/// A distribution over one variable, aligned with its state order.
struct Distribution {
  std::string variable;
  std::vector<std::string> states;
  std::vector<double> probs;

  double prob_of(const std::string& state) const;
};

using Evidence = std::map<std::string, std::string>;

constexpr double kRowSumTolerance = 1e-9;

/// Validated directed acyclic network. Variables are stored sorted by name;
/// immutable after construction.
class BayesNet {
 public:
  static BayesNet build(std::vector<Variable> variables, std::vector<Cpt> cpts);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t index_of(const std::string& name) const;
  const Variable& variable(std::size_t i) const { return variables_[i]; }
  const Cpt& cpt(std::size_t i) const { return cpts_[i]; }

  std::size_t cardinality(std::size_t i) const { return variables_[i].states.size(); }
  std::size_t state_index(const std::string& var, const std::string& state) const;

  /// Edges as (parent, child) name pairs, sorted.
  std::vector<std::pair<std::string, std::string>> edges() const;

  void check_evidence(const Evidence& evidence) const;

 private:
  BayesNet() = default;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;  // aligned with variables_
  std::map<std::string, std::size_t> index_;
};

BayesNet build_network(std::vector<Variable> variables, std::vector<Cpt> cpts);

}  // namespace sensemake
