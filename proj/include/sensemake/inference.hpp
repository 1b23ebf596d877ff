#pragma once

#include <map>
#include <string>
#include <vector>

#include "sensemake/bayesnet.hpp"

namespace sensemake {

/// Dense table over a sorted scope of variable indices; the last scope
/// variable varies fastest. Variable-elimination workspace, exposed so the
/// oracle and property tests can share it.
struct Factor {
  std::vector<std::size_t> scope;  // ascending variable indices
  std::vector<double> values;

  static Factor from_cpt(const BayesNet& net, std::size_t var);
  Factor product(const Factor& other, const BayesNet& net) const;
  Factor sum_out(std::size_t var, const BayesNet& net) const;
  /// Zero out all entries inconsistent with var=state (keeps the scope).
  Factor reduce(std::size_t var, std::size_t state, const BayesNet& net) const;
};

/// Min-fill elimination order over all non-query, non-evidence variables.
/// Ties break lexicographically by variable name.
std::vector<std::string> elimination_order(const BayesNet& net, const std::string& query,
                                           const Evidence& evidence);

/// Exact P(query | evidence) by variable elimination, renormalized.
/// Throws ImpossibleEvidence when the evidence has probability zero.
Distribution posterior(const BayesNet& net, const Evidence& evidence, const std::string& query);

/// Same, with a caller-supplied elimination order (must cover exactly the
/// non-query, non-evidence variables).
Distribution posterior(const BayesNet& net, const Evidence& evidence, const std::string& query,
                       const std::vector<std::string>& order);

std::map<std::string, Distribution> prior_marginals(const BayesNet& net);

}  // namespace sensemake
