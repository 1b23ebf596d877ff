#include "sensemake/inference.hpp"

#include <algorithm>
#include <set>

namespace sensemake {

namespace {

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& scope, const BayesNet& net) {
  std::vector<std::size_t> strides(scope.size());
  std::size_t s = 1;
  for (std::size_t i = scope.size(); i-- > 0;) {
    strides[i] = s;
    s *= net.cardinality(scope[i]);
  }
  return strides;
}

std::size_t table_size(const std::vector<std::size_t>& scope, const BayesNet& net) {
  std::size_t n = 1;
  for (auto v : scope) n *= net.cardinality(v);
  return n;
}

}  // namespace

Factor Factor::from_cpt(const BayesNet& net, std::size_t var) {
  const Cpt& cpt = net.cpt(var);
  Factor f;
  f.scope.push_back(var);
  for (const auto& p : cpt.parents) f.scope.push_back(net.index_of(p));
  std::sort(f.scope.begin(), f.scope.end());
  f.values.assign(table_size(f.scope, net), 0.0);
  auto strides = strides_for(f.scope, net);

  std::vector<std::size_t> parent_idx(cpt.parents.size());
  for (std::size_t i = 0; i < cpt.parents.size(); ++i)
    parent_idx[i] = net.index_of(cpt.parents[i]);

  for (const auto& [key, probs] : cpt.rows) {
    std::size_t base = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
      std::size_t pos =
          std::lower_bound(f.scope.begin(), f.scope.end(), parent_idx[i]) - f.scope.begin();
      base += strides[pos] * net.state_index(cpt.parents[i], key[i]);
    }
    std::size_t child_pos = std::lower_bound(f.scope.begin(), f.scope.end(), var) - f.scope.begin();
    for (std::size_t s = 0; s < probs.size(); ++s)
      f.values[base + strides[child_pos] * s] = probs[s];
  }
  return f;
}

Factor Factor::product(const Factor& other, const BayesNet& net) const {
  Factor out;
  std::set_union(scope.begin(), scope.end(), other.scope.begin(), other.scope.end(),
                 std::back_inserter(out.scope));
  out.values.assign(table_size(out.scope, net), 0.0);
  auto out_strides = strides_for(out.scope, net);
  auto a_strides = strides_for(scope, net);
  auto b_strides = strides_for(other.scope, net);

  // Per out-scope position, the stride into each operand (0 when absent).
  std::vector<std::size_t> a_map(out.scope.size(), 0), b_map(out.scope.size(), 0);
  for (std::size_t i = 0; i < out.scope.size(); ++i) {
    auto ait = std::lower_bound(scope.begin(), scope.end(), out.scope[i]);
    if (ait != scope.end() && *ait == out.scope[i]) a_map[i] = a_strides[ait - scope.begin()];
    auto bit = std::lower_bound(other.scope.begin(), other.scope.end(), out.scope[i]);
    if (bit != other.scope.end() && *bit == out.scope[i])
      b_map[i] = b_strides[bit - other.scope.begin()];
  }

  std::vector<std::size_t> assign(out.scope.size(), 0);
  std::size_t ai = 0, bi = 0;
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    out.values[idx] = values[ai] * other.values[bi];
    for (std::size_t d = out.scope.size(); d-- > 0;) {
      ++assign[d];
      ai += a_map[d];
      bi += b_map[d];
      if (assign[d] < net.cardinality(out.scope[d])) break;
      ai -= a_map[d] * assign[d];
      bi -= b_map[d] * assign[d];
      assign[d] = 0;
    }
  }
  return out;
}

Factor Factor::sum_out(std::size_t var, const BayesNet& net) const {
  Factor out;
  for (auto v : scope)
    if (v != var) out.scope.push_back(v);
  out.values.assign(table_size(out.scope, net), 0.0);
  std::size_t pos = std::lower_bound(scope.begin(), scope.end(), var) - scope.begin();

  std::vector<std::size_t> assign(scope.size(), 0);
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    std::size_t out_idx = 0, mult = 1;
    for (std::size_t d = scope.size(); d-- > 0;) {
      if (d == pos) continue;
      out_idx += assign[d] * mult;
      mult *= net.cardinality(scope[d]);
    }
    out.values[out_idx] += values[idx];
    for (std::size_t d = scope.size(); d-- > 0;) {
      if (++assign[d] < net.cardinality(scope[d])) break;
      assign[d] = 0;
    }
  }
  return out;
}

Factor Factor::reduce(std::size_t var, std::size_t state, const BayesNet& net) const {
  Factor out = *this;
  std::size_t pos = std::lower_bound(scope.begin(), scope.end(), var) - scope.begin();
  std::vector<std::size_t> assign(scope.size(), 0);
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    if (assign[pos] != state) out.values[idx] = 0.0;
    for (std::size_t d = scope.size(); d-- > 0;) {
      if (++assign[d] < net.cardinality(scope[d])) break;
      assign[d] = 0;
    }
  }
  return out;
}

std::vector<std::string> elimination_order(const BayesNet& net, const std::string& query,
                                           const Evidence& evidence) {
  net.index_of(query);
  net.check_evidence(evidence);

  // Interaction graph over the to-be-eliminated variables: factor scopes with
  // evidence variables dropped, plus the query as a permanent neighbor source.
  std::set<std::string> skip;
  skip.insert(query);
  for (const auto& [v, s] : evidence) skip.insert(v);

  std::map<std::string, std::set<std::string>> adj;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (!skip.count(net.variable(i).name)) adj[net.variable(i).name] = {};
  auto connect_clique = [&](const std::vector<std::string>& vars) {
    for (const auto& a : vars)
      for (const auto& b : vars)
        if (a != b && adj.count(a) && adj.count(b)) adj[a].insert(b);
  };
  for (std::size_t i = 0; i < net.size(); ++i) {
    std::vector<std::string> clique = net.cpt(i).parents;
    clique.push_back(net.variable(i).name);
    connect_clique(clique);
  }

  std::vector<std::string> order;
  while (!adj.empty()) {
    std::string best;
    std::size_t best_fill = 0;
    for (const auto& [v, nbrs] : adj) {  // map iteration is lexicographic, so ties pick the first
      std::size_t fill = 0;
      for (auto it = nbrs.begin(); it != nbrs.end(); ++it)
        for (auto jt = std::next(it); jt != nbrs.end(); ++jt)
          if (!adj.at(*it).count(*jt)) ++fill;
      if (best.empty() || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    const auto nbrs = adj.at(best);
    for (auto it = nbrs.begin(); it != nbrs.end(); ++it)
      for (auto jt = std::next(it); jt != nbrs.end(); ++jt) {
        adj[*it].insert(*jt);
        adj[*jt].insert(*it);
      }
    for (const auto& n : nbrs) adj[n].erase(best);
    adj.erase(best);
    order.push_back(best);
  }
  return order;
}

Distribution posterior(const BayesNet& net, const Evidence& evidence, const std::string& query) {
  return posterior(net, evidence, query, elimination_order(net, query, evidence));
}

Distribution posterior(const BayesNet& net, const Evidence& evidence, const std::string& query,
                       const std::vector<std::string>& order) {
  std::size_t q = net.index_of(query);
  net.check_evidence(evidence);

  std::vector<Factor> factors;
  for (std::size_t i = 0; i < net.size(); ++i) {
    Factor f = Factor::from_cpt(net, i);
    for (const auto& [var, state] : evidence) {
      std::size_t vi = net.index_of(var);
      if (std::binary_search(f.scope.begin(), f.scope.end(), vi))
        f = f.reduce(vi, net.state_index(var, state), net);
    }
    factors.push_back(std::move(f));
  }

  for (const auto& name : order) {
    std::size_t vi = net.index_of(name);
    if (vi == q || evidence.count(name)) continue;
    Factor merged;
    bool have = false;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (std::binary_search(f.scope.begin(), f.scope.end(), vi)) {
        merged = have ? merged.product(f, net) : std::move(f);
        have = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (have) rest.push_back(merged.sum_out(vi, net));
    factors = std::move(rest);
  }

  Factor result;
  bool have = false;
  for (auto& f : factors) {
    result = have ? result.product(f, net) : std::move(f);
    have = true;
  }
  // Sum out everything but the query (evidence variables still have
  // singleton support after reduction).
  for (std::size_t i = result.scope.size(); i-- > 0;)
    if (result.scope[i] != q) result = result.sum_out(result.scope[i], net);

  Distribution dist;
  dist.variable = query;
  dist.states = net.variable(q).states;
  double z = 0.0;
  for (double v : result.values) z += v;
  if (z <= 0.0) throw Error(ErrorKind::ImpossibleEvidence, "evidence has probability 0");
  dist.probs.resize(result.values.size());
  for (std::size_t i = 0; i < result.values.size(); ++i) dist.probs[i] = result.values[i] / z;
  return dist;
}

std::map<std::string, Distribution> prior_marginals(const BayesNet& net) {
  std::map<std::string, Distribution> out;
  for (const auto& v : net.variables()) out[v.name] = posterior(net, {}, v.name);
  return out;
}

}  // namespace sensemake
