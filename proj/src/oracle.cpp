#include "sensemake/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "sensemake/inference.hpp"

namespace sensemake {
namespace oracle {

namespace {

struct JointLayout {
  std::size_t total = 1;
  std::vector<std::size_t> card;      // per variable
  std::vector<Factor> cpt_factors;    // one per variable
  std::vector<std::vector<std::size_t>> factor_pos;  // scope positions into digit array
};

JointLayout layout(const BayesNet& net) {
  JointLayout lay;
  lay.card.resize(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    lay.card[i] = net.cardinality(i);
    if (lay.total > kMaxJointSize / lay.card[i])
      throw Error(ErrorKind::TooLarge, "joint exceeds 2^22 assignments");
    lay.total *= lay.card[i];
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    lay.cpt_factors.push_back(Factor::from_cpt(net, i));
    lay.factor_pos.push_back(lay.cpt_factors.back().scope);
  }
  return lay;
}

void decode(std::size_t index, const std::vector<std::size_t>& card,
            std::vector<std::size_t>& digits) {
  for (std::size_t i = card.size(); i-- > 0;) {
    digits[i] = index % card[i];
    index /= card[i];
  }
}

double joint_prob(const JointLayout& lay, const BayesNet& net,
                  const std::vector<std::size_t>& digits) {
  double p = 1.0;
  for (std::size_t i = 0; i < lay.cpt_factors.size(); ++i) {
    const Factor& f = lay.cpt_factors[i];
    std::size_t idx = 0;
    for (std::size_t d = 0; d < f.scope.size(); ++d)
      idx = idx * net.cardinality(f.scope[d]) + digits[f.scope[d]];
    p *= f.values[idx];
  }
  return p;
}

struct QuerySetup {
  std::size_t query_var = 0;
  std::size_t query_card = 0;
  std::vector<std::pair<std::size_t, std::size_t>> fixed;  // (var, state)
};

QuerySetup setup(const BayesNet& net, const Evidence& evidence, const std::string& query) {
  QuerySetup qs;
  qs.query_var = net.index_of(query);
  qs.query_card = net.cardinality(qs.query_var);
  for (const auto& [var, state] : evidence)
    qs.fixed.emplace_back(net.index_of(var), net.state_index(var, state));
  return qs;
}

Distribution finish(const BayesNet& net, const Evidence& evidence, const std::string& query,
                    std::vector<double> sums) {
  double z = 0.0;
  for (double s : sums) z += s;
  if (z <= 0.0) throw Error(ErrorKind::ImpossibleEvidence, "evidence has probability 0");
  // Conditioning on the query itself yields the degenerate distribution by
  // construction: all off-state mass was excluded above.
  (void)evidence;
  Distribution dist;
  dist.variable = query;
  dist.states = net.variable(net.index_of(query)).states;
  dist.probs.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) dist.probs[i] = sums[i] / z;
  return dist;
}

std::vector<double> block_sums(const JointLayout& lay, const BayesNet& net, const QuerySetup& qs,
                               std::size_t begin, std::size_t end) {
  std::vector<double> sums(qs.query_card, 0.0);
  std::vector<std::size_t> digits(net.size());
  for (std::size_t idx = begin; idx < end; ++idx) {
    decode(idx, lay.card, digits);
    bool consistent = true;
    for (const auto& [var, state] : qs.fixed)
      if (digits[var] != state) {
        consistent = false;
        break;
      }
    if (!consistent) continue;
    sums[digits[qs.query_var]] += joint_prob(lay, net, digits);
  }
  return sums;
}

}  // namespace

Distribution enumerate_joint_serial(const BayesNet& net, const Evidence& evidence,
                                    const std::string& query) {
  JointLayout lay = layout(net);
  QuerySetup qs = setup(net, evidence, query);
  return finish(net, evidence, query, block_sums(lay, net, qs, 0, lay.total));
}

Distribution enumerate_joint(const BayesNet& net, const Evidence& evidence,
                             const std::string& query) {
  JointLayout lay = layout(net);
  QuerySetup qs = setup(net, evidence, query);

  // Fixed block decomposition: per-block partial sums reduced in block order,
  // so the result is identical for any thread count (including one).
  const std::size_t block = 4096;
  const std::size_t nblocks = (lay.total + block - 1) / block;
  std::vector<std::vector<double>> partials(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    std::size_t begin = static_cast<std::size_t>(b) * block;
    std::size_t end = std::min(begin + block, lay.total);
    partials[b] = block_sums(lay, net, qs, begin, end);
  }
  std::vector<double> sums(qs.query_card, 0.0);
  for (const auto& p : partials)
    for (std::size_t i = 0; i < p.size(); ++i) sums[i] += p[i];
  return finish(net, evidence, query, std::move(sums));
}

EnergyLandscape min_energy_states(const CamNetwork& cam) {
  std::vector<std::size_t> free_units;
  for (std::size_t i = 0; i < cam.size(); ++i)
    if (!cam.is_clamped(i)) free_units.push_back(i);
  if (free_units.size() > kMaxFreeUnits)
    throw Error(ErrorKind::TooLarge, "more than 20 free units");

  const std::size_t k = free_units.size();
  const std::size_t total = std::size_t{1} << k;
  const double on = cam.params().a_max;
  const double off = cam.params().rest;

  std::vector<double> base(cam.size(), off);
  for (std::size_t i = 0; i < cam.size(); ++i)
    if (auto v = cam.clamp_value(i)) base[i] = *v;

  auto config_energy = [&](std::size_t code, std::vector<double>& acts) {
    acts = base;
    for (std::size_t j = 0; j < k; ++j)
      acts[free_units[j]] = ((code >> (k - 1 - j)) & 1u) ? on : off;
    return cam.energy(acts);
  };

  // Pass 1: minimum over fixed blocks (parallel), reduced in block order.
  const std::size_t block = 4096;
  const std::size_t nblocks = (total + block - 1) / block;
  std::vector<double> block_min(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    std::size_t begin = static_cast<std::size_t>(b) * block;
    std::size_t end = std::min(begin + block, total);
    std::vector<double> acts;
    double best = config_energy(begin, acts);
    for (std::size_t c = begin + 1; c < end; ++c) best = std::min(best, config_energy(c, acts));
    block_min[b] = best;
  }
  EnergyLandscape landscape;
  landscape.min_energy = *std::min_element(block_min.begin(), block_min.end());

  // Pass 2: collect exact minimizers in lexicographic order.
  std::vector<double> acts;
  for (std::size_t c = 0; c < total; ++c)
    if (config_energy(c, acts) == landscape.min_energy) landscape.minimizers.push_back(acts);
  return landscape;
}

}  // namespace oracle
}  // namespace sensemake
