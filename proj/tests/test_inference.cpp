#include <algorithm>

#include "doctest.h"
#include "sensemake/inference.hpp"
#include "sensemake/oracle.hpp"

using namespace sensemake;

namespace {

// Accident -> Explosion -> Injury chain used across the suite.
BayesNet chain_net() {
  std::vector<Variable> vars = {{"Traffic_Accident", {"1", "0"}},
                                {"Explosion", {"1", "0"}},
                                {"Injury", {"1", "0"}}};
  Cpt ta, e, i;
  ta.child = "Traffic_Accident";
  ta.rows[{}] = {0.7, 0.3};
  e.child = "Explosion";
  e.parents = {"Traffic_Accident"};
  e.rows[{"1"}] = {0.8, 0.2};
  e.rows[{"0"}] = {0.3, 0.7};
  i.child = "Injury";
  i.parents = {"Explosion"};
  i.rows[{"1"}] = {0.9, 0.1};
  i.rows[{"0"}] = {0.4, 0.6};
  return build_network(vars, {ta, e, i});
}

}  // namespace

TEST_CASE("chain marginals and conditionals") {
  BayesNet net = chain_net();
  // P(E=1) = 0.7*0.8 + 0.3*0.3 = 0.65; P(I=1) = 0.65*0.9 + 0.35*0.4 = 0.725
  CHECK(posterior(net, {}, "Explosion").probs[0] == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(posterior(net, {}, "Injury").probs[0] == doctest::Approx(0.725).epsilon(1e-12));
  CHECK(posterior(net, {{"Traffic_Accident", "1"}}, "Injury").probs[0] ==
        doctest::Approx(0.80).epsilon(1e-12));
  CHECK(posterior(net, {{"Traffic_Accident", "1"}, {"Explosion", "0"}}, "Injury").probs[0] ==
        doctest::Approx(0.40).epsilon(1e-12));
}

TEST_CASE("diagnostic reasoning runs against the arrows") {
  BayesNet net = chain_net();
  // P(TA=1|I=1) = P(I=1|TA=1)P(TA=1)/P(I=1) = 0.80*0.7/0.725
  CHECK(posterior(net, {{"Injury", "1"}}, "Traffic_Accident").probs[0] ==
        doctest::Approx(0.8 * 0.7 / 0.725).epsilon(1e-12));
}

TEST_CASE("query in evidence yields a degenerate distribution") {
  BayesNet net = chain_net();
  Distribution d = posterior(net, {{"Explosion", "0"}}, "Explosion");
  CHECK(d.probs[0] == doctest::Approx(0.0));
  CHECK(d.probs[1] == doctest::Approx(1.0));
}

TEST_CASE("impossible evidence throws") {
  std::vector<Variable> vars = {{"A", {"1", "0"}}, {"B", {"1", "0"}}};
  Cpt a, b;
  a.child = "A";
  a.rows[{}] = {1.0, 0.0};
  b.child = "B";
  b.parents = {"A"};
  b.rows[{"1"}] = {1.0, 0.0};
  b.rows[{"0"}] = {0.0, 1.0};
  BayesNet net = build_network(vars, {a, b});
  try {
    posterior(net, {{"B", "0"}}, "A");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ImpossibleEvidence);
    CHECK_FALSE(e.is_validation());
  }
}

TEST_CASE("elimination order excludes query and evidence") {
  BayesNet net = chain_net();
  auto order = elimination_order(net, "Injury", {{"Traffic_Accident", "1"}});
  REQUIRE(order.size() == 1);
  CHECK(order[0] == "Explosion");
  auto full = elimination_order(net, "Injury", {});
  CHECK(full.size() == 2);
  CHECK(std::find(full.begin(), full.end(), "Injury") == full.end());
}

TEST_CASE("result is independent of a legal elimination order") {
  BayesNet net = chain_net();
  for (const std::string& query : {"Traffic_Accident", "Explosion", "Injury"}) {
    Distribution a = posterior(net, {{"Injury", "1"}}, query);
    // Reverse-lexicographic order instead of min-fill.
    std::vector<std::string> order;
    for (const auto& v : net.variables()) order.push_back(v.name);
    std::sort(order.rbegin(), order.rend());
    Distribution b = posterior(net, {{"Injury", "1"}}, query, order);
    for (std::size_t i = 0; i < a.probs.size(); ++i)
      CHECK(a.probs[i] == doctest::Approx(b.probs[i]).epsilon(1e-9));
  }
}

TEST_CASE("prior marginals cover every variable") {
  BayesNet net = chain_net();
  auto marginals = prior_marginals(net);
  CHECK(marginals.size() == 3);
  CHECK(marginals.at("Explosion").probs[0] == doctest::Approx(0.65));
  for (const auto& [name, dist] : marginals) {
    double z = 0.0;
    for (double p : dist.probs) z += p;
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("factor product distributes over shared scope") {
  BayesNet net = chain_net();
  Factor fe = Factor::from_cpt(net, net.index_of("Explosion"));
  Factor fi = Factor::from_cpt(net, net.index_of("Injury"));
  Factor prod = fe.product(fi, net);
  CHECK(prod.scope.size() == 3);
  Factor summed = prod.sum_out(net.index_of("Injury"), net);
  // Summing the injury CPT back out must recover the explosion factor.
  REQUIRE(summed.values.size() == fe.values.size());
  for (std::size_t i = 0; i < fe.values.size(); ++i)
    CHECK(summed.values[i] == doctest::Approx(fe.values[i]).epsilon(1e-12));
}

TEST_CASE("ternary variables work end to end") {
  std::vector<Variable> vars = {{"Sky", {"clear", "cloudy", "storm"}}, {"Wet", {"1", "0"}}};
  Cpt sky, wet;
  sky.child = "Sky";
  sky.rows[{}] = {0.5, 0.3, 0.2};
  wet.child = "Wet";
  wet.parents = {"Sky"};
  wet.rows[{"clear"}] = {0.01, 0.99};
  wet.rows[{"cloudy"}] = {0.3, 0.7};
  wet.rows[{"storm"}] = {0.95, 0.05};
  BayesNet net = build_network(vars, {sky, wet});
  Distribution d = posterior(net, {}, "Wet");
  CHECK(d.probs[0] == doctest::Approx(0.5 * 0.01 + 0.3 * 0.3 + 0.2 * 0.95).epsilon(1e-12));
  Distribution s = posterior(net, {{"Wet", "1"}}, "Sky");
  CHECK(s.states.size() == 3);
  CHECK(s.prob_of("storm") > s.prob_of("clear"));
}
