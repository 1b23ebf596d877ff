#include <cmath>

#include "doctest.h"
#include "sensemake/cam.hpp"
#include "sensemake/inference.hpp"
#include "sensemake/oracle.hpp"

using namespace sensemake;

namespace {

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

TEST_CASE("enumeration reproduces hand-computed values") {
  BayesNet net = chain_net();
  CHECK(oracle::enumerate_joint(net, {}, "Explosion").probs[0] ==
        doctest::Approx(0.65).epsilon(1e-12));
  CHECK(oracle::enumerate_joint(net, {}, "Injury").probs[0] ==
        doctest::Approx(0.725).epsilon(1e-12));
  CHECK(oracle::enumerate_joint(net, {{"Traffic_Accident", "1"}}, "Injury").probs[0] ==
        doctest::Approx(0.80).epsilon(1e-12));
}

TEST_CASE("enumeration and elimination agree") {
  BayesNet net = chain_net();
  for (const std::string& q : {"Traffic_Accident", "Explosion", "Injury"}) {
    Distribution ve = posterior(net, {{"Injury", "1"}}, q);
    Distribution brute = oracle::enumerate_joint(net, {{"Injury", "1"}}, q);
    for (std::size_t i = 0; i < ve.probs.size(); ++i)
      CHECK(std::fabs(ve.probs[i] - brute.probs[i]) < 1e-9);
  }
}

TEST_CASE("blocked enumeration equals the serial reference") {
  BayesNet net = chain_net();
  Distribution a = oracle::enumerate_joint_serial(net, {{"Explosion", "1"}}, "Injury");
  Distribution b = oracle::enumerate_joint(net, {{"Explosion", "1"}}, "Injury");
  for (std::size_t i = 0; i < a.probs.size(); ++i)
    CHECK(std::fabs(a.probs[i] - b.probs[i]) < 1e-12);
}

TEST_CASE("deterministic tables survive enumeration") {
  std::vector<Variable> vars = {{"A", {"1", "0"}}, {"B", {"1", "0"}}};
  Cpt a, b;
  a.child = "A";
  a.rows[{}] = {1.0, 0.0};
  b.child = "B";
  b.parents = {"A"};
  b.rows[{"1"}] = {1.0, 0.0};
  b.rows[{"0"}] = {0.0, 1.0};
  BayesNet net = build_network(vars, {a, b});
  CHECK(oracle::enumerate_joint(net, {}, "B").probs[0] == doctest::Approx(1.0));
  try {
    oracle::enumerate_joint(net, {{"B", "0"}}, "A");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ImpossibleEvidence);
  }
}

TEST_CASE("joint size guard") {
  // 23 binary variables exceed the 2^22 assignment cap.
  std::vector<Variable> vars;
  std::vector<Cpt> cpts;
  for (int i = 0; i < 23; ++i) {
    std::string name = "v" + std::to_string(100 + i);
    vars.push_back({name, {"1", "0"}});
    Cpt cpt;
    cpt.child = name;
    cpt.rows[{}] = {0.5, 0.5};
    cpts.push_back(std::move(cpt));
  }
  BayesNet net = build_network(vars, cpts);
  try {
    oracle::enumerate_joint(net, {}, "v100");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
    CHECK_FALSE(e.is_validation());
  }
}

TEST_CASE("free-unit guard on the energy oracle") {
  std::vector<MemorySpec> mems;
  for (int i = 0; i < 3; ++i)
    mems.push_back({"m" + std::to_string(i),
                    {"a" + std::to_string(6 * i), "a" + std::to_string(6 * i + 1),
                     "a" + std::to_string(6 * i + 2), "a" + std::to_string(6 * i + 3),
                     "a" + std::to_string(6 * i + 4), "a" + std::to_string(6 * i + 5)}});
  CamNetwork net = build_cam(mems, {});  // 3 + 18 = 21 free units
  try {
    oracle::min_energy_states(net);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
  // Clamping one unit brings it back under the cap.
  CHECK_NOTHROW(oracle::min_energy_states(net.clamp({{"m0", {true, 1.0}}})));
}

TEST_CASE("minimum-energy states of a two-unit excitatory pair") {
  CamNetwork net = build_cam({{"m", {"a"}}}, {}, {0.5, -0.5, false});
  // Candidates per unit: on=1.0 or rest=-0.1. Pairwise energies:
  //   both on: -0.5 + 0.05*2*1.21 = -0.379   <- minimum
  //   both rest: -0.005
  //   mixed: 0.05 + 0.05*1.21 = 0.1105
  oracle::EnergyLandscape land = oracle::min_energy_states(net);
  CHECK(land.min_energy == doctest::Approx(-0.379));
  REQUIRE(land.minimizers.size() == 1);
  CHECK(land.minimizers[0] == std::vector<double>{1.0, 1.0});
}

TEST_CASE("weak coupling leaves everything at rest") {
  CamNetwork net = build_cam({{"m", {"a"}}}, {}, {0.05, -0.05, false});
  oracle::EnergyLandscape land = oracle::min_energy_states(net);
  REQUIRE(land.minimizers.size() == 1);
  const double rest = net.params().rest;
  CHECK(land.minimizers[0] == std::vector<double>{rest, rest});
  // ...and relaxation agrees with the oracle's verdict.
  SettleResult r = net.settle();
  for (std::size_t i = 0; i < net.size(); ++i)
    CHECK((r.activations[i] >= 0.5) == (land.minimizers[0][i] >= 0.5));
}

TEST_CASE("clamped units are pinned in every minimizer") {
  CamNetwork net = build_cam({{"m1", {"a"}}, {"m2", {"b"}}}, {{"a", "b"}}, {0.5, -0.5, false});
  CamNetwork clamped = net.clamp({{"m1", {true, 1.0}}});
  oracle::EnergyLandscape land = oracle::min_energy_states(clamped);
  std::size_t m1 = clamped.index_of("m1");
  for (const auto& state : land.minimizers) CHECK(state[m1] == 1.0);
}

TEST_CASE("ties are reported in lexicographic configuration order") {
  // Two disconnected unit pairs with symmetric coupling produce symmetric
  // minimizers; the oracle must list them deterministically.
  CamNetwork net = build_cam({{"m1", {"a"}}, {"m2", {"b"}}}, {}, {0.5, -0.5, false});
  oracle::EnergyLandscape land = oracle::min_energy_states(net);
  CHECK(land.min_energy == doctest::Approx(2 * -0.379));
  REQUIRE(land.minimizers.size() == 1);  // both pairs on
  for (double a : land.minimizers[0]) CHECK(a == 1.0);
}
