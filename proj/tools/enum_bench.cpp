// Benchmark the blocked (OpenMP) joint enumeration against the serial
// reference on a random chain-with-skips network, and confirm they agree.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sensemake/bayesnet.hpp"
#include "sensemake/oracle.hpp"

using namespace sensemake;

namespace {

BayesNet random_net(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::vector<Variable> variables;
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < n; ++i) {
    char name[8];
    std::snprintf(name, sizeof(name), "v%02zu", i);
    variables.push_back({name, {"1", "0"}});
    Cpt cpt;
    cpt.child = name;
    if (i > 0) cpt.parents.push_back(variables[i - 1].name);
    if (i > 2 && i % 3 == 0) cpt.parents.push_back(variables[i - 3].name);
    std::vector<std::vector<std::string>> keys{{}};
    for (std::size_t p = 0; p < cpt.parents.size(); ++p) {
      std::vector<std::vector<std::string>> next;
      for (auto& key : keys)
        for (const char* s : {"1", "0"}) {
          auto k = key;
          k.push_back(s);
          next.push_back(std::move(k));
        }
      keys = std::move(next);
    }
    for (auto& key : keys) {
      double p = unit(rng);
      cpt.rows[key] = {p, 1.0 - p};
    }
    cpts.push_back(std::move(cpt));
  }
  return build_network(std::move(variables), std::move(cpts));
}

template <typename F>
double time_ms(F&& fn, int reps) {
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? std::stoul(argv[1]) : 20;
  int reps = argc > 2 ? std::stoi(argv[2]) : 3;
  std::mt19937 rng(12345);
  BayesNet net = random_net(n, rng);

  Evidence evidence{{net.variable(0).name, "1"}};
  const std::string query = net.variable(net.size() - 1).name;

  Distribution serial, blocked;
  double t_serial =
      time_ms([&] { serial = oracle::enumerate_joint_serial(net, evidence, query); }, reps);
  double t_blocked = time_ms([&] { blocked = oracle::enumerate_joint(net, evidence, query); }, reps);

  double max_diff = 0.0;
  for (std::size_t i = 0; i < serial.probs.size(); ++i)
    max_diff = std::max(max_diff, std::fabs(serial.probs[i] - blocked.probs[i]));

  std::printf("vars=%zu joint=%zu reps=%d\n", n, std::size_t{1} << n, reps);
  std::printf("serial   %10.3f ms\n", t_serial);
  std::printf("blocked  %10.3f ms  (%.2fx)\n", t_blocked, t_serial / t_blocked);
  std::printf("max|diff| = %.3g\n", max_diff);
  return max_diff < 1e-12 ? 0 : 1;
}
