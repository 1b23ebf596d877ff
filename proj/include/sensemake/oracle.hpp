#pragma once

#include <vector>

#include "sensemake/bayesnet.hpp"
#include "sensemake/cam.hpp"

namespace sensemake {
namespace oracle {

constexpr std::size_t kMaxJointSize = std::size_t{1} << 22;
constexpr std::size_t kMaxFreeUnits = 20;

/// Exact conditional by full-joint summation. The OpenMP build sums fixed
/// blocks in parallel and reduces them in block order, so results do not
/// depend on the thread count. Guarded: joint size <= 2^22.
Distribution enumerate_joint(const BayesNet& net, const Evidence& evidence,
                             const std::string& query);

/// Single-threaded reference for the parallel path above.
Distribution enumerate_joint_serial(const BayesNet& net, const Evidence& evidence,
                                    const std::string& query);

struct EnergyLandscape {
  double min_energy = 0.0;
  /// Global minimizers as full activation vectors ({a_max, rest} levels,
  /// clamps respected), in lexicographic on/off order.
  std::vector<std::vector<double>> minimizers;
};

/// Exhaustive minimum-energy search over on/off configurations of the free
/// units. Guarded: free units <= 20.
EnergyLandscape min_energy_states(const CamNetwork& cam);

}  // namespace oracle
}  // namespace sensemake
