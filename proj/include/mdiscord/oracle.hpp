#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdiscord/measure.hpp"
#include "mdiscord/qstate.hpp"

namespace mdiscord::oracle {

// Brute-force reference path. Everything here is rebuilt from full-space
// Kronecker projectors, explicit partial traces and eigenvalue sums.

/// Discord objective for a qubit tree over subsystems 0..N-2, evaluated
/// from full-space projectors.
double objective(const QState& state, const MeasParams& params);

/// Exhaustive minimum of `objective` over the angle grid
/// theta_i = i (pi/2)/(points-1), phi_i = i 2pi/points at every node, for the
/// state restricted to subsystems 0..level-1. The objective is a sum over
/// outcome branches, so each subtree is minimized independently for a given
/// parent basis; the result equals the full Cartesian grid minimum.
double dense_grid_min(const QState& state, int level, int points_per_angle);

/// max |rho - sum_paths P rho P| over all full-depth outcome paths of the tree.
double invariance_residual(const QState& state, const MeasurementTree& tree);

struct VerifyReport {
  std::string check;
  int samples = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

enum class Fault {
  none,
  /// Flips the sign of the monogamy term in the decomposition check.
  flip_monogamy_sign,
};

/// Entropy decomposition identities of the discord objective on `samples`
/// seeded random three-qubit states and trees; reports sorted by check name.
std::vector<VerifyReport> identity_suite(std::uint64_t seed, int samples, Fault fault = Fault::none);

struct SuiteOptions {
  std::uint64_t seed = 0;
  int samples = 100;
  /// Samples for the checks that run the optimizer.
  int optimization_samples = 3;
  Fault fault = Fault::none;
};

/// identity_suite plus non-negativity, invariance, reduction, product-state,
/// cross-implementation and optimization checks; sorted by check name.
std::vector<VerifyReport> verify_suite(const SuiteOptions& options);

/// Random angles: theta uniform in [0, pi/2], phi uniform in [0, 2pi).
MeasParams random_params(int node_count, std::uint64_t seed);

}  // namespace mdiscord::oracle
