#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mdiscord/measure.hpp"

namespace mdiscord {

struct OptimizerConfig {
  int grid_points_per_angle = 6;
  int refine_starts = 4;
  int simplex_max_iters = 400;
  /// Converged once the objective spread is below this and every vertex is
  /// within 1e-7 of the best one in each angle.
  double simplex_tol = 1e-9;
  std::uint64_t seed = 0;
  /// Extra simplex restarts from the incumbent, stopped early once a restart
  /// improves by less than simplex_tol.
  int max_restarts = 5;

  /// Throws std::invalid_argument when a field is out of range.
  void check() const;
};

/// Must be a pure function; it is called concurrently during the grid scan.
using Objective = std::function<double(const MeasParams&)>;

struct Candidate {
  double value = 0.0;
  MeasParams params;
  std::uint64_t grid_index = 0;
};

struct OptimizerOutcome {
  double best_value = 0.0;
  MeasParams best_params;
  std::uint64_t evaluations = 0;
  int restarts = 0;
  bool converged = false;
  double grid_best = 0.0;
  /// Best value after the grid and after each refinement start.
  std::vector<double> trace;
};

/// theta_i = i (pi/2)/(g-1), i = 0..g-1 (both ends included).
double grid_theta(int i, int points);
/// phi_i = i 2pi/g, i = 0..g-1 (2pi excluded).
double grid_phi(int i, int points);

/// Grid point with the given flat index. Scalars are ordered
/// (theta_0, phi_0, theta_1, phi_1, ...) with the first scalar most significant.
MeasParams grid_point(std::uint64_t index, int node_count, int points);

/// Number of grid evaluations for node_count tree nodes.
std::uint64_t grid_size(int node_count, int points);

/// Evaluates every grid point and returns the `keep` best, ascending by value
/// with ties broken by grid index (lexicographic parameter order).
std::vector<Candidate> grid_scan(const Objective& objective, int node_count,
                                 const OptimizerConfig& config, int keep);

/// Maps angles into theta in [0, pi/2], phi in [0, 2pi). Each reflection of
/// theta at 0 or pi/2 adds pi to phi, which leaves the projector pair and its
/// outcome labels unchanged.
Angles fold_angles(double theta, double phi);
MeasParams fold_params(const std::vector<double>& scalars);

/// Nelder-Mead from `start` with coefficients (1, 2, 0.5, 0.5) and initial
/// edge 0.1 rad, followed by up to config.max_restarts restarts from the
/// incumbent. Never returns a value worse than the start.
OptimizerOutcome simplex_refine(const Objective& objective, const MeasParams& start,
                                const OptimizerConfig& config);

/// grid_scan, then simplex_refine from the top refine_starts candidates.
OptimizerOutcome optimize(const Objective& objective, int node_count, const OptimizerConfig& config);

}  // namespace mdiscord
