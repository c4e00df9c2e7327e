#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdiscord/measure.hpp"
#include "mdiscord/optimizer.hpp"
#include "mdiscord/qstate.hpp"

namespace mdiscord {

/// S_{B|Pi^A} - S_{B|A} on a two-party state; uses the root of the tree.
double objective_bipartite(const QState& state, const MeasurementTree& tree);

/// S_{B|A}(rho_{Pi^{AB}}) - S_{B|A}(rho) on a two-party state; needs depth 2.
double objective_bipartite_two_meas(const QState& state, const MeasurementTree& tree);

/// -S_{BC|A} + S_{B|Pi^A} + S_{C|Pi^{AB}} on a three-party state; needs depth 2.
double objective_tripartite(const QState& state, const MeasurementTree& tree);

/// -S_{A2..AN|A1} + sum_k S_{Ak|Pi^{A1..A(k-1)}} with the tree measuring
/// subsystems 0..N-2. The first term depends only on the state, so repeated
/// evaluation should go through NPartiteObjective.
double objective_npartite(const QState& state, const MeasurementTree& tree);

/// objective_npartite with the state-only term computed once.
class NPartiteObjective {
 public:
  explicit NPartiteObjective(QState state);

  double operator()(const MeasurementTree& tree) const;
  /// Qubit tree of depth N-1 built from angles.
  double operator()(const MeasParams& params) const;

  const QState& state() const { return state_; }
  int node_count() const { return qubit_tree_nodes(state_.subsystems() - 1); }

 private:
  double measured_sum(const Matrix& block, const MeasurementTree& tree, int level,
                      std::vector<int>& path) const;

  QState state_;
  double base_ = 0.0;
};

struct DiscordDiagnostics {
  std::uint64_t evaluations = 0;
  int restarts = 0;
  double grid_best = 0.0;
  bool converged = false;
  std::vector<double> trace;
};

struct DiscordResult {
  double value = 0.0;
  MeasParams optimal_params;
  std::vector<int> order;
  int level = 0;
  /// Delta_AB_C, Delta_AC_B, Delta_BC_PiA, Delta_ABC at the optimum; three parties only.
  std::map<std::string, double> decomposition;
  DiscordDiagnostics diagnostics;
};

/// Keeps the subsystems listed in `order`, traces out the rest, and relabels
/// so that order[k] becomes subsystem k.
QState arrange_parties(const QState& state, const std::vector<int>& order);

/// Measurement order 0, 1, ..., level-1.
std::vector<int> default_order(int level);

/// Minimum over qubit trees measuring order[0..level-2] in sequence, with
/// order[level-1] unmeasured. Throws StructureError for level < 2 or a
/// measured subsystem that is not a qubit.
DiscordResult discord(const QState& state, const std::vector<int>& order,
                      const OptimizerConfig& config = {});

/// Minimum of objective_bipartite_two_meas over depth-2 trees on a two-qubit state.
DiscordResult discord_two_measurement(const QState& state, const OptimizerConfig& config = {});

/// Delta_AB_C, Delta_AC_B, Delta_BC_PiA, Delta_ABC for a three-party state and tree.
std::map<std::string, double> tripartite_decomposition(const QState& state, const MeasurementTree& tree);

}  // namespace mdiscord
