#include "mdiscord/discord.hpp"

#include <algorithm>

#include "mdiscord/entropy_flux.hpp"

namespace mdiscord {

namespace {

void require_qubits(const Dims& dims, int measured) {
  for (int k = 0; k < measured; ++k) {
    if (dims[k] != 2) throw StructureError("measured subsystems must be qubits");
  }
}

// Reduces an operator on subsystems (d, rest...) to the first factor.
Matrix leading_marginal(const Matrix& block, int lead) {
  const Eigen::Index rest = block.rows() / lead;
  Matrix out(lead, lead);
  for (int a = 0; a < lead; ++a) {
    for (int b = 0; b < lead; ++b) out(a, b) = block.block(a * rest, b * rest, rest, rest).trace();
  }
  return out;
}

DiscordResult finish(const OptimizerOutcome& outcome, std::vector<int> order, int level) {
  DiscordResult result;
  result.value = outcome.best_value;
  result.optimal_params = outcome.best_params;
  result.order = std::move(order);
  result.level = level;
  result.diagnostics = {outcome.evaluations, outcome.restarts, outcome.grid_best, outcome.converged,
                        outcome.trace};
  return result;
}

}  // namespace

double objective_bipartite(const QState& state, const MeasurementTree& tree) {
  if (state.subsystems() != 2) throw StructureError("bipartite objective needs two subsystems");
  return cond_entropy_measured(state, tree, 1, SubsetSpec{1}) - cond_entropy(state, {1}, {0});
}

double objective_bipartite_two_meas(const QState& state, const MeasurementTree& tree) {
  if (state.subsystems() != 2) throw StructureError("bipartite objective needs two subsystems");
  if (tree.depth() < 2) throw StructureError("two-measurement objective needs a depth-2 tree");
  const QState measured = apply_tree(state, tree, 2).post_state;
  return cond_entropy(measured, {1}, {0}) - cond_entropy(state, {1}, {0});
}

double objective_tripartite(const QState& state, const MeasurementTree& tree) {
  if (state.subsystems() != 3) throw StructureError("tripartite objective needs three subsystems");
  if (tree.depth() < 2) throw StructureError("tripartite objective needs a depth-2 tree");
  return -cond_entropy(state, {1, 2}, {0}) + cond_entropy_measured(state, tree, 1, SubsetSpec{1}) +
         cond_entropy_measured(state, tree, 2, SubsetSpec{2});
}

double objective_npartite(const QState& state, const MeasurementTree& tree) {
  return NPartiteObjective(state)(tree);
}

NPartiteObjective::NPartiteObjective(QState state) : state_(std::move(state)) {
  const int n = state_.subsystems();
  if (n < 2) throw StructureError("discord needs at least two subsystems");
  std::vector<int> rest;
  for (int q = 1; q < n; ++q) rest.push_back(q);
  base_ = -cond_entropy(state_, SubsetSpec(rest), {0});
}

double NPartiteObjective::operator()(const MeasurementTree& tree) const {
  const int n = state_.subsystems();
  if (tree.dims() != state_.dims()) throw StructureError("tree dims do not match state dims");
  if (tree.depth() < n - 1) throw StructureError("tree must measure all but the last subsystem");
  std::vector<int> path;
  return base_ + measured_sum(state_.matrix(), tree, 0, path);
}

double NPartiteObjective::operator()(const MeasParams& params) const {
  const int n = state_.subsystems();
  return (*this)(tree_from_params(state_.dims(), n - 1, params));
}

double NPartiteObjective::measured_sum(const Matrix& block, const MeasurementTree& tree, int level,
                                       std::vector<int>& path) const {
  const Dims& dims = state_.dims();
  const int n = state_.subsystems();
  const ProjectorBasis& basis = tree.basis(path);
  double total = 0.0;
  for (int o = 0; o < basis.dim(); ++o) {
    Matrix child = contract_leading(block, dims[level], basis.vector(o));
    const double p = child.trace().real();
    if (p < tol::branch_probability) continue;
    const Matrix next = level + 2 == n ? child : leading_marginal(child, dims[level + 1]);
    total += p * entropy_of_matrix(next / p);
    if (level + 2 < n) {
      path.push_back(o);
      total += measured_sum(child, tree, level + 1, path);
      path.pop_back();
    }
  }
  return total;
}

QState arrange_parties(const QState& state, const std::vector<int>& order) {
  const int n = state.subsystems();
  if (order.empty()) throw StructureError("order must not be empty");
  std::vector<int> kept = order;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw StructureError("order lists a subsystem twice");
  }
  if (kept.front() < 0 || kept.back() >= n) throw StructureError("order index out of range");
  QState reduced = static_cast<int>(kept.size()) == n ? state : partial_trace(state, SubsetSpec(kept));
  std::vector<int> relabel;
  for (int q : order) {
    relabel.push_back(static_cast<int>(std::lower_bound(kept.begin(), kept.end(), q) - kept.begin()));
  }
  return permute(reduced, relabel);
}

std::vector<int> default_order(int level) {
  std::vector<int> order(level);
  for (int k = 0; k < level; ++k) order[k] = k;
  return order;
}

std::map<std::string, double> tripartite_decomposition(const QState& state, const MeasurementTree& tree) {
  const ConditionalDiscords cond = delta_cond_discord(state, tree);
  return {{"Delta_AB_C", cond.ab_c},
          {"Delta_AC_B", cond.ac_b},
          {"Delta_BC_PiA", delta_post_discord(state, tree)},
          {"Delta_ABC", delta_monogamy(state, tree)}};
}

DiscordResult discord(const QState& state, const std::vector<int>& order, const OptimizerConfig& config) {
  const int level = static_cast<int>(order.size());
  if (level < 2) throw StructureError("discord needs at least two parties");
  QState arranged = arrange_parties(state, order);
  require_qubits(arranged.dims(), level - 1);

  const NPartiteObjective objective(arranged);
  const OptimizerOutcome outcome =
      optimize([&objective](const MeasParams& p) { return objective(p); }, objective.node_count(), config);
  DiscordResult result = finish(outcome, order, level);
  if (level == 3) {
    result.decomposition =
        tripartite_decomposition(arranged, tree_from_params(arranged.dims(), 2, result.optimal_params));
  }
  return result;
}

DiscordResult discord_two_measurement(const QState& state, const OptimizerConfig& config) {
  if (state.subsystems() != 2) throw StructureError("two-measurement discord needs two subsystems");
  require_qubits(state.dims(), 2);
  const Dims dims = state.dims();
  const OptimizerOutcome outcome = optimize(
      [&](const MeasParams& p) { return objective_bipartite_two_meas(state, tree_from_params(dims, 2, p)); },
      qubit_tree_nodes(2), config);
  return finish(outcome, {0, 1}, 2);
}

}  // namespace mdiscord
