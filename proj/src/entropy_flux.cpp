#include "mdiscord/entropy_flux.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiscord {

namespace {

const SubsetSpec kA{0};
const SubsetSpec kB{1};
const SubsetSpec kC{2};
const SubsetSpec kAB{0, 1};
const SubsetSpec kAC{0, 2};
const SubsetSpec kBC{1, 2};

void require_parties(const QState& state, int parties) {
  if (state.subsystems() != parties) {
    throw StructureError("expected a " + std::to_string(parties) + "-party state, got " +
                         std::to_string(state.subsystems()));
  }
}

void require_depth(const MeasurementTree& tree, int depth) {
  if (tree.depth() < depth) {
    throw StructureError("measurement tree needs depth >= " + std::to_string(depth));
  }
}

double branch_average(const QState& state, const MeasurementTree& tree, int depth,
                      const std::vector<int>& keep_in_rest) {
  const Dims rest(state.dims().begin() + depth, state.dims().end());
  const bool keep_all = keep_in_rest.size() == rest.size();
  double total = 0.0;
  for (const auto& branch : reduced_branches(state, tree, depth)) {
    if (branch.probability < tol::branch_probability) continue;
    Matrix normalized = branch.block / branch.probability;
    const double s = keep_all ? entropy_of_matrix(normalized)
                              : entropy_of_matrix(partial_trace(normalized, rest, SubsetSpec(keep_in_rest)));
    total += branch.probability * s;
  }
  return total;
}

std::map<std::string, double> tripartite_ledger(const QState& s) {
  const TripartiteInfo info = tripartite_infos(s);
  return {
      {"S_A_BC", cond_entropy(s, kA, kBC)}, {"S_B_AC", cond_entropy(s, kB, kAC)},
      {"S_C_AB", cond_entropy(s, kC, kAB)}, {"I_AB_C", info.ab_c},
      {"I_AC_B", info.ac_b},                {"I_BC_A", info.bc_a},
      {"I_ABC", info.abc},
  };
}

const std::vector<std::string> kTripartiteLedgerKeys = {"S_A_BC", "S_B_AC", "S_C_AB", "I_AB_C",
                                                         "I_AC_B", "I_BC_A", "I_ABC"};
const std::vector<std::string> kTripartiteDeltaKeys = {"d_A_BC",       "Delta_AB_C", "Delta_AC_B",
                                                        "Delta_BC_PiA", "Delta_ABC",  "Delta_BPiAC",
                                                        "dS_PiA",       "dS_B_PiA"};
const std::vector<std::string> kBipartiteLedgerKeys = {"S_A_B", "S_B_A", "I_AB"};
const std::vector<std::string> kBipartiteDeltaKeys = {"d_A_B", "dS_PiA"};

std::map<std::string, double> zero_deltas(const std::vector<std::string>& keys) {
  std::map<std::string, double> out;
  for (const auto& k : keys) out[k] = 0.0;
  return out;
}

std::vector<FluxReport> bipartite_flux(const QState& rho, const MeasurementTree& tree) {
  const QState rho1 = apply_tree(rho, tree, 1).post_state;
  auto ledger = [](const QState& s) {
    return std::map<std::string, double>{{"S_A_B", cond_entropy(s, kA, kB)},
                                         {"S_B_A", cond_entropy(s, kB, kA)},
                                         {"I_AB", mutual_info(s, kA, kB)}};
  };
  FluxReport pre{Stage::pre, ledger(rho), zero_deltas(kBipartiteDeltaKeys), 0.0};
  FluxReport m1{Stage::after_first, ledger(rho1), zero_deltas(kBipartiteDeltaKeys), 0.0};

  const double d = d_unminimized(rho, tree, kA, kB);
  const double ds_pi_a = subsystem_entropy(rho1, kA) - subsystem_entropy(rho, kA);
  m1.deltas["d_A_B"] = d;
  m1.deltas["dS_PiA"] = ds_pi_a;

  double worst = 0.0;
  auto check = [&worst](double lhs, double rhs) { worst = std::max(worst, std::abs(lhs - rhs)); };
  check(m1.ledger["S_A_B"] - pre.ledger["S_A_B"], d + ds_pi_a);
  check(m1.ledger["S_B_A"] - pre.ledger["S_B_A"], d);
  check(m1.ledger["I_AB"] - pre.ledger["I_AB"], -d);
  pre.consistency_violation = m1.consistency_violation = worst;
  return {pre, m1};
}

std::vector<FluxReport> tripartite_flux(const QState& rho, const MeasurementTree& tree) {
  const QState rho1 = apply_tree(rho, tree, 1).post_state;
  const QState rho2 = apply_tree(rho, tree, 2).post_state;

  FluxReport pre{Stage::pre, tripartite_ledger(rho), zero_deltas(kTripartiteDeltaKeys), 0.0};
  FluxReport m1{Stage::after_first, tripartite_ledger(rho1), zero_deltas(kTripartiteDeltaKeys), 0.0};
  FluxReport m2{Stage::after_second, tripartite_ledger(rho2), zero_deltas(kTripartiteDeltaKeys), 0.0};
  auto& l0 = pre.ledger;
  auto& l1 = m1.ledger;
  auto& l2 = m2.ledger;

  // Route 1: differences of (conditional / tripartite) mutual informations.
  const double delta_ab_c = l0["I_AB_C"] - l1["I_AB_C"];
  const double delta_ac_b = l0["I_AC_B"] - l1["I_AC_B"];
  const double delta_abc = l0["I_ABC"] - l1["I_ABC"];
  const double delta_bc_pia = l1["I_BC_A"] - l2["I_BC_A"];
  const double delta_bpia_c = l1["I_AB_C"] - l2["I_AB_C"];
  const double delta_bpiac = l1["I_ABC"] - l2["I_ABC"];

  // Route 2: unminimized discords.
  const double d_a_b = d_unminimized(rho, tree, kA, kB);
  const double d_a_c = d_unminimized(rho, tree, kA, kC);
  const double d_a_bc = d_unminimized(rho, tree, kA, kBC);
  const double d_b_pia_c = cond_entropy(rho2, kAC, kB) - cond_entropy(rho1, kAC, kB);
  const double d_b_pia = cond_entropy(rho2, kA, kB) - cond_entropy(rho1, kA, kB);
  const double d_b_c_rho1 = cond_entropy(rho2, kC, kB) - cond_entropy(rho1, kC, kB);

  const double ds_pi_a = subsystem_entropy(rho1, kA) - subsystem_entropy(rho, kA);
  const double ds_b_pi_a = cond_entropy(rho2, kB, kA) - cond_entropy(rho1, kB, kA);

  double worst = 0.0;
  auto check = [&worst](double lhs, double rhs) { worst = std::max(worst, std::abs(lhs - rhs)); };
  check(delta_ab_c, d_a_bc - d_a_c);
  check(delta_ac_b, d_a_bc - d_a_b);
  check(delta_abc, d_a_b + d_a_c - d_a_bc);
  check(delta_bc_pia, d_b_pia_c - d_b_pia);
  check(delta_bpia_c, d_b_pia_c - d_b_c_rho1);
  check(delta_bpiac, d_b_pia + d_b_c_rho1 - d_b_pia_c);
  check(d_a_bc, delta_ab_c + delta_ac_b + delta_abc);
  check(delta_bc_pia, cond_entropy(rho2, kC, kAB) - cond_entropy(rho1, kC, kAB));

  // Ledger movements between stages.
  check(l1["S_A_BC"] - l0["S_A_BC"], d_a_bc + ds_pi_a);
  check(l1["S_B_AC"] - l0["S_B_AC"], delta_ab_c);
  check(l1["S_C_AB"] - l0["S_C_AB"], delta_ac_b);
  check(l1["I_BC_A"] - l0["I_BC_A"], delta_abc);
  check(l2["S_A_BC"] - l1["S_A_BC"], delta_bpia_c);
  check(l2["S_B_AC"] - l1["S_B_AC"], delta_bc_pia + ds_b_pi_a);
  check(l2["S_C_AB"] - l1["S_C_AB"], delta_bc_pia);
  check(l2["I_AC_B"] - l1["I_AC_B"], delta_bpiac);

  m1.deltas["d_A_BC"] = d_a_bc;
  m1.deltas["Delta_AB_C"] = delta_ab_c;
  m1.deltas["Delta_AC_B"] = delta_ac_b;
  m1.deltas["Delta_ABC"] = delta_abc;
  m1.deltas["dS_PiA"] = ds_pi_a;
  m2.deltas["Delta_BC_PiA"] = delta_bc_pia;
  m2.deltas["Delta_BPiAC"] = delta_bpiac;
  m2.deltas["dS_B_PiA"] = ds_b_pi_a;
  m2.deltas["Delta_BPiA_C"] = delta_bpia_c;

  pre.consistency_violation = m1.consistency_violation = m2.consistency_violation = worst;
  return {pre, m1, m2};
}

}  // namespace

double cond_entropy(const QState& state, const SubsetSpec& target, const SubsetSpec& given) {
  if (!target.disjoint(given)) throw StructureError("conditional entropy needs disjoint subsets");
  return subsystem_entropy(state, target.merged(given)) - subsystem_entropy(state, given);
}

double cond_entropy_measured(const QState& state, const MeasurementTree& tree, int depth,
                             const SubsetSpec& target) {
  std::vector<int> keep;
  for (int q : target.indices()) {
    if (q < depth) throw StructureError("target overlaps the measured subsystems");
    if (q >= state.subsystems()) throw StructureError("target subsystem out of range");
    keep.push_back(q - depth);
  }
  return branch_average(state, tree, depth, keep);
}

double cond_entropy_measured(const QState& state, const MeasurementTree& tree, int depth) {
  if (depth == state.subsystems()) {
    reduced_branches(state, tree, depth);  // argument checks only; measured branches are pure
    return 0.0;
  }
  std::vector<int> keep;
  for (int q = 0; q < state.subsystems() - depth; ++q) keep.push_back(q);
  return branch_average(state, tree, depth, keep);
}

double mutual_info(const QState& state, const SubsetSpec& a, const SubsetSpec& b) {
  if (!a.disjoint(b)) throw StructureError("mutual information needs disjoint subsets");
  return subsystem_entropy(state, a) + subsystem_entropy(state, b) -
         subsystem_entropy(state, a.merged(b));
}

double cond_mutual_info(const QState& state, const SubsetSpec& a, const SubsetSpec& b,
                        const SubsetSpec& given) {
  if (!a.disjoint(b)) throw StructureError("mutual information needs disjoint subsets");
  return cond_entropy(state, a, given) - cond_entropy(state, a, b.merged(given));
}

double tripartite_mutual_info(const QState& state) {
  require_parties(state, 3);
  return mutual_info(state, kA, kC) - cond_mutual_info(state, kA, kC, kB);
}

TripartiteInfo tripartite_infos(const QState& state) {
  require_parties(state, 3);
  // All seven marginal entropies once, then the standard combinations.
  const double s_a = subsystem_entropy(state, kA);
  const double s_b = subsystem_entropy(state, kB);
  const double s_c = subsystem_entropy(state, kC);
  const double s_ab = subsystem_entropy(state, kAB);
  const double s_ac = subsystem_entropy(state, kAC);
  const double s_bc = subsystem_entropy(state, kBC);
  const double s_abc = entropy(state);
  TripartiteInfo info;
  info.ab_c = s_ac + s_bc - s_abc - s_c;
  info.ac_b = s_ab + s_bc - s_abc - s_b;
  info.bc_a = s_ab + s_ac - s_abc - s_a;
  info.abc = (s_a + s_c - s_ac) - info.ac_b;
  return info;
}

MeasuredMutualInfos measured_mutual_infos(const QState& state, const MeasurementTree& tree) {
  require_parties(state, 3);
  require_depth(tree, 2);
  return {tripartite_infos(state), tripartite_infos(apply_tree(state, tree, 1).post_state),
          tripartite_infos(apply_tree(state, tree, 2).post_state)};
}

double d_unminimized(const QState& state, const MeasurementTree& tree,
                     const SubsetSpec& measured_block, const SubsetSpec& rest) {
  const int depth = static_cast<int>(measured_block.size());
  for (int k = 0; k < depth; ++k) {
    if (measured_block.indices()[k] != k) {
      throw StructureError("measured block must be the leading subsystems 0..k-1");
    }
  }
  require_depth(tree, depth);
  return cond_entropy_measured(state, tree, depth, rest) - cond_entropy(state, rest, measured_block);
}

ConditionalDiscords delta_cond_discord(const QState& state, const MeasurementTree& tree) {
  require_parties(state, 3);
  const TripartiteInfo i = tripartite_infos(state);
  const TripartiteInfo j = tripartite_infos(apply_tree(state, tree, 1).post_state);
  return {i.ab_c - j.ab_c, i.ac_b - j.ac_b};
}

double delta_post_discord(const QState& state, const MeasurementTree& tree) {
  const MeasuredMutualInfos m = measured_mutual_infos(state, tree);
  return m.j.bc_a - m.k.bc_a;
}

double delta_monogamy(const QState& state, const MeasurementTree& tree) {
  require_parties(state, 3);
  const TripartiteInfo i = tripartite_infos(state);
  const TripartiteInfo j = tripartite_infos(apply_tree(state, tree, 1).post_state);
  return i.abc - j.abc;
}

std::string stage_suffix(Stage stage) {
  switch (stage) {
    case Stage::pre:
      return "pre";
    case Stage::after_first:
      return "m1";
    case Stage::after_second:
      return "m2";
  }
  return "?";
}

std::vector<FluxReport> flux_report(const QState& state, const MeasurementTree& tree) {
  std::vector<FluxReport> reports;
  if (state.subsystems() == 2) {
    reports = bipartite_flux(state, tree);
  } else if (state.subsystems() == 3) {
    require_depth(tree, 2);
    reports = tripartite_flux(state, tree);
  } else {
    throw StructureError("flux reports cover two- and three-party states");
  }
  if (reports.front().consistency_violation > kFluxConsistencyTolerance) {
    throw std::logic_error("flux report identities violated by " +
                           std::to_string(reports.front().consistency_violation));
  }
  return reports;
}

std::vector<std::string> flux_csv_columns(int parties) {
  if (parties != 2 && parties != 3) throw StructureError("flux reports cover two- and three-party states");
  const auto& ledger = parties == 2 ? kBipartiteLedgerKeys : kTripartiteLedgerKeys;
  const auto& deltas = parties == 2 ? kBipartiteDeltaKeys : kTripartiteDeltaKeys;
  const std::vector<Stage> stages = parties == 2
                                        ? std::vector<Stage>{Stage::pre, Stage::after_first}
                                        : std::vector<Stage>{Stage::pre, Stage::after_first, Stage::after_second};
  std::vector<std::string> columns;
  for (const auto* keys : {&ledger, &deltas}) {
    for (const auto& key : *keys) {
      for (Stage stage : stages) columns.push_back(key + "_" + stage_suffix(stage));
    }
  }
  return columns;
}

std::vector<double> flux_csv_values(const std::vector<FluxReport>& reports) {
  const int parties = reports.size() == 2 ? 2 : 3;
  const auto& ledger = parties == 2 ? kBipartiteLedgerKeys : kTripartiteLedgerKeys;
  const auto& deltas = parties == 2 ? kBipartiteDeltaKeys : kTripartiteDeltaKeys;
  std::vector<double> values;
  for (const auto& key : ledger) {
    for (const auto& report : reports) values.push_back(report.ledger.at(key));
  }
  for (const auto& key : deltas) {
    for (const auto& report : reports) values.push_back(report.deltas.at(key));
  }
  return values;
}

}  // namespace mdiscord
