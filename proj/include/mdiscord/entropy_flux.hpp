#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdiscord/measure.hpp"
#include "mdiscord/qstate.hpp"

// Conditional entropies, mutual informations and their measurement-induced
// changes. Tripartite quantities label subsystems 0, 1, 2 as A, B, C, with A
// measured first and B measured conditionally on the outcome at A.

namespace mdiscord {

/// S_{target|given} = S_{target u given} - S_{given}. Throws StructureError if the sets overlap.
double cond_entropy(const QState& state, const SubsetSpec& target, const SubsetSpec& given);

/// Average entropy after measuring subsystems 0..depth-1 with the tree:
/// sum over outcome paths of p * S_{measured u target}(branch state).
/// `target` must not contain measured subsystems.
double cond_entropy_measured(const QState& state, const MeasurementTree& tree, int depth,
                             const SubsetSpec& target);
/// Same with target = every unmeasured subsystem.
double cond_entropy_measured(const QState& state, const MeasurementTree& tree, int depth);

double mutual_info(const QState& state, const SubsetSpec& a, const SubsetSpec& b);
/// I_{a:b|given} = S_{a|given} - S_{a|b u given}
double cond_mutual_info(const QState& state, const SubsetSpec& a, const SubsetSpec& b,
                        const SubsetSpec& given);
/// I_{A:B:C} = I_{A:C} - I_{A:C|B} on a three-party state.
double tripartite_mutual_info(const QState& state);

struct TripartiteInfo {
  double ab_c = 0.0;  // I_{A:B|C}
  double ac_b = 0.0;  // I_{A:C|B}
  double bc_a = 0.0;  // I_{B:C|A}
  double abc = 0.0;   // I_{A:B:C}
};

TripartiteInfo tripartite_infos(const QState& state);

/// I on the state, J after measuring A, K after measuring A then B.
struct MeasuredMutualInfos {
  TripartiteInfo i;
  TripartiteInfo j;
  TripartiteInfo k;
};

/// Needs a tree of depth >= 2 on a three-party state.
MeasuredMutualInfos measured_mutual_infos(const QState& state, const MeasurementTree& tree);

/// d_{M;R} = S_{R|Pi^M} - S_{R|M}, with M = measured_block a leading run
/// 0..k-1 measured by the first k levels of the tree.
double d_unminimized(const QState& state, const MeasurementTree& tree,
                     const SubsetSpec& measured_block, const SubsetSpec& rest);

struct ConditionalDiscords {
  double ab_c = 0.0;  // Delta_{A;B|C}
  double ac_b = 0.0;  // Delta_{A;C|B}
};

/// I - J for the two conditional mutual informations touching A.
ConditionalDiscords delta_cond_discord(const QState& state, const MeasurementTree& tree);
/// Delta_{B;C|Pi^A} = J_{B:C|A} - K_{B:C|A}
double delta_post_discord(const QState& state, const MeasurementTree& tree);
/// Delta_{A:B:C} = I_{A:B:C} - J_{A:B:C}
double delta_monogamy(const QState& state, const MeasurementTree& tree);

enum class Stage { pre, after_first, after_second };

std::string stage_suffix(Stage stage);

/// Entropy ledger of one stage of the measurement. `deltas` carries the
/// changes caused by the measurement that produced this stage; entries for
/// the other measurement are zero, and every delta is zero at Stage::pre.
struct FluxReport {
  Stage stage = Stage::pre;
  std::map<std::string, double> ledger;
  std::map<std::string, double> deltas;
  /// Largest disagreement between the two routes to every delta and the
  /// ledger-difference relations checked while building the report.
  double consistency_violation = 0.0;
};

inline constexpr double kFluxConsistencyTolerance = 1e-9;

/// Two reports (pre, after_first) for a two-party state, three for a
/// three-party state (tree depth >= 2). Throws std::logic_error if the
/// internal consistency check exceeds kFluxConsistencyTolerance.
std::vector<FluxReport> flux_report(const QState& state, const MeasurementTree& tree);

/// Fixed CSV column order for a flux report of the given party count.
std::vector<std::string> flux_csv_columns(int parties);
std::vector<double> flux_csv_values(const std::vector<FluxReport>& reports);

}  // namespace mdiscord
