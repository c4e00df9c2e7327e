#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mdiscord/qstate.hpp"

namespace mdiscord {

/// A complete set of rank-1 orthogonal projectors |v_k><v_k| on one subsystem.
class ProjectorBasis {
 public:
  /// Throws StructureError unless the vectors are orthonormal within 1e-10
  /// and there are exactly as many as their dimension.
  explicit ProjectorBasis(std::vector<Vector> vectors);

  static ProjectorBasis computational(int dim);

  int dim() const { return static_cast<int>(vectors_.size()); }
  const Vector& vector(int k) const { return vectors_[k]; }
  Matrix projector(int k) const { return vectors_[k] * vectors_[k].adjoint(); }
  std::vector<Matrix> projectors() const;

  /// Largest deviation from idempotence, unit trace, mutual orthogonality
  /// and completeness over all projectors.
  double invariant_violation() const;

 private:
  std::vector<Vector> vectors_;
};

/// {cos t |0> + e^{i p} sin t |1>, sin t |0> - e^{i p} cos t |1>}
ProjectorBasis projector_pair_from_angles(double theta, double phi);

struct Angles {
  double theta = 0.0;
  double phi = 0.0;
  friend bool operator==(const Angles&, const Angles&) = default;
};

/// Angle pairs of a qubit measurement tree in level order: the root first,
/// then the two depth-1 children (outcome 0, outcome 1), then the four
/// depth-2 children in lexicographic outcome order, and so on.
struct MeasParams {
  std::vector<Angles> nodes;

  std::size_t scalar_count() const { return 2 * nodes.size(); }
  friend bool operator==(const MeasParams&, const MeasParams&) = default;
};

/// Node count of a complete qubit tree that measures `depth` subsystems.
int qubit_tree_nodes(int depth);

/// Outcome path leading to the node at `node_index` of a qubit tree.
std::vector<int> qubit_node_path(int node_index);

/// Conditional measurement tree over subsystems 0..depth-1, measured in that
/// order. The basis used on subsystem k depends on the outcomes recorded on
/// subsystems 0..k-1.
class MeasurementTree {
 public:
  /// levels[k] holds one basis per outcome path of length k, indexed by the
  /// path read as a mixed-radix number (first outcome most significant).
  MeasurementTree(Dims dims, std::vector<std::vector<ProjectorBasis>> levels);

  const Dims& dims() const { return dims_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  const ProjectorBasis& root() const { return levels_[0][0]; }
  const ProjectorBasis& basis(std::span<const int> path) const;

  /// Every outcome path of the given length, lexicographically ordered.
  std::vector<std::vector<int>> paths(int length) const;

 private:
  Dims dims_;
  std::vector<std::vector<ProjectorBasis>> levels_;
};

/// Tree over subsystems 0..depth-1 built from qubit angle pairs. Throws
/// StructureError for a node-count mismatch or a measured subsystem that is
/// not a qubit.
MeasurementTree tree_from_params(const Dims& dims, int depth, const MeasParams& params);

/// Tree with the computational basis at every node.
MeasurementTree computational_tree(const Dims& dims, int depth);

struct BranchOutcome {
  std::vector<int> path;
  double probability = 0.0;
  /// Normalized branch state; empty when probability < tol::branch_probability.
  std::optional<QState> post_state;
};

struct MeasuredState {
  QState post_state;
  std::vector<BranchOutcome> branches;
};

/// Applies the first `depth` levels of the tree: post_state is the sum of
/// P rho P over all outcome paths of that length.
MeasuredState apply_tree(const QState& state, const MeasurementTree& tree, int depth);

/// Outcome of a measurement path restricted to the unmeasured subsystems.
/// Since every measured factor collapses onto a pure state, `block` carries
/// all remaining information; it is unnormalized with trace equal to the
/// path probability.
struct ReducedBranch {
  std::vector<int> path;
  double probability = 0.0;
  Matrix block;
};

std::vector<ReducedBranch> reduced_branches(const QState& state, const MeasurementTree& tree,
                                            int depth);

/// (<v| (x) 1) rho (|v> (x) 1) for v acting on the leading factor of dimension lead_dim.
Matrix contract_leading(const Matrix& rho, int lead_dim, const Vector& v);

/// Eigenbasis tree that leaves a measured state invariant. The state must be
/// of the form produced by apply_tree at the given depth (not checked).
MeasurementTree optimal_tree_for_measured_state(const QState& state, int depth);

}  // namespace mdiscord
