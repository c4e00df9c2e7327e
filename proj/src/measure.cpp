#include "mdiscord/measure.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace mdiscord {

namespace {

int count_paths(const Dims& dims, int length) {
  int n = 1;
  for (int k = 0; k < length; ++k) n *= dims[k];
  return n;
}

// Deterministic Hermitian weight matrix with generic (non-degenerate) structure.
Matrix generic_hermitian(int side) {
  Matrix w(side, side);
  for (int r = 0; r < side; ++r) {
    for (int c = r; c < side; ++c) {
      const double re = std::sin(0.7 + 1.3 * r + 2.9 * c + 0.37 * r * c);
      const double im = (r == c) ? 0.0 : std::cos(1.1 + 0.5 * r + 1.7 * c);
      w(r, c) = Complex(re, im);
      w(c, r) = std::conj(w(r, c));
    }
  }
  return Matrix::Identity(side, side) + 0.5 * w;
}

// Tr_rest[(1 (x) g) rho] for a leading factor of dimension lead_dim.
Matrix weighted_leading_marginal(const Matrix& rho, int lead_dim, const Matrix& g) {
  const Eigen::Index rest = rho.rows() / lead_dim;
  Matrix out(lead_dim, lead_dim);
  for (int a = 0; a < lead_dim; ++a) {
    for (int b = 0; b < lead_dim; ++b) {
      out(a, b) = (g.transpose().cwiseProduct(rho.block(a * rest, b * rest, rest, rest))).sum();
    }
  }
  return 0.5 * (out + out.adjoint());
}

void build_optimal_levels(const Matrix& rho, const Dims& dims, int level, int depth,
                          std::vector<int>& path,
                          std::vector<std::vector<std::optional<ProjectorBasis>>>& levels) {
  const int lead = dims[level];
  int rest_side = 1;
  for (std::size_t q = level + 1; q < dims.size(); ++q) rest_side *= dims[q];

  Matrix h = weighted_leading_marginal(rho, lead, generic_hermitian(rest_side));
  EigenSystem eig = eig_hermitian(h);
  std::vector<Vector> vectors;
  for (int k = 0; k < lead; ++k) vectors.push_back(eig.vectors.col(k));
  ProjectorBasis basis(std::move(vectors));

  int index = 0;
  for (int k = 0; k < level; ++k) index = index * dims[k] + path[k];
  levels[level][index] = basis;

  if (level + 1 == depth) return;
  for (int outcome = 0; outcome < lead; ++outcome) {
    path.push_back(outcome);
    Matrix block = contract_leading(rho, lead, basis.vector(outcome));
    const double p = block.trace().real();
    if (p > tol::branch_probability) {
      build_optimal_levels(block / p, dims, level + 1, depth, path, levels);
    } else {
      // Unreachable branch: any complete basis will do below it.
      Matrix flat = Matrix::Identity(block.rows(), block.cols()) / static_cast<double>(block.rows());
      build_optimal_levels(flat, dims, level + 1, depth, path, levels);
    }
    path.pop_back();
  }
}

}  // namespace

ProjectorBasis::ProjectorBasis(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  const int n = static_cast<int>(vectors_.size());
  if (n < 2) throw StructureError("projector basis needs at least two vectors");
  for (int i = 0; i < n; ++i) {
    if (vectors_[i].size() != n) throw StructureError("projector basis vector has wrong dimension");
    for (int j = i; j < n; ++j) {
      const Complex overlap = vectors_[i].dot(vectors_[j]);
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > 1e-10) {
        throw StructureError("projector basis vectors are not orthonormal");
      }
    }
  }
}

ProjectorBasis ProjectorBasis::computational(int dim) {
  std::vector<Vector> vectors;
  for (int k = 0; k < dim; ++k) vectors.push_back(Vector::Unit(dim, k));
  return ProjectorBasis(std::move(vectors));
}

std::vector<Matrix> ProjectorBasis::projectors() const {
  std::vector<Matrix> out;
  for (int k = 0; k < dim(); ++k) out.push_back(projector(k));
  return out;
}

double ProjectorBasis::invariant_violation() const {
  const int n = dim();
  std::vector<Matrix> ps = projectors();
  Matrix sum = Matrix::Zero(n, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, max_abs_diff(ps[i] * ps[i], ps[i]));
    worst = std::max(worst, std::abs(ps[i].trace() - Complex(1.0, 0.0)));
    for (int j = 0; j < n; ++j) {
      if (i != j) worst = std::max(worst, (ps[i] * ps[j]).cwiseAbs().maxCoeff());
    }
    sum += ps[i];
  }
  return std::max(worst, max_abs_diff(sum, Matrix::Identity(n, n)));
}

ProjectorBasis projector_pair_from_angles(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex phase = std::polar(1.0, phi);
  Vector first(2), second(2);
  first << c, phase * s;
  second << s, -phase * c;
  return ProjectorBasis({first, second});
}

int qubit_tree_nodes(int depth) { return (1 << depth) - 1; }

std::vector<int> qubit_node_path(int node_index) {
  int level = 0;
  while ((1 << (level + 1)) - 1 <= node_index) ++level;
  const int offset = node_index - ((1 << level) - 1);
  std::vector<int> path(level);
  for (int k = 0; k < level; ++k) path[k] = (offset >> (level - 1 - k)) & 1;
  return path;
}

MeasurementTree::MeasurementTree(Dims dims, std::vector<std::vector<ProjectorBasis>> levels)
    : dims_(std::move(dims)), levels_(std::move(levels)) {
  if (levels_.empty()) throw StructureError("measurement tree needs at least one level");
  if (levels_.size() > dims_.size()) throw StructureError("tree deeper than the number of subsystems");
  for (int k = 0; k < depth(); ++k) {
    if (static_cast<int>(levels_[k].size()) != count_paths(dims_, k)) {
      throw StructureError("tree level " + std::to_string(k) + " is incomplete");
    }
    for (const auto& basis : levels_[k]) {
      if (basis.dim() != dims_[k]) throw StructureError("basis dimension does not match subsystem");
    }
  }
}

const ProjectorBasis& MeasurementTree::basis(std::span<const int> path) const {
  const int level = static_cast<int>(path.size());
  if (level >= depth()) throw StructureError("outcome path longer than tree depth");
  int index = 0;
  for (int k = 0; k < level; ++k) {
    if (path[k] < 0 || path[k] >= dims_[k]) throw StructureError("outcome out of range");
    index = index * dims_[k] + path[k];
  }
  return levels_[level][index];
}

std::vector<std::vector<int>> MeasurementTree::paths(int length) const {
  std::vector<std::vector<int>> out{{}};
  for (int k = 0; k < length; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int o = 0; o < dims_[k]; ++o) {
        next.push_back(prefix);
        next.back().push_back(o);
      }
    }
    out = std::move(next);
  }
  return out;
}

MeasurementTree tree_from_params(const Dims& dims, int depth, const MeasParams& params) {
  if (depth < 1 || depth > static_cast<int>(dims.size())) {
    throw StructureError("tree depth out of range");
  }
  for (int k = 0; k < depth; ++k) {
    if (dims[k] != 2) throw StructureError("angle parameterization requires measured qubits");
  }
  if (static_cast<int>(params.nodes.size()) != qubit_tree_nodes(depth)) {
    throw StructureError("expected " + std::to_string(qubit_tree_nodes(depth)) + " tree nodes, got " +
                         std::to_string(params.nodes.size()));
  }
  std::vector<std::vector<ProjectorBasis>> levels(depth);
  int node = 0;
  for (int k = 0; k < depth; ++k) {
    for (int i = 0; i < (1 << k); ++i, ++node) {
      levels[k].push_back(projector_pair_from_angles(params.nodes[node].theta, params.nodes[node].phi));
    }
  }
  return MeasurementTree(dims, std::move(levels));
}

MeasurementTree computational_tree(const Dims& dims, int depth) {
  if (depth < 1 || depth > static_cast<int>(dims.size())) {
    throw StructureError("tree depth out of range");
  }
  std::vector<std::vector<ProjectorBasis>> levels(depth);
  for (int k = 0; k < depth; ++k) {
    levels[k].assign(count_paths(dims, k), ProjectorBasis::computational(dims[k]));
  }
  return MeasurementTree(dims, std::move(levels));
}

Matrix contract_leading(const Matrix& rho, int lead_dim, const Vector& v) {
  const Eigen::Index rest = rho.rows() / lead_dim;
  Matrix out = Matrix::Zero(rest, rest);
  for (int a = 0; a < lead_dim; ++a) {
    if (v(a) == Complex(0.0, 0.0)) continue;
    for (int b = 0; b < lead_dim; ++b) {
      const Complex w = std::conj(v(a)) * v(b);
      if (w == Complex(0.0, 0.0)) continue;
      out.noalias() += w * rho.block(a * rest, b * rest, rest, rest);
    }
  }
  return out;
}

std::vector<ReducedBranch> reduced_branches(const QState& state, const MeasurementTree& tree,
                                            int depth) {
  if (state.dims() != tree.dims()) throw StructureError("tree dims do not match state dims");
  if (depth < 1 || depth > tree.depth()) throw StructureError("depth out of range for tree");
  std::vector<ReducedBranch> current{{{}, 1.0, state.matrix()}};
  for (int k = 0; k < depth; ++k) {
    std::vector<ReducedBranch> next;
    next.reserve(current.size() * state.dims()[k]);
    for (const auto& branch : current) {
      const ProjectorBasis& basis = tree.basis(branch.path);
      for (int o = 0; o < basis.dim(); ++o) {
        ReducedBranch child;
        child.path = branch.path;
        child.path.push_back(o);
        child.block = contract_leading(branch.block, state.dims()[k], basis.vector(o));
        child.probability = std::max(0.0, child.block.trace().real());
        next.push_back(std::move(child));
      }
    }
    current = std::move(next);
  }
  return current;
}

MeasuredState apply_tree(const QState& state, const MeasurementTree& tree, int depth) {
  std::vector<ReducedBranch> reduced = reduced_branches(state, tree, depth);
  Matrix post = Matrix::Zero(state.side(), state.side());
  std::vector<BranchOutcome> branches;
  for (const auto& branch : reduced) {
    Vector measured = Vector::Ones(1);
    for (int k = 0; k < depth; ++k) {
      std::span<const int> prefix(branch.path.data(), k);
      measured = Eigen::kroneckerProduct(measured, tree.basis(prefix).vector(branch.path[k])).eval();
    }
    Matrix full = Eigen::kroneckerProduct(Matrix(measured * measured.adjoint()), branch.block);
    post += full;
    BranchOutcome outcome{branch.path, branch.probability, std::nullopt};
    if (branch.probability >= tol::branch_probability) {
      outcome.post_state = QState(state.dims(), full / branch.probability);
    }
    branches.push_back(std::move(outcome));
  }
  return {QState(state.dims(), std::move(post)), std::move(branches)};
}

MeasurementTree optimal_tree_for_measured_state(const QState& state, int depth) {
  const Dims& dims = state.dims();
  if (depth < 1 || depth > state.subsystems()) throw StructureError("depth out of range");
  std::vector<std::vector<std::optional<ProjectorBasis>>> slots(depth);
  for (int k = 0; k < depth; ++k) slots[k].resize(count_paths(dims, k));
  std::vector<int> path;
  build_optimal_levels(state.matrix(), dims, 0, depth, path, slots);

  std::vector<std::vector<ProjectorBasis>> levels(depth);
  for (int k = 0; k < depth; ++k) {
    for (auto& slot : slots[k]) levels[k].push_back(std::move(*slot));
  }
  return MeasurementTree(dims, std::move(levels));
}

}  // namespace mdiscord
