#include "mdiscord/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace mdiscord {

namespace {

std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int q = static_cast<int>(dims.size()) - 2; q >= 0; --q) {
    strides[q] = strides[q + 1] * dims[q + 1];
  }
  return strides;
}

void check_subset_range(const SubsetSpec& subset, const Dims& dims) {
  for (int index : subset.indices()) {
    if (index >= static_cast<int>(dims.size())) {
      throw StructureError("subsystem index " + std::to_string(index) + " out of range for " +
                           std::to_string(dims.size()) + " subsystems");
    }
  }
}

bool lexicographically_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

SubsetSpec::SubsetSpec(std::initializer_list<int> indices)
    : SubsetSpec(std::vector<int>(indices)) {}

SubsetSpec::SubsetSpec(std::vector<int> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw StructureError("subset must not be empty");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) throw StructureError("subset index must be non-negative");
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw StructureError("subset indices must be strictly increasing");
    }
  }
}

bool SubsetSpec::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool SubsetSpec::disjoint(const SubsetSpec& other) const {
  return std::none_of(indices_.begin(), indices_.end(),
                      [&](int i) { return other.contains(i); });
}

SubsetSpec SubsetSpec::merged(const SubsetSpec& other) const {
  std::vector<int> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  return SubsetSpec(std::move(out));
}

int product_of(const Dims& dims) {
  int side = 1;
  for (int d : dims) side *= d;
  return side;
}

QState::QState(Dims dims, Matrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (dims_.empty()) throw StructureError("state needs at least one subsystem");
  for (int d : dims_) {
    if (d < 2) throw StructureError("subsystem dimensions must be at least 2");
  }
  if (matrix_.rows() != matrix_.cols()) throw StructureError("density matrix must be square");
  if (matrix_.rows() != product_of(dims_)) {
    throw StructureError("matrix side " + std::to_string(matrix_.rows()) +
                         " does not match product of dims " + std::to_string(product_of(dims_)));
  }
}

std::string ValidityReport::describe() const {
  std::ostringstream out;
  out << "hermiticity deviation " << hermiticity_deviation << (hermitian() ? " ok" : " FAIL")
      << "; trace deviation " << trace_deviation << (unit_trace() ? " ok" : " FAIL")
      << "; min eigenvalue " << min_eigenvalue << (positive() ? " ok" : " FAIL");
  return out.str();
}

ValidityReport validate(const Dims& dims, const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw StructureError("density matrix must be square");
  if (matrix.rows() != product_of(dims)) {
    throw StructureError("matrix side does not match product of dims");
  }
  ValidityReport report;
  report.hermiticity_deviation = max_abs_diff(matrix, matrix.adjoint());
  report.trace_deviation = std::abs(matrix.trace() - Complex(1.0, 0.0));
  Matrix hermitian_part = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  return report;
}

ValidityReport validate(const QState& state) { return validate(state.dims(), state.matrix()); }

QState make_valid_state(Dims dims, Matrix matrix) {
  ValidityReport report = validate(dims, matrix);
  if (!report.pass()) throw InvalidStateError("invalid density matrix: " + report.describe());
  return QState(std::move(dims), std::move(matrix));
}

QState tensor(const QState& a, const QState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Matrix product = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  return QState(std::move(dims), std::move(product));
}

Matrix partial_trace(const Matrix& matrix, const Dims& dims, const SubsetSpec& keep) {
  check_subset_range(keep, dims);
  const int n = static_cast<int>(dims.size());
  const int side = product_of(dims);
  std::vector<int> strides = strides_of(dims);

  int kept_side = 1;
  int traced_side = 1;
  for (int q = 0; q < n; ++q) {
    (keep.contains(q) ? kept_side : traced_side) *= dims[q];
  }

  // Split every full index into (kept index, traced index), both mixed radix
  // with the original subsystem order.
  std::vector<int> kept_of(side), traced_of(side);
  for (int i = 0; i < side; ++i) {
    int kept = 0, traced = 0;
    for (int q = 0; q < n; ++q) {
      int digit = (i / strides[q]) % dims[q];
      if (keep.contains(q)) {
        kept = kept * dims[q] + digit;
      } else {
        traced = traced * dims[q] + digit;
      }
    }
    kept_of[i] = kept;
    traced_of[i] = traced;
  }

  std::vector<std::vector<int>> by_traced(traced_side);
  for (int i = 0; i < side; ++i) by_traced[traced_of[i]].push_back(i);

  Matrix out = Matrix::Zero(kept_side, kept_side);
  for (const auto& group : by_traced) {
    for (int i : group) {
      for (int j : group) out(kept_of[i], kept_of[j]) += matrix(i, j);
    }
  }
  return out;
}

QState partial_trace(const QState& state, const SubsetSpec& keep) {
  Matrix reduced = partial_trace(state.matrix(), state.dims(), keep);
  Dims dims;
  for (int q : keep.indices()) dims.push_back(state.dims()[q]);
  return QState(std::move(dims), std::move(reduced));
}

QState permute(const QState& state, const std::vector<int>& order) {
  const int n = state.subsystems();
  if (static_cast<int>(order.size()) != n) throw StructureError("permutation has wrong length");
  std::vector<int> seen(n, 0);
  for (int q : order) {
    if (q < 0 || q >= n || seen[q]++) throw StructureError("order is not a permutation");
  }
  Dims new_dims(n);
  for (int q = 0; q < n; ++q) new_dims[q] = state.dims()[order[q]];
  std::vector<int> old_strides = strides_of(state.dims());
  std::vector<int> new_strides = strides_of(new_dims);

  const int side = state.side();
  std::vector<int> new_index(side);
  for (int i = 0; i < side; ++i) {
    int idx = 0;
    for (int q = 0; q < n; ++q) {
      int digit = (i / old_strides[order[q]]) % state.dims()[order[q]];
      idx += digit * new_strides[q];
    }
    new_index[i] = idx;
  }
  Matrix out(side, side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) out(new_index[i], new_index[j]) = state.matrix()(i, j);
  }
  return QState(std::move(new_dims), std::move(out));
}

EigenSystem eig_hermitian(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw StructureError("matrix must be square");
  if (max_abs_diff(matrix, matrix.adjoint()) >= tol::hermitian) {
    throw StructureError("matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix);
  const Eigen::Index n = matrix.rows();

  std::vector<Vector> vectors(n);
  std::vector<double> values(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector v = solver.eigenvectors().col(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-8) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    vectors[k] = v;
    values[k] = solver.eigenvalues()(k);
  }

  std::vector<Eigen::Index> order(n);
  for (Eigen::Index k = 0; k < n; ++k) order[k] = k;
  constexpr double tie = 1e-10;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(values[a] - values[b]) > tie) return values[a] > values[b];
    return lexicographically_less(vectors[a], vectors[b]);
  });

  EigenSystem out{Eigen::VectorXd(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = values[order[k]];
    out.vectors.col(k) = vectors[order[k]];
  }
  return out;
}

EigenSystem eig_hermitian(const QState& state) { return eig_hermitian(state.matrix()); }

Eigen::VectorXd hermitian_eigenvalues(const Matrix& matrix) {
  const Eigen::Index n = matrix.rows();
  Eigen::VectorXd out(n);
  if (n == 1) {
    out(0) = matrix(0, 0).real();
    return out;
  }
  if (n == 2) {
    const double a = matrix(0, 0).real();
    const double d = matrix(1, 1).real();
    const Complex b = 0.5 * (matrix(0, 1) + std::conj(matrix(1, 0)));
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(b));
    out << mean + radius, mean - radius;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double entropy_of_matrix(const Matrix& matrix) {
  Eigen::VectorXd values = hermitian_eigenvalues(matrix);
  double s = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double lambda = values(k);
    if (lambda > tol::eigen_clamp) s -= lambda * std::log2(lambda);
  }
  return s;
}

double entropy(const QState& state) { return entropy_of_matrix(state.matrix()); }

double subsystem_entropy(const QState& state, const SubsetSpec& subset) {
  if (static_cast<int>(subset.size()) == state.subsystems()) {
    check_subset_range(subset, state.dims());
    return entropy(state);
  }
  return entropy_of_matrix(partial_trace(state.matrix(), state.dims(), subset));
}

QState random_state(const Dims& dims, int rank, std::uint64_t seed) {
  const int side = product_of(dims);
  if (rank < 1 || rank > side) {
    throw std::invalid_argument("rank must lie between 1 and " + std::to_string(side));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(side, rank);
  for (int c = 0; c < rank; ++c) {
    for (int r = 0; r < side; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QState(dims, std::move(rho));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructureError("shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace mdiscord
