#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mdiscord {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<int>;

/// Thrown when shapes, dimensions or index sets are inconsistent.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a matrix fails the density-matrix invariants on load.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-10;
/// Eigenvalues below this contribute nothing to an entropy.
inline constexpr double eigen_clamp = 1e-12;
/// Measurement branches below this probability carry no state.
inline constexpr double branch_probability = 1e-12;
}  // namespace tol

/// Ordered, strictly increasing set of subsystem positions.
class SubsetSpec {
 public:
  SubsetSpec(std::initializer_list<int> indices);
  explicit SubsetSpec(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(int index) const;
  bool disjoint(const SubsetSpec& other) const;
  SubsetSpec merged(const SubsetSpec& other) const;

  friend bool operator==(const SubsetSpec&, const SubsetSpec&) = default;

 private:
  std::vector<int> indices_;
};

/// Dense density matrix over an ordered list of subsystems.
///
/// Position 0 is the leftmost tensor factor and the most significant block
/// of the matrix index. Construction checks structure only (square matrix
/// whose side is the product of dims, every dim at least 2); physicality is
/// reported by validate().
class QState {
 public:
  QState(Dims dims, Matrix matrix);

  const Dims& dims() const { return dims_; }
  const Matrix& matrix() const { return matrix_; }
  int subsystems() const { return static_cast<int>(dims_.size()); }
  int side() const { return static_cast<int>(matrix_.rows()); }

 private:
  Dims dims_;
  Matrix matrix_;
};

struct ValidityReport {
  double hermiticity_deviation = 0.0;  // max |M - M^dagger| entry
  double trace_deviation = 0.0;        // |tr M - 1|
  double min_eigenvalue = 0.0;

  bool hermitian() const { return hermiticity_deviation < tol::hermitian; }
  bool unit_trace() const { return trace_deviation < tol::trace; }
  bool positive() const { return min_eigenvalue >= -tol::psd; }
  bool pass() const { return hermitian() && unit_trace() && positive(); }
  std::string describe() const;
};

ValidityReport validate(const Dims& dims, const Matrix& matrix);
ValidityReport validate(const QState& state);

/// Builds a state and throws InvalidStateError unless validate() passes.
QState make_valid_state(Dims dims, Matrix matrix);

int product_of(const Dims& dims);

QState tensor(const QState& a, const QState& b);
QState partial_trace(const QState& state, const SubsetSpec& keep);
Matrix partial_trace(const Matrix& matrix, const Dims& dims, const SubsetSpec& keep);

/// Reorders subsystems: subsystem q of the result is subsystem order[q] of the input.
QState permute(const QState& state, const std::vector<int>& order);

struct EigenSystem {
  Eigen::VectorXd values;  // descending
  Matrix vectors;          // orthonormal columns, matched to values
};

/// Hermitian eigendecomposition with a canonical output: eigenvalues in
/// descending order, each eigenvector phase-fixed so its first entry of
/// non-negligible magnitude is real and positive, and eigenvectors of
/// (numerically) equal eigenvalues ordered lexicographically by entries.
EigenSystem eig_hermitian(const Matrix& matrix);
EigenSystem eig_hermitian(const QState& state);

/// Eigenvalues only, descending. Closed form for 2x2.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& matrix);

/// von Neumann entropy in bits of a (possibly unnormalized) Hermitian matrix
/// whose spectrum is taken as given; no renormalization happens here.
double entropy_of_matrix(const Matrix& matrix);
double entropy(const QState& state);
double subsystem_entropy(const QState& state, const SubsetSpec& subset);

/// Normalized G G^dagger with G a seeded complex Gaussian side x rank matrix.
QState random_state(const Dims& dims, int rank, std::uint64_t seed);

/// Max-entry distance between two matrices of the same shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace mdiscord
