#pragma once

#include <cmath>

#include "mdiscord/measure.hpp"
#include "mdiscord/qstate.hpp"

namespace mdiscord::testing {

inline QState pure_state(const Dims& dims, std::initializer_list<Complex> amplitudes) {
  Vector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (const Complex& a : amplitudes) v(i++) = a;
  v.normalize();
  return QState(dims, v * v.adjoint());
}

inline QState ket_state(const Dims& dims, int index) {
  const int side = product_of(dims);
  Matrix m = Matrix::Zero(side, side);
  m(index, index) = 1.0;
  return QState(dims, m);
}

inline QState mixed(const Dims& dims) {
  const int side = product_of(dims);
  return QState(dims, Matrix::Identity(side, side) / static_cast<double>(side));
}

inline QState bell() { return pure_state({2, 2}, {1, 0, 0, 1}); }

inline QState ghz3() { return pure_state({2, 2, 2}, {1, 0, 0, 0, 0, 0, 0, 1}); }

// (|00><00| + |1+><1+|)/2
inline QState cc_pair() {
  const double h = 0.5;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m(2, 2) = m(2, 3) = m(3, 2) = m(3, 3) = 0.5 * h;
  return QState({2, 2}, m);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline MeasParams z_params(int depth) {
  MeasParams p;
  p.nodes.assign(qubit_tree_nodes(depth), Angles{0.0, 0.0});
  return p;
}

}  // namespace mdiscord::testing
