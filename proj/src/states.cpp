#include "mdiscord/states.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiscord {

namespace {

QState pure(const Vector& psi, int qubits) {
  Vector v = psi / psi.norm();
  return QState(Dims(qubits, 2), v * v.adjoint());
}

Vector basis_ket(int side, std::initializer_list<int> indices) {
  Vector v = Vector::Zero(side);
  for (int i : indices) v(i) += 1.0;
  return v;
}

QState mix(double mu, const QState& a, const QState& b) {
  return QState(a.dims(), mu * a.matrix() + (1.0 - mu) * b.matrix());
}

QState maximally_mixed(int qubits) {
  const int side = 1 << qubits;
  return QState(Dims(qubits, 2), Matrix::Identity(side, side) / static_cast<double>(side));
}

QState qubit_from_bloch(double x, double y, double z) {
  Matrix m(2, 2);
  m << Complex(1.0 + z, 0.0), Complex(x, -y), Complex(x, y), Complex(1.0 - z, 0.0);
  return QState({2}, 0.5 * m);
}

struct FamilyEntry {
  Family family;
  const char* name;
};

constexpr FamilyEntry kFamilies[] = {
    {Family::werner_ghz, "werner_ghz"},
    {Family::werner_w, "werner_w"},
    {Family::bell_mixture, "bell_mixture"},
    {Family::classical_quantum_mix, "classical_quantum_mix"},
    {Family::cc_example, "cc_example"},
    {Family::ghz, "ghz"},
    {Family::w_state, "w_state"},
    {Family::product, "product"},
    {Family::explicit_state, "explicit"},
};

bool family_uses_qubits(Family family) {
  return family == Family::ghz || family == Family::w_state || family == Family::product;
}

}  // namespace

std::string family_name(Family family) {
  for (const auto& entry : kFamilies) {
    if (entry.family == family) return entry.name;
  }
  throw std::invalid_argument("unknown family");
}

Family family_from_name(const std::string& name) {
  for (const auto& entry : kFamilies) {
    if (name == entry.name) return entry.family;
  }
  throw std::invalid_argument("unknown state family '" + name + "'");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& entry : kFamilies) out.push_back(entry.family);
    return out;
  }();
  return families;
}

bool family_uses_mu(Family family) {
  return family == Family::werner_ghz || family == Family::werner_w || family == Family::bell_mixture ||
         family == Family::classical_quantum_mix;
}

void StateSpec::check() const {
  const std::string name = family_name(family);
  if (family_uses_mu(family)) {
    if (!mu) throw std::invalid_argument("family " + name + " needs mu");
    if (!(*mu >= 0.0 && *mu <= 1.0)) throw std::invalid_argument("mu must lie in [0, 1]");
  } else if (mu) {
    throw std::invalid_argument("family " + name + " takes no mu");
  }
  if (qubits) {
    if (!family_uses_qubits(family)) throw std::invalid_argument("family " + name + " takes no qubit count");
    if (*qubits < 2 || *qubits > 6) throw std::invalid_argument("qubits must lie in [2, 6]");
  }
  if ((family == Family::explicit_state) != explicit_state.has_value()) {
    throw std::invalid_argument("an explicit matrix is required exactly for the explicit family");
  }
}

QState ghz_state(int qubits) {
  const int side = 1 << qubits;
  return pure(basis_ket(side, {0, side - 1}), qubits);
}

QState w_state(int qubits) {
  const int side = 1 << qubits;
  Vector v = Vector::Zero(side);
  for (int q = 0; q < qubits; ++q) v(1 << q) = 1.0;
  return pure(v, qubits);
}

QState bell_state() { return ghz_state(2); }

QState product_state(int qubits) {
  QState out = qubit_from_bloch(0.3, -0.2, 0.5);
  for (int q = 1; q < qubits; ++q) {
    const double a = 0.4 + 0.1 * q;
    out = tensor(out, qubit_from_bloch(0.5 * std::cos(a * q), 0.5 * std::sin(a * q), 0.2 - 0.15 * q));
  }
  return out;
}

QState build(const StateSpec& spec) {
  spec.check();
  const double mu = spec.mu.value_or(0.0);
  const int qubits = spec.qubits.value_or(3);
  switch (spec.family) {
    case Family::werner_ghz:
      return mix(mu, ghz_state(3), maximally_mixed(3));
    case Family::werner_w:
      return mix(mu, w_state(3), maximally_mixed(3));
    case Family::bell_mixture:
      return mix(mu, pure(basis_ket(8, {0b000, 0b110}), 3), pure(basis_ket(8, {0b000, 0b101}), 3));
    case Family::classical_quantum_mix: {
      const Vector plus = Vector::Ones(8);
      return mix(mu, pure(basis_ket(8, {0}), 3), pure(plus, 3));
    }
    case Family::cc_example: {
      // |1+> = (|10> + |11>)/sqrt2
      Matrix ab = pure(basis_ket(4, {0}), 2).matrix() + pure(basis_ket(4, {2, 3}), 2).matrix();
      return tensor(QState({2, 2}, 0.5 * ab), pure(basis_ket(2, {0}), 1));
    }
    case Family::ghz:
      return ghz_state(qubits);
    case Family::w_state:
      return w_state(qubits);
    case Family::product:
      return product_state(qubits);
    case Family::explicit_state:
      return *spec.explicit_state;
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace mdiscord
