#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdiscord/qstate.hpp"

namespace mdiscord {

enum class Family {
  werner_ghz,
  werner_w,
  bell_mixture,
  classical_quantum_mix,
  cc_example,
  ghz,
  w_state,
  product,
  explicit_state,
};

/// Canonical family names as used on the command line and in JSON.
std::string family_name(Family family);
/// Throws std::invalid_argument for an unknown name.
Family family_from_name(const std::string& name);
const std::vector<Family>& all_families();
bool family_uses_mu(Family family);

struct StateSpec {
  Family family = Family::ghz;
  std::optional<double> mu;
  /// Qubit count for ghz, w_state and product (default 3).
  std::optional<int> qubits;
  std::optional<QState> explicit_state;

  /// Throws std::invalid_argument when mu, qubits or the explicit matrix is
  /// missing, superfluous or out of range.
  void check() const;
};

/// werner_ghz: mu |GHZ><GHZ| + (1-mu) 1/8
/// werner_w: mu |W><W| + (1-mu) 1/8 with |W> = (|001>+|010>+|100>)/sqrt3
/// bell_mixture: mu |Phi_AB><Phi_AB| + (1-mu) |Phi_AC><Phi_AC| with
///   |Phi_AB> = (|000>+|110>)/sqrt2 and |Phi_AC> = (|000>+|101>)/sqrt2
/// classical_quantum_mix: mu |000><000| + (1-mu) |+++><+++|
/// cc_example: (|00><00| + |1+><1+|)/2 (x) |0><0|
/// product: fixed mixed single-qubit factors
QState build(const StateSpec& spec);

QState ghz_state(int qubits);
QState w_state(int qubits);
QState product_state(int qubits);
/// (|00> + |11>)/sqrt2
QState bell_state();

}  // namespace mdiscord
