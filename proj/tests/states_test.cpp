#include "mdiscord/states.hpp"

#include <gtest/gtest.h>

#include "mdiscord/entropy_flux.hpp"
#include "test_util.hpp"

using namespace mdiscord;
using namespace mdiscord::testing;

namespace {

StateSpec mu_spec(Family f, double mu) { return StateSpec{f, mu, {}, {}}; }

}  // namespace

TEST(states, werner_ghz_endpoints) {
  EXPECT_LT(max_abs_diff(build(mu_spec(Family::werner_ghz, 0)).matrix(), mixed({2, 2, 2}).matrix()), 1e-15);
  QState pure = build(mu_spec(Family::werner_ghz, 1));
  EXPECT_NEAR(entropy(pure), 0.0, 1e-12);
  EXPECT_LT(max_abs_diff(pure.matrix(), ghz3().matrix()), 1e-15);
}

TEST(states, bell_mixture_endpoint) {
  QState s = build(mu_spec(Family::bell_mixture, 1));
  EXPECT_LT(max_abs_diff(s.matrix(), tensor(bell(), ket_state({2}, 0)).matrix()), 1e-15);
  QState other = build(mu_spec(Family::bell_mixture, 0));
  EXPECT_LT(max_abs_diff(other.matrix(), permute(tensor(bell(), ket_state({2}, 0)), {0, 2, 1}).matrix()), 1e-15);
}

TEST(states, w_state_is_standard) {
  QState w = build(mu_spec(Family::werner_w, 1));
  EXPECT_NEAR(w.matrix()(1, 1).real(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(w.matrix()(2, 2).real(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(w.matrix()(4, 4).real(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(w.matrix()(1, 4).real(), 1.0 / 3, 1e-15);
}

TEST(states, classical_quantum_mix_endpoints) {
  EXPECT_LT(max_abs_diff(build(mu_spec(Family::classical_quantum_mix, 1)).matrix(), ket_state({2, 2, 2}, 0).matrix()),
            1e-15);
  QState plus = build(mu_spec(Family::classical_quantum_mix, 0));
  EXPECT_LT(max_abs_diff(plus.matrix(), Matrix::Constant(8, 8, 1.0 / 8)), 1e-15);
}

TEST(states, cc_example) {
  QState cc = build(StateSpec{Family::cc_example, {}, {}, {}});
  EXPECT_LT(max_abs_diff(cc.matrix(), tensor(cc_pair(), ket_state({2}, 0)).matrix()), 1e-15);
}

TEST(states, qubit_counts) {
  StateSpec g{Family::ghz, {}, 2, {}};
  EXPECT_LT(max_abs_diff(build(g).matrix(), bell().matrix()), 1e-15);
  StateSpec p{Family::product, {}, 4, {}};
  QState prod = build(p);
  EXPECT_EQ(prod.dims(), (Dims{2, 2, 2, 2}));
  EXPECT_NEAR(mutual_info(prod, {0, 1}, {2, 3}), 0.0, 1e-12);
  EXPECT_GT(entropy(prod), 0.1);
  EXPECT_EQ(build(StateSpec{Family::w_state, {}, {}, {}}).dims(), (Dims{2, 2, 2}));
}

TEST(states, spec_errors) {
  EXPECT_THROW(build(mu_spec(Family::werner_ghz, 1.5)), std::invalid_argument);
  EXPECT_THROW(build(mu_spec(Family::werner_ghz, -0.1)), std::invalid_argument);
  EXPECT_THROW(build(StateSpec{Family::werner_ghz, {}, {}, {}}), std::invalid_argument);
  EXPECT_THROW(build(mu_spec(Family::ghz, 0.5)), std::invalid_argument);
  EXPECT_THROW(build(StateSpec{Family::explicit_state, {}, {}, {}}), std::invalid_argument);
  EXPECT_THROW(build(StateSpec{Family::cc_example, {}, 3, {}}), std::invalid_argument);
  EXPECT_THROW(family_from_name("nope"), std::invalid_argument);
}

TEST(states, names_round_trip) {
  for (Family f : all_families()) EXPECT_EQ(family_from_name(family_name(f)), f);
  EXPECT_EQ(family_name(Family::explicit_state), "explicit");
}

TEST(states_properties, every_family_is_valid_on_the_mu_grid) {
  for (Family f : all_families()) {
    if (f == Family::explicit_state) continue;
    for (int i = 0; i <= 20; ++i) {
      StateSpec spec{f, {}, {}, {}};
      if (family_uses_mu(f)) spec.mu = i / 20.0;
      EXPECT_TRUE(validate(build(spec)).pass()) << family_name(f) << " " << i;
    }
  }
}

TEST(states_properties, werner_families_are_affine) {
  for (Family f : {Family::werner_ghz, Family::werner_w}) {
    const Matrix one = build(mu_spec(f, 1)).matrix();
    const Matrix zero = build(mu_spec(f, 0)).matrix();
    for (int i = 0; i <= 20; ++i) {
      const double mu = i / 20.0;
      EXPECT_EQ(build(mu_spec(f, mu)).matrix(), Matrix(mu * one + (1.0 - mu) * zero));
    }
  }
}
