#include "mdiscord/measure.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "mdiscord/oracle.hpp"
#include "test_util.hpp"

using namespace mdiscord;
using namespace mdiscord::testing;

namespace {

constexpr double kPi = std::numbers::pi;

MeasurementTree random_tree(const Dims& dims, int depth, std::uint64_t seed) {
  return tree_from_params(dims, depth, oracle::random_params(qubit_tree_nodes(depth), seed));
}

Vector ket(std::initializer_list<Complex> amplitudes) {
  Vector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (const Complex& a : amplitudes) v(i++) = a;
  return v.normalized();
}

}  // namespace

TEST(measure, projector_pair_examples) {
  ProjectorBasis z = projector_pair_from_angles(0, 0);
  EXPECT_LT(max_abs_diff(z.projector(0), ket_state({2}, 0).matrix()), 1e-15);
  EXPECT_LT(max_abs_diff(z.projector(1), ket_state({2}, 1).matrix()), 1e-15);

  ProjectorBasis x = projector_pair_from_angles(kPi / 4, 0);
  EXPECT_LT(max_abs_diff(x.projector(0), pure_state({2}, {1, 1}).matrix()), 1e-15);
  EXPECT_LT(max_abs_diff(x.projector(1), pure_state({2}, {1, -1}).matrix()), 1e-15);

  const Complex i(0, 1);
  ProjectorBasis y = projector_pair_from_angles(kPi / 4, kPi / 2);
  EXPECT_LT(max_abs_diff(y.projector(0), pure_state({2}, {1, i}).matrix()), 1e-15);
  EXPECT_LT(max_abs_diff(y.projector(1), pure_state({2}, {1, -i}).matrix()), 1e-15);
}

TEST(measure, projector_basis_invariants) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-10, 10);
  for (int k = 0; k < 50; ++k) {
    EXPECT_LT(projector_pair_from_angles(angle(rng), angle(rng)).invariant_violation(), 1e-10);
  }
  EXPECT_THROW(ProjectorBasis({ket({1, 0}), ket({1, 1})}), StructureError);
  EXPECT_THROW(ProjectorBasis({ket({1, 0})}), StructureError);
}

TEST(measure, parameter_counts) {
  EXPECT_EQ(qubit_tree_nodes(1), 1);
  EXPECT_EQ(qubit_tree_nodes(2), 3);
  EXPECT_EQ(qubit_tree_nodes(3), 7);
  for (int n = 2; n <= 5; ++n) {
    MeasParams p = z_params(n - 1);
    EXPECT_EQ(p.scalar_count(), static_cast<std::size_t>((1 << n) - 2));
  }
  EXPECT_EQ(qubit_node_path(0), std::vector<int>{});
  EXPECT_EQ(qubit_node_path(2), std::vector<int>{1});
  EXPECT_EQ(qubit_node_path(5), (std::vector<int>{1, 0}));
}

TEST(measure, tree_from_params_shapes) {
  MeasurementTree t = tree_from_params({2, 2}, 1, z_params(1));
  EXPECT_EQ(t.depth(), 1);
  EXPECT_LT(max_abs_diff(t.root().projector(0), ket_state({2}, 0).matrix()), 1e-15);

  MeasParams p = z_params(2);
  p.nodes[2] = {kPi / 4, 0};
  t = tree_from_params({2, 2, 2}, 2, p);
  const std::vector<int> one = {1};
  EXPECT_LT(max_abs_diff(t.basis(one).projector(0), pure_state({2}, {1, 1}).matrix()), 1e-15);

  EXPECT_EQ(tree_from_params({2, 2, 2, 2}, 3, z_params(3)).depth(), 3);
}

TEST(measure, tree_from_params_errors) {
  EXPECT_THROW(tree_from_params({2, 2, 2}, 2, z_params(1)), StructureError);
  EXPECT_THROW(tree_from_params({3, 2}, 1, z_params(1)), StructureError);
  EXPECT_THROW(tree_from_params({2, 2}, 3, z_params(3)), StructureError);
}

TEST(measure, apply_tree_examples) {
  MeasuredState m = apply_tree(cc_pair(), computational_tree({2, 2}, 1), 1);
  EXPECT_LT(max_abs_diff(m.post_state.matrix(), cc_pair().matrix()), 1e-15);

  // Optimal tree {|00>, |01>, |1+>, |1->}.
  MeasParams p = z_params(2);
  p.nodes[2] = {kPi / 4, 0};
  MeasurementTree opt = tree_from_params({2, 2}, 2, p);
  EXPECT_LT(max_abs_diff(apply_tree(cc_pair(), opt, 2).post_state.matrix(), cc_pair().matrix()), 1e-15);

  m = apply_tree(ghz3(), computational_tree({2, 2, 2}, 2), 1);
  Matrix expected = Matrix::Zero(8, 8);
  expected(0, 0) = expected(7, 7) = 0.5;
  EXPECT_LT(max_abs_diff(m.post_state.matrix(), expected), 1e-15);
  ASSERT_EQ(m.branches.size(), 2u);
  EXPECT_NEAR(m.branches[0].probability, 0.5, 1e-15);
  EXPECT_NEAR(m.branches[1].probability, 0.5, 1e-15);
  EXPECT_LT(max_abs_diff(m.branches[1].post_state->matrix(), ket_state({2, 2, 2}, 7).matrix()), 1e-15);
}

TEST(measure, zero_probability_branches_carry_no_state) {
  MeasuredState m = apply_tree(ket_state({2, 2}, 0), computational_tree({2, 2}, 2), 2);
  ASSERT_EQ(m.branches.size(), 4u);
  EXPECT_TRUE(m.branches[0].post_state.has_value());
  for (int k = 1; k < 4; ++k) {
    EXPECT_EQ(m.branches[k].probability, 0.0);
    EXPECT_FALSE(m.branches[k].post_state.has_value());
  }
}

TEST(measure, apply_tree_errors) {
  EXPECT_THROW(apply_tree(bell(), computational_tree({2, 2, 2}, 1), 1), StructureError);
  EXPECT_THROW(apply_tree(bell(), computational_tree({2, 2}, 1), 2), StructureError);
  EXPECT_THROW(apply_tree(bell(), computational_tree({2, 2}, 1), 0), StructureError);
}

TEST(measure, optimal_tree_examples) {
  MeasurementTree t = optimal_tree_for_measured_state(tensor(cc_pair(), ket_state({2}, 0)), 2);
  EXPECT_LT(max_abs_diff(t.root().projector(0), ket_state({2}, 0).matrix()), 1e-12);
  const std::vector<int> zero = {0}, one = {1};
  EXPECT_LT(max_abs_diff(t.basis(zero).projector(0) + t.basis(zero).projector(1), Matrix::Identity(2, 2)), 1e-12);
  // Child after outcome 1 is the X basis (in some order); child after 0 is Z.
  const Matrix x0 = t.basis(one).projector(0);
  EXPECT_NEAR(std::abs(x0(0, 1)), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(t.basis(zero).projector(0)(0, 1)), 0.0, 1e-12);

  QState s = ket_state({2, 2}, 1);
  EXPECT_LT(oracle::invariance_residual(s, optimal_tree_for_measured_state(s, 1)), 1e-12);
}

TEST(measure, contract_leading_matches_full_projection) {
  QState s = random_state({2, 3}, 6, 4);
  Vector v = ket({Complex(0.3, 0.2), Complex(-0.4, 0.7)});
  Matrix block = contract_leading(s.matrix(), 2, v);
  Matrix full = Eigen::kroneckerProduct(Matrix(v * v.adjoint()), Matrix::Identity(3, 3));
  Matrix projected = full * s.matrix() * full;
  Matrix expected = partial_trace(projected, {2, 3}, SubsetSpec{1});
  EXPECT_LT(max_abs_diff(block, expected), 1e-14);
}

TEST(measure_properties, completeness_and_trace) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    QState s = random_state({2, 2, 2}, 1 + seed % 8, seed);
    MeasurementTree t = random_tree(s.dims(), 2, seed + 1000);
    for (int depth = 1; depth <= 2; ++depth) {
      MeasuredState m = apply_tree(s, t, depth);
      double total = 0.0;
      for (const auto& b : m.branches) total += b.probability;
      EXPECT_NEAR(total, 1.0, 1e-9);
      EXPECT_NEAR(m.post_state.matrix().trace().real(), 1.0, 1e-9);
      EXPECT_TRUE(validate(m.post_state).pass());
      for (const auto& b : m.branches) {
        if (b.post_state) EXPECT_TRUE(validate(*b.post_state).pass());
      }
    }
  }
}

TEST(measure_properties, idempotence) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    QState s = random_state({2, 2, 2}, 1 + seed % 8, seed);
    MeasurementTree t = random_tree(s.dims(), 2, seed + 2000);
    for (int depth = 1; depth <= 2; ++depth) {
      QState once = apply_tree(s, t, depth).post_state;
      QState twice = apply_tree(once, t, depth).post_state;
      EXPECT_LT(max_abs_diff(once.matrix(), twice.matrix()), 1e-10);
    }
  }
}

TEST(measure_properties, optimal_tree_leaves_measured_states_invariant) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const Dims dims(n, 2);
    QState s = random_state(dims, 1 + static_cast<int>(seed % (1 << n)), seed);
    const int depth = 1 + static_cast<int>(seed % (n - 1));
    QState measured = apply_tree(s, random_tree(dims, depth, seed + 3000), depth).post_state;
    MeasurementTree opt = optimal_tree_for_measured_state(measured, depth);
    EXPECT_LT(max_abs_diff(apply_tree(measured, opt, depth).post_state.matrix(), measured.matrix()), 1e-10);
  }
}

TEST(measure_properties, reduced_branches_match_apply_tree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    QState s = random_state({2, 2, 2}, 1 + seed % 8, seed);
    MeasurementTree t = random_tree(s.dims(), 2, seed + 4000);
    auto reduced = reduced_branches(s, t, 2);
    auto full = apply_tree(s, t, 2).branches;
    ASSERT_EQ(reduced.size(), full.size());
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      EXPECT_EQ(reduced[k].path, full[k].path);
      EXPECT_NEAR(reduced[k].probability, full[k].probability, 1e-15);
      Matrix c = partial_trace(full[k].post_state->matrix(), s.dims(), SubsetSpec{2});
      EXPECT_LT(max_abs_diff(reduced[k].block / reduced[k].probability, c), 1e-12);
    }
  }
}
