#include "mdiscord/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "mdiscord/discord.hpp"
#include "mdiscord/entropy_flux.hpp"
#include "mdiscord/parallel.hpp"

namespace mdiscord::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
  return splitmix(splitmix(seed ^ (salt << 32)) + index);
}

Vector angle_vector(double theta, double phi, int outcome) {
  const Complex e = std::polar(1.0, phi);
  Vector v(2);
  if (outcome == 0) {
    v << std::cos(theta), e * std::sin(theta);
  } else {
    v << std::sin(theta), -e * std::cos(theta);
  }
  return v;
}

// |v_1..v_k><v_1..v_k| (x) 1 on the full space.
Matrix full_projector(const std::vector<Vector>& prefix, const Dims& dims) {
  Vector v = Vector::Ones(1);
  for (const auto& factor : prefix) v = Eigen::kroneckerProduct(v, factor).eval();
  int rest = 1;
  for (std::size_t q = prefix.size(); q < dims.size(); ++q) rest *= dims[q];
  return Eigen::kroneckerProduct(Matrix(v * v.adjoint()), Matrix::Identity(rest, rest));
}

struct Branch {
  double p = 0.0;
  double s = 0.0;  // entropy of the normalized branch on the target subsystem
};

// Measures subsystem prefix.size() with `v` after the prefix projections and
// reports the branch weight and the entropy of subsystem prefix.size()+1.
Branch project(const QState& state, const std::vector<Vector>& path) {
  const Matrix proj = full_projector(path, state.dims());
  const Matrix sigma = proj * state.matrix() * proj;
  Branch b;
  b.p = sigma.trace().real();
  if (b.p < tol::branch_probability) return b;
  const int target = static_cast<int>(path.size());
  b.s = entropy(partial_trace(QState(state.dims(), sigma / b.p), SubsetSpec{target}));
  return b;
}

double base_term(const QState& state) {
  return -(entropy(state) - entropy(partial_trace(state, SubsetSpec{0})));
}

double subtree(const QState& state, std::vector<Vector>& prefix, const MeasParams& params, int node) {
  const int measured = state.subsystems() - 1;
  const int level = static_cast<int>(prefix.size());
  double total = 0.0;
  for (int o = 0; o < 2; ++o) {
    prefix.push_back(angle_vector(params.nodes[node].theta, params.nodes[node].phi, o));
    const Branch b = project(state, prefix);
    if (b.p >= tol::branch_probability) {
      total += b.p * b.s;
      if (level + 1 < measured) {
        // Child of node (level, offset) for outcome o sits at level+1, offset 2*offset+o.
        const int offset = node - ((1 << level) - 1);
        total += subtree(state, prefix, params, (1 << (level + 1)) - 1 + 2 * offset + o);
      }
    }
    prefix.pop_back();
  }
  return total;
}

double grid_subtree(const QState& state, std::vector<Vector>& prefix, int points) {
  const int measured = state.subsystems() - 1;
  const int level = static_cast<int>(prefix.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double theta = i * (kPi / 2.0) / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double phi = j * 2.0 * kPi / points;
      double total = 0.0;
      for (int o = 0; o < 2; ++o) {
        prefix.push_back(angle_vector(theta, phi, o));
        const Branch b = project(state, prefix);
        if (b.p >= tol::branch_probability) {
          total += b.p * b.s;
          if (level + 1 < measured) total += grid_subtree(state, prefix, points);
        }
        prefix.pop_back();
      }
      best = std::min(best, total);
    }
  }
  return best;
}

QState restrict_to(const QState& state, int level) {
  if (level < 2 || level > state.subsystems()) throw StructureError("level out of range");
  if (level == state.subsystems()) return state;
  std::vector<int> keep;
  for (int q = 0; q < level; ++q) keep.push_back(q);
  return partial_trace(state, SubsetSpec(keep));
}

void require_measured_qubits(const QState& state) {
  for (int q = 0; q + 1 < state.subsystems(); ++q) {
    if (state.dims()[q] != 2) throw StructureError("measured subsystems must be qubits");
  }
}

int random_rank(std::mt19937_64& rng, int side) { return 1 + static_cast<int>(rng() % side); }

QState random_three_qubit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state({2, 2, 2}, random_rank(rng, 8), rng());
}

QState random_two_qubit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state({2, 2}, random_rank(rng, 4), rng());
}

struct Sampled {
  QState state;
  MeasurementTree tree;
};

Sampled sample_three(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QState state = random_three_qubit(rng());
  return {state, tree_from_params(state.dims(), 2, random_params(3, rng()))};
}

// Runs `violation(i)` for every sample and keeps the largest value.
VerifyReport run_check(const std::string& name, int samples, double tolerance,
                       const std::function<double(int)>& violation) {
  std::vector<double> values(samples, 0.0);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) { values[i] = violation(static_cast<int>(i)); });
  double worst = 0.0;
  for (double v : values) {
    if (std::isnan(v)) {
      worst = std::numeric_limits<double>::infinity();
      break;
    }
    worst = std::max(worst, v);
  }
  return {name, samples, worst, tolerance, worst < tolerance};
}

void sort_reports(std::vector<VerifyReport>& reports) {
  std::sort(reports.begin(), reports.end(),
            [](const VerifyReport& a, const VerifyReport& b) { return a.check < b.check; });
}

double negative_part(double x) { return std::max(0.0, -x); }

}  // namespace

MeasParams random_params(int node_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(0.0, kPi / 2.0);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  MeasParams params;
  for (int k = 0; k < node_count; ++k) {
    const double t = theta(rng);
    params.nodes.push_back({t, phi(rng)});
  }
  return params;
}

double objective(const QState& state, const MeasParams& params) {
  if (state.subsystems() < 2) throw StructureError("objective needs at least two subsystems");
  require_measured_qubits(state);
  if (static_cast<int>(params.nodes.size()) != (1 << (state.subsystems() - 1)) - 1) {
    throw StructureError("parameter count does not match the tree");
  }
  std::vector<Vector> prefix;
  return base_term(state) + subtree(state, prefix, params, 0);
}

double dense_grid_min(const QState& state, int level, int points_per_angle) {
  if (points_per_angle < 2) throw std::invalid_argument("need at least two grid points per angle");
  const QState restricted = restrict_to(state, level);
  require_measured_qubits(restricted);
  std::vector<Vector> prefix;
  return base_term(restricted) + grid_subtree(restricted, prefix, points_per_angle);
}

double invariance_residual(const QState& state, const MeasurementTree& tree) {
  if (state.dims() != tree.dims()) throw StructureError("tree dims do not match state dims");
  const int depth = tree.depth();
  Matrix projected = Matrix::Zero(state.side(), state.side());
  for (const auto& path : tree.paths(depth)) {
    std::vector<Vector> vectors;
    for (int k = 0; k < depth; ++k) {
      std::span<const int> prefix(path.data(), k);
      vectors.push_back(tree.basis(prefix).vector(path[k]));
    }
    const Matrix proj = full_projector(vectors, state.dims());
    projected += proj * state.matrix() * proj;
  }
  return max_abs_diff(state.matrix(), projected);
}

std::vector<VerifyReport> identity_suite(std::uint64_t seed, int samples, Fault fault) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  constexpr double tol = 1e-9;
  std::vector<VerifyReport> reports;

  reports.push_back(run_check("measured_cond_entropy", samples, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 1, i));
    const QState rho1 = apply_tree(s.state, s.tree, 1).post_state;
    const double b = cond_entropy_measured(s.state, s.tree, 1, SubsetSpec{1}) -
                     (subsystem_entropy(rho1, {0, 1}) - subsystem_entropy(rho1, {0}));
    const double bc = cond_entropy_measured(s.state, s.tree, 1) - (entropy(rho1) - subsystem_entropy(rho1, {0}));
    return std::max(std::abs(b), std::abs(bc));
  }));

  reports.push_back(run_check("measured_chain_rule", samples, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 2, i));
    const QState rho2 = apply_tree(s.state, s.tree, 2).post_state;
    const double lhs = entropy(rho2) - subsystem_entropy(rho2, {0}) -
                       cond_entropy_measured(rho2, s.tree, 1, SubsetSpec{1});
    return std::abs(lhs - cond_entropy_measured(s.state, s.tree, 2, SubsetSpec{2}));
  }));

  reports.push_back(run_check("d_decomposition", samples, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 3, i));
    const ConditionalDiscords cond = delta_cond_discord(s.state, s.tree);
    double monogamy = delta_monogamy(s.state, s.tree);
    if (fault == Fault::flip_monogamy_sign) monogamy = -monogamy;
    const double d = d_unminimized(s.state, s.tree, {0}, {1, 2});
    return std::abs(d - (cond.ab_c + cond.ac_b + monogamy));
  }));

  reports.push_back(run_check("discord_decomposition", samples, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 4, i));
    const ConditionalDiscords cond = delta_cond_discord(s.state, s.tree);
    const double sum =
        cond.ab_c + cond.ac_b + delta_post_discord(s.state, s.tree) + delta_monogamy(s.state, s.tree);
    const double objective_value = objective_tripartite(s.state, s.tree);
    const double via_d = d_unminimized(s.state, s.tree, {0}, {1, 2}) + delta_post_discord(s.state, s.tree);
    return std::max(std::abs(objective_value - sum), std::abs(objective_value - via_d));
  }));

  reports.push_back(run_check("post_discord_entropy", samples, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 5, i));
    const QState rho1 = apply_tree(s.state, s.tree, 1).post_state;
    const QState rho2 = apply_tree(s.state, s.tree, 2).post_state;
    const double rhs = cond_entropy(rho2, {2}, {0, 1}) - cond_entropy(rho1, {2}, {0, 1});
    return std::abs(delta_post_discord(s.state, s.tree) - rhs);
  }));

  sort_reports(reports);
  return reports;
}

std::vector<VerifyReport> verify_suite(const SuiteOptions& options) {
  const std::uint64_t seed = options.seed;
  const int n = options.samples;
  if (n < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<VerifyReport> reports = identity_suite(seed, n, options.fault);
  constexpr double tol = 1e-9;

  reports.push_back(run_check("cross_objective", n, 1e-10, [&](int i) {
    std::mt19937_64 rng(sample_seed(seed, 10, i));
    const int parties = 2 + static_cast<int>(i % 3);
    const Dims dims(parties, 2);
    const QState state = random_state(dims, random_rank(rng, 1 << parties), rng());
    const MeasParams params = random_params((1 << (parties - 1)) - 1, rng());
    return std::abs(objective(state, params) - NPartiteObjective(state)(params));
  }));

  reports.push_back(run_check("flux_consistency", n, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 11, i));
    return flux_report(s.state, s.tree).front().consistency_violation;
  }));

  reports.push_back(run_check("nonneg_objective", n, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 12, i));
    return negative_part(objective_tripartite(s.state, s.tree));
  }));

  reports.push_back(run_check("nonneg_d", n, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 13, i));
    return std::max({negative_part(d_unminimized(s.state, s.tree, {0}, {1})),
                     negative_part(d_unminimized(s.state, s.tree, {0}, {2})),
                     negative_part(d_unminimized(s.state, s.tree, {0}, {1, 2}))});
  }));

  reports.push_back(run_check("nonneg_delta", n, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 14, i));
    const ConditionalDiscords cond = delta_cond_discord(s.state, s.tree);
    return std::max({negative_part(cond.ab_c), negative_part(cond.ac_b),
                     negative_part(delta_post_discord(s.state, s.tree))});
  }));

  reports.push_back(run_check("strong_subadditivity", n, tol, [&](int i) {
    const QState state = random_three_qubit(sample_seed(seed, 15, i));
    const TripartiteInfo info = tripartite_infos(state);
    return std::max({negative_part(info.ab_c), negative_part(info.ac_b), negative_part(info.bc_a)});
  }));

  reports.push_back(run_check("invariance_optimal_tree", n, 1e-10, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 16, i));
    const int depth = 1 + static_cast<int>(i % 2);
    const QState measured = apply_tree(s.state, s.tree, depth).post_state;
    return invariance_residual(measured, optimal_tree_for_measured_state(measured, depth));
  }));

  reports.push_back(run_check("measured_ijk", n, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 17, i));
    const QState measured = apply_tree(s.state, s.tree, 2).post_state;
    const MeasuredMutualInfos m = measured_mutual_infos(measured, s.tree);
    double worst = 0.0;
    for (const TripartiteInfo* other : {&m.j, &m.k}) {
      worst = std::max({worst, std::abs(m.i.ab_c - other->ab_c), std::abs(m.i.ac_b - other->ac_b),
                        std::abs(m.i.bc_a - other->bc_a), std::abs(m.i.abc - other->abc)});
    }
    return worst;
  }));

  reports.push_back(run_check("measured_zero_objective", n, tol, [&](int i) {
    const Sampled s = sample_three(sample_seed(seed, 18, i));
    const QState measured = apply_tree(s.state, s.tree, 2).post_state;
    return std::abs(objective_tripartite(measured, s.tree));
  }));

  reports.push_back(run_check("product_monogamy", n, tol, [&](int i) {
    std::mt19937_64 rng(sample_seed(seed, 19, i));
    const QState ab = random_two_qubit(rng());
    const QState c = random_state({2}, 1 + static_cast<int>(rng() % 2), rng());
    const QState state = tensor(ab, c);
    return std::abs(delta_monogamy(state, tree_from_params(state.dims(), 2, random_params(3, rng()))));
  }));

  reports.push_back(run_check("reduction_delta", n, tol, [&](int i) {
    std::mt19937_64 rng(sample_seed(seed, 20, i));
    const QState ab = random_two_qubit(rng());
    const QState c = random_state({2}, 1 + static_cast<int>(rng() % 2), rng());
    const QState state = tensor(ab, c);
    const MeasParams params = random_params(3, rng());
    const double d = d_unminimized(ab, tree_from_params(ab.dims(), 1, {{params.nodes[0]}}), {0}, {1});
    return std::abs(delta_cond_discord(state, tree_from_params(state.dims(), 2, params)).ab_c - d);
  }));

  if (options.optimization_samples > 0) {
    const int m = options.optimization_samples;
    reports.push_back(run_check("two_measurement_equivalence", m, 1e-5, [&](int i) {
      const QState state = random_two_qubit(sample_seed(seed, 21, i));
      return std::abs(discord_two_measurement(state).value - discord(state, {0, 1}).value);
    }));
    reports.push_back(run_check("bipartite_reduction", m, 1e-5, [&](int i) {
      std::mt19937_64 rng(sample_seed(seed, 22, i));
      const QState ab = random_state({2, 2}, 2, rng());
      const QState c = random_state({2}, 1 + static_cast<int>(rng() % 2), rng());
      return std::abs(discord(tensor(ab, c), {0, 1, 2}).value - discord(ab, {0, 1}).value);
    }));
  }

  sort_reports(reports);
  return reports;
}

}  // namespace mdiscord::oracle
