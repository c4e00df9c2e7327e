#include "mdiscord/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mdiscord/parallel.hpp"

namespace mdiscord {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInitialEdge = 0.1;
// A small objective spread alone only pins the angles to about sqrt(simplex_tol).
constexpr double kSimplexSizeTol = 1e-7;

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.grid_index < b.grid_index;
}

std::vector<double> to_scalars(const MeasParams& params) {
  std::vector<double> out;
  out.reserve(params.scalar_count());
  for (const auto& node : params.nodes) {
    out.push_back(node.theta);
    out.push_back(node.phi);
  }
  return out;
}

struct SimplexRun {
  double value;
  std::vector<double> point;
  bool converged;
};

class Simplex {
 public:
  Simplex(const Objective& objective, const OptimizerConfig& config, std::uint64_t& evaluations)
      : objective_(objective), config_(config), evaluations_(evaluations) {}

  SimplexRun run(const std::vector<double>& start, double start_value, const std::vector<int>& signs) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> x(n + 1, start);
    std::vector<double> f(n + 1, start_value);
    for (std::size_t i = 0; i < n; ++i) {
      x[i + 1][i] += signs[i] * kInitialEdge;
      f[i + 1] = eval(x[i + 1]);
    }

    bool converged = false;
    std::vector<std::size_t> order(n + 1);
    for (int iter = 0; iter < config_.simplex_max_iters; ++iter) {
      for (std::size_t i = 0; i <= n; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
      reorder(x, f, order);
      if (f[n] - f[0] < config_.simplex_tol && size(x) < kSimplexSizeTol) {
        converged = true;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) centroid[k] += x[i][k] / static_cast<double>(n);
      }
      auto along = [&](double t, const std::vector<double>& toward) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (toward[k] - centroid[k]);
        return p;
      };

      std::vector<double> xr = along(-1.0, x[n]);
      const double fr = eval(xr);
      if (fr < f[0]) {
        std::vector<double> xe = along(-2.0, x[n]);
        const double fe = eval(xe);
        if (fe < fr) {
          x[n] = std::move(xe);
          f[n] = fe;
        } else {
          x[n] = std::move(xr);
          f[n] = fr;
        }
        continue;
      }
      if (fr < f[n - 1]) {
        x[n] = std::move(xr);
        f[n] = fr;
        continue;
      }
      if (fr < f[n]) {
        std::vector<double> xc = along(-0.5, x[n]);
        const double fc = eval(xc);
        if (fc <= fr) {
          x[n] = std::move(xc);
          f[n] = fc;
          continue;
        }
      } else {
        std::vector<double> xc = along(0.5, x[n]);
        const double fc = eval(xc);
        if (fc < f[n]) {
          x[n] = std::move(xc);
          f[n] = fc;
          continue;
        }
      }
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) x[i][k] = x[0][k] + 0.5 * (x[i][k] - x[0][k]);
        f[i] = eval(x[i]);
      }
    }
    const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    return {f[best], x[best], converged};
  }

 private:
  static double size(const std::vector<std::vector<double>>& x) {
    double out = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      for (std::size_t k = 0; k < x[0].size(); ++k) out = std::max(out, std::abs(x[i][k] - x[0][k]));
    }
    return out;
  }

  double eval(const std::vector<double>& point) {
    ++evaluations_;
    return objective_(fold_params(point));
  }

  static void reorder(std::vector<std::vector<double>>& x, std::vector<double>& f,
                      const std::vector<std::size_t>& order) {
    std::vector<std::vector<double>> xs;
    std::vector<double> fs;
    for (std::size_t i : order) {
      xs.push_back(std::move(x[i]));
      fs.push_back(f[i]);
    }
    x = std::move(xs);
    f = std::move(fs);
  }

  const Objective& objective_;
  const OptimizerConfig& config_;
  std::uint64_t& evaluations_;
};

}  // namespace

void OptimizerConfig::check() const {
  if (grid_points_per_angle < 2) throw std::invalid_argument("grid_points_per_angle must be >= 2");
  if (refine_starts < 1) throw std::invalid_argument("refine_starts must be >= 1");
  if (simplex_max_iters < 0) throw std::invalid_argument("simplex_max_iters must be >= 0");
  if (!(simplex_tol > 0.0)) throw std::invalid_argument("simplex_tol must be positive");
  if (max_restarts < 0) throw std::invalid_argument("max_restarts must be >= 0");
}

double grid_theta(int i, int points) { return i * kHalfPi / (points - 1); }

double grid_phi(int i, int points) { return i * kTwoPi / points; }

std::uint64_t grid_size(int node_count, int points) {
  std::uint64_t size = 1;
  for (int s = 0; s < 2 * node_count; ++s) size *= static_cast<std::uint64_t>(points);
  return size;
}

MeasParams grid_point(std::uint64_t index, int node_count, int points) {
  MeasParams params;
  params.nodes.resize(node_count);
  for (int s = 2 * node_count - 1; s >= 0; --s) {
    const int digit = static_cast<int>(index % points);
    index /= points;
    Angles& node = params.nodes[s / 2];
    if (s % 2 == 0) {
      node.theta = grid_theta(digit, points);
    } else {
      node.phi = grid_phi(digit, points);
    }
  }
  return params;
}

std::vector<Candidate> grid_scan(const Objective& objective, int node_count,
                                 const OptimizerConfig& config, int keep) {
  config.check();
  if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  if (keep < 1) throw std::invalid_argument("keep must be >= 1");
  const int points = config.grid_points_per_angle;
  const std::uint64_t total = grid_size(node_count, points);
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 256);

  std::vector<std::vector<Candidate>> best(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t begin = total * c / chunks;
    const std::uint64_t end = total * (c + 1) / chunks;
    auto& local = best[c];
    for (std::uint64_t i = begin; i < end; ++i) {
      Candidate cand{0.0, grid_point(i, node_count, points), i};
      cand.value = objective(cand.params);
      if (static_cast<int>(local.size()) == keep && !candidate_less(cand, local.back())) continue;
      local.insert(std::upper_bound(local.begin(), local.end(), cand, candidate_less), std::move(cand));
      if (static_cast<int>(local.size()) > keep) local.pop_back();
    }
  });

  std::vector<Candidate> merged;
  for (auto& local : best) {
    for (auto& cand : local) merged.push_back(std::move(cand));
  }
  std::sort(merged.begin(), merged.end(), candidate_less);
  if (static_cast<int>(merged.size()) > keep) merged.resize(keep);
  return merged;
}

Angles fold_angles(double theta, double phi) {
  const double k = std::floor(theta / kHalfPi);
  const double r = theta - k * kHalfPi;
  const bool odd = std::fmod(std::abs(k), 2.0) == 1.0;
  const double t = std::clamp(odd ? kHalfPi - r : r, 0.0, kHalfPi);
  double p = std::fmod(phi + (odd ? kPi : 0.0), kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p >= kTwoPi) p = 0.0;
  return {t, p};
}

MeasParams fold_params(const std::vector<double>& scalars) {
  MeasParams params;
  params.nodes.reserve(scalars.size() / 2);
  for (std::size_t k = 0; k + 1 < scalars.size(); k += 2) {
    params.nodes.push_back(fold_angles(scalars[k], scalars[k + 1]));
  }
  return params;
}

OptimizerOutcome simplex_refine(const Objective& objective, const MeasParams& start,
                                const OptimizerConfig& config) {
  config.check();
  OptimizerOutcome out;
  std::uint64_t evaluations = 0;
  Simplex simplex(objective, config, evaluations);

  std::vector<double> point = to_scalars(start);
  double value = objective(start);
  ++evaluations;
  out.grid_best = value;

  std::mt19937_64 rng(config.seed);
  std::vector<int> signs(point.size(), 1);
  SimplexRun run = simplex.run(point, value, signs);
  bool converged = run.converged;
  if (run.value < value) {
    value = run.value;
    point = run.point;
  }
  for (int r = 0; r < config.max_restarts; ++r) {
    for (auto& s : signs) s = (rng() & 1u) ? 1 : -1;
    const double before = value;
    run = simplex.run(point, value, signs);
    ++out.restarts;
    converged = run.converged;
    if (run.value < value) {
      value = run.value;
      point = run.point;
    }
    if (before - value < config.simplex_tol) break;
  }

  out.best_value = value;
  out.best_params = fold_params(point);
  out.evaluations = evaluations;
  out.converged = converged;
  out.trace.push_back(value);
  return out;
}

OptimizerOutcome optimize(const Objective& objective, int node_count, const OptimizerConfig& config) {
  config.check();
  std::vector<Candidate> starts = grid_scan(objective, node_count, config, config.refine_starts);
  OptimizerOutcome best;
  best.grid_best = starts.front().value;
  best.best_value = starts.front().value;
  best.best_params = starts.front().params;
  best.evaluations = grid_size(node_count, config.grid_points_per_angle);
  best.trace.push_back(best.grid_best);
  best.converged = true;

  for (std::size_t i = 0; i < starts.size(); ++i) {
    OptimizerConfig local = config;
    local.seed = config.seed + i;
    OptimizerOutcome run = simplex_refine(objective, starts[i].params, local);
    best.evaluations += run.evaluations;
    best.restarts += run.restarts;
    if (i == 0) best.converged = run.converged;
    if (run.best_value < best.best_value) {
      best.best_value = run.best_value;
      best.best_params = run.best_params;
      best.converged = run.converged;
    }
    best.trace.push_back(best.best_value);
  }
  return best;
}

}  // namespace mdiscord
