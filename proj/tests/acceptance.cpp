// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mdiscord/discord.hpp"
#include "mdiscord/entropy_flux.hpp"
#include "mdiscord/measure.hpp"
#include "mdiscord/oracle.hpp"
#include "mdiscord/qstate.hpp"
#include "mdiscord/states.hpp"

namespace {

using namespace mdiscord;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

std::string num(double v) { return fmt("%.3g", v); }

void fail_if(Outcome& o, bool bad, const std::string& what) {
  if (bad) {
    o.pass = false;
    o.detail += " [" + what + "]";
  }
}

QState random_three(std::mt19937_64& rng) {
  return random_state({2, 2, 2}, 1 + static_cast<int>(rng() % 8), rng());
}

QState werner(Family family, double mu) {
  StateSpec spec;
  spec.family = family;
  spec.mu = mu;
  return build(spec);
}

double sweep_mu(int i) { return static_cast<double>(i) / 20.0; }

Outcome identities() {
  Outcome o;
  double worst = 0.0;
  for (const oracle::VerifyReport& r : oracle::identity_suite(1, 100)) {
    worst = std::max(worst, r.max_violation);
    o.detail += " " + r.check + "=" + num(r.max_violation);
  }
  fail_if(o, !(worst < 1e-9), "max violation >= 1e-9");
  return o;
}

Outcome non_negativity() {
  Outcome o;
  std::mt19937_64 rng(2);
  double lowest = 0.0;
  for (int i = 0; i < 500; ++i) {
    const QState s = random_three(rng);
    const MeasurementTree t = tree_from_params(s.dims(), 2, oracle::random_params(3, rng()));
    const ConditionalDiscords c = delta_cond_discord(s, t);
    lowest = std::min({lowest, objective_tripartite(s, t), d_unminimized(s, t, {0}, {1, 2}),
                       d_unminimized(s, t, {0, 1}, {2}), c.ab_c, c.ac_b, delta_post_discord(s, t)});
  }
  o.detail = " min=" + num(lowest);
  fail_if(o, !(lowest >= -1e-9), "value below -1e-9");
  return o;
}

Outcome zero_iff_measured() {
  Outcome o;
  std::mt19937_64 rng(3);
  double worst_value = 0.0;
  double worst_residual = 0.0;
  for (int i = 0; i < 50; ++i) {
    const QState raw = random_three(rng);
    const MeasurementTree t = tree_from_params(raw.dims(), 2, oracle::random_params(3, rng()));
    const QState measured = apply_tree(raw, t, 2).post_state;
    const DiscordResult r = discord(measured, default_order(3));
    worst_value = std::max(worst_value, r.value);
    if (r.value < 1e-6) {
      const MeasurementTree opt = tree_from_params(measured.dims(), 2, r.optimal_params);
      worst_residual = std::max(worst_residual, oracle::invariance_residual(measured, opt));
    }
  }
  o.detail = " max_discord=" + num(worst_value) + " max_residual=" + num(worst_residual);
  fail_if(o, !(worst_value < 1e-6), "discord >= 1e-6");
  fail_if(o, !(worst_residual < 1e-5), "residual >= 1e-5");
  return o;
}

Outcome bipartite_reduction() {
  Outcome o;
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const QState pair = random_state({2, 2}, 2, rng());
    const QState single = random_state({2}, 1 + static_cast<int>(rng() % 2), rng());
    const double reference = discord(pair, {0, 1}).value;
    // pair on (A,B), (A,C) and (B,C) with the single qubit in the remaining slot
    const QState ab_c = tensor(pair, single);
    const QState ac_b = permute(ab_c, {0, 2, 1});
    const QState a_bc = tensor(single, pair);
    for (const QState* s : {&ab_c, &ac_b, &a_bc}) {
      worst = std::max(worst, std::abs(discord(*s, default_order(3)).value - reference));
    }
  }
  o.detail = " max_diff=" + num(worst);
  fail_if(o, !(worst < 1e-5), "difference >= 1e-5");
  return o;
}

Outcome two_measurement() {
  Outcome o;
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const QState s = random_state({2, 2}, 1 + static_cast<int>(rng() % 4), rng());
    worst = std::max(worst, std::abs(discord_two_measurement(s).value - discord(s, {0, 1}).value));
  }
  o.detail = " max_diff=" + num(worst);
  fail_if(o, !(worst < 1e-5), "difference >= 1e-5");
  return o;
}

Outcome ghz_values() {
  Outcome o;
  const double bell_grid = oracle::dense_grid_min(bell_state(), 2, 12);
  const double ghz_grid = oracle::dense_grid_min(ghz_state(3), 3, 12);
  const DiscordResult bell = discord(bell_state(), {0, 1});
  const DiscordResult ghz = discord(ghz_state(3), default_order(3));
  const auto& d = ghz.decomposition;
  const double cond_gap = std::abs(d.at("Delta_AB_C") - d.at("Delta_AC_B"));
  const double post = d.at("Delta_BC_PiA");
  const double mono = std::abs(d.at("Delta_ABC") + ghz.value);
  o.detail = " oracle_bell=" + num(bell_grid) + " oracle_ghz=" + num(ghz_grid) +
             " D_bell=" + num(bell.value) + " D_ghz=" + num(ghz.value) +
             " |dAB_C-dAC_B|=" + num(cond_gap) + " dBC_PiA=" + num(post) +
             " |dABC+D|=" + num(mono);
  fail_if(o, !(std::abs(bell_grid - 1.0) <= 1e-3), "oracle Bell");
  fail_if(o, !(std::abs(ghz_grid - 1.0) <= 1e-3), "oracle GHZ");
  fail_if(o, !(std::abs(bell.value - 1.0) <= 1e-3), "Bell");
  fail_if(o, !(std::abs(ghz.value - 1.0) <= 1e-3), "GHZ");
  fail_if(o, !(cond_gap < 1e-4), "conditional deltas differ");
  fail_if(o, !(post < 1e-4), "post-measurement delta");
  fail_if(o, !(mono < 1e-4), "monogamy delta");
  return o;
}

Outcome werner_ghz_sweep() {
  Outcome o;
  double prev = 0.0;
  double worst_drop = 0.0;
  double max_post = 0.0;
  double d0 = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const DiscordResult r = discord(werner(Family::werner_ghz, sweep_mu(i)), default_order(3));
    if (i == 0) d0 = r.value;
    else worst_drop = std::max(worst_drop, prev - r.value);
    prev = r.value;
    max_post = std::max(max_post, r.decomposition.at("Delta_BC_PiA"));
  }
  o.detail = " D(0)=" + num(d0) + " D(1)=" + num(prev) + " max_step_drop=" + num(worst_drop) +
             " max_dBC_PiA=" + num(max_post);
  fail_if(o, !(worst_drop <= 1e-6), "not monotone");
  fail_if(o, !(d0 < 1e-6), "D(0)");
  fail_if(o, !(max_post < 1e-4), "post-measurement delta");
  return o;
}

Outcome werner_w_sweep() {
  Outcome o;
  double lo = 0.0;
  double hi = 0.0;
  double post_near_one = 0.0;
  for (int i = 1; i < 20; ++i) {
    const DiscordResult r = discord(werner(Family::werner_w, sweep_mu(i)), default_order(3));
    lo = std::min(lo, r.decomposition.at("Delta_ABC"));
    hi = std::max(hi, r.decomposition.at("Delta_ABC"));
  }
  for (double mu : {0.95, 1.0}) {
    const DiscordResult r = discord(werner(Family::werner_w, mu), default_order(3));
    post_near_one = std::max(post_near_one, r.decomposition.at("Delta_BC_PiA"));
  }
  o.detail = " min_dABC=" + num(lo) + " max_dABC=" + num(hi) + " dBC_PiA_near_1=" + num(post_near_one);
  fail_if(o, !(lo < -1e-6 && hi > 1e-6), "no sign change");
  fail_if(o, !(post_near_one > 1e-4), "post-measurement delta");
  return o;
}

Outcome bell_mixture_endpoints() {
  Outcome o;
  for (double mu : {0.0, 1.0}) {
    const double d = discord(werner(Family::bell_mixture, mu), default_order(3)).value;
    o.detail += " D(" + num(mu) + ")=" + num(d);
    fail_if(o, !(std::abs(d - 1.0) < 1e-3), "endpoint " + num(mu));
  }
  return o;
}

Outcome non_convexity() {
  Outcome o;
  const double d0 = discord(werner(Family::classical_quantum_mix, 0.0), default_order(3)).value;
  const double dh = discord(werner(Family::classical_quantum_mix, 0.5), default_order(3)).value;
  const double d1 = discord(werner(Family::classical_quantum_mix, 1.0), default_order(3)).value;
  o.detail = " D(0)=" + num(d0) + " D(0.5)=" + num(dh) + " D(1)=" + num(d1);
  fail_if(o, !(dh > 1e-3), "midpoint");
  fail_if(o, !(d0 < 1e-6 && d1 < 1e-6), "endpoints");
  return o;
}

Outcome four_party() {
  Outcome o;
  OptimizerConfig cfg;
  cfg.grid_points_per_angle = 3;
  const QState ghz = ghz_state(4);
  MeasParams z;
  z.nodes.assign(qubit_tree_nodes(3), Angles{});
  const double ghz_z = objective_npartite(ghz, tree_from_params(ghz.dims(), 3, z));
  const DiscordResult product = discord(product_state(4), default_order(4), cfg);
  const DiscordResult ghz_opt = discord(ghz, default_order(4), cfg);
  o.detail = " D_product=" + num(product.value) + " objective_ghz_z=" + fmt("%.12g", ghz_z) +
             " D_ghz=" + num(ghz_opt.value) +
             " evaluations=" + std::to_string(ghz_opt.diagnostics.evaluations);
  fail_if(o, !(product.value < 1e-6), "product");
  fail_if(o, !(std::abs(ghz_z - 1.0) <= 1e-9), "GHZ Z-tree objective");
  fail_if(o, !(ghz_opt.value <= ghz_z + 1e-9), "optimizer above Z-tree");
  return o;
}

Outcome cross_implementation() {
  Outcome o;
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const QState s = random_three(rng);
    const MeasParams p = oracle::random_params(3, rng());
    const double fast = objective_tripartite(s, tree_from_params(s.dims(), 2, p));
    worst = std::max(worst, std::abs(fast - oracle::objective(s, p)));
  }
  o.detail = " max_diff=" + num(worst);
  fail_if(o, !(worst < 1e-10), "difference >= 1e-10");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "identity_suite", 30, identities},
      {2, "non_negativity", 60, non_negativity},
      {3, "zero_iff_measured", 600, zero_iff_measured},
      {4, "bipartite_reduction", 600, bipartite_reduction},
      {5, "two_measurement_equivalence", 120, two_measurement},
      {6, "ghz_bell_values", 0, ghz_values},
      {7, "werner_ghz_sweep", 0, werner_ghz_sweep},
      {8, "werner_w_sweep", 0, werner_w_sweep},
      {9, "bell_mixture_endpoints", 0, bell_mixture_endpoints},
      {10, "non_convexity", 0, non_convexity},
      {11, "four_party_smoke", 900, four_party},
      {12, "cross_implementation", 0, cross_implementation},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string(" exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += " [over time limit " + num(c.time_limit_s) + " s]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s time=%.1fs%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
