#include "mdiscord/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mdiscord/discord.hpp"
#include "mdiscord/entropy_flux.hpp"
#include "mdiscord/io.hpp"
#include "mdiscord/oracle.hpp"
#include "mdiscord/states.hpp"

namespace mdiscord {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string family;
  std::optional<double> mu;
  std::optional<int> qubits;
  std::string state_path;
  std::vector<int> order;
  std::optional<int> level;
  std::optional<int> grid_points;
  std::optional<int> refine_starts;
  std::optional<int> simplex_iters;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  // sweep
  std::optional<int> points;
  std::optional<double> mu_start;
  std::optional<double> mu_stop;
  // flux
  std::string params_path;
  bool z_tree = false;
  // verify
  std::optional<int> samples;
  std::optional<int> optimization_samples;
  std::string inject_fault;
};

struct Resolved {
  StateSpec spec;
  std::vector<int> order;
  OptimizerConfig optimizer;
  std::string out_path;
  io::Json config = io::Json::object();
};

void add_state_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "State family");
  cmd->add_option("--mu", o.mu, "Mixing parameter in [0, 1]");
  cmd->add_option("--qubits", o.qubits, "Qubit count for ghz, w_state, product");
  cmd->add_option("--state", o.state_path, "Explicit state JSON file");
}

void add_order_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--order", o.order, "Measurement order, last entry unmeasured")->delimiter(',');
  cmd->add_option("--level", o.level, "Number of parties");
}

void add_optimizer_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid-points", o.grid_points, "Grid points per angle");
  cmd->add_option("--refine-starts", o.refine_starts, "Simplex starts from the best grid points");
  cmd->add_option("--simplex-iters", o.simplex_iters, "Simplex iteration cap");
  cmd->add_option("--seed", o.seed, "Random seed");
}

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "Run config JSON file");
  cmd->add_option("--out", o.out_path, "Output file");
}

// Parses config-derived values, turning library argument errors into config errors.
template <typename F>
auto config_step(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

Resolved resolve(const Options& o, bool need_state) {
  Resolved r;
  if (!o.config_path.empty()) r.config = config_step([&] { return io::read_json_file(o.config_path); });
  const io::Json& cfg = r.config;

  r.optimizer = config_step([&] {
    OptimizerConfig c;
    if (cfg.contains("optimizer")) c = io::optimizer_from_json(cfg.at("optimizer"));
    if (o.grid_points) c.grid_points_per_angle = *o.grid_points;
    if (o.refine_starts) c.refine_starts = *o.refine_starts;
    if (o.simplex_iters) c.simplex_max_iters = *o.simplex_iters;
    if (o.seed) c.seed = *o.seed;
    c.check();
    return c;
  });

  if (need_state) {
    r.spec = config_step([&] {
      const bool flags = !o.family.empty() || !o.state_path.empty();
      StateSpec spec;
      if (!flags && cfg.contains("state")) {
        spec = io::state_spec_from_json(cfg.at("state"));
      } else if (!o.state_path.empty()) {
        if (!o.family.empty() && o.family != "explicit") {
          throw std::invalid_argument("--state conflicts with --family " + o.family);
        }
        spec.family = Family::explicit_state;
        spec.explicit_state = io::state_from_json(io::read_json_file(o.state_path));
      } else if (!o.family.empty()) {
        spec.family = family_from_name(o.family);
      } else {
        throw std::invalid_argument("no state given: use --family, --state or a config 'state' block");
      }
      if (o.mu) spec.mu = *o.mu;
      if (o.qubits) spec.qubits = *o.qubits;
      spec.check();
      return spec;
    });
  }

  r.order = config_step([&] {
    std::vector<int> order = o.order;
    if (order.empty() && cfg.contains("order")) order = cfg.at("order").get<std::vector<int>>();
    std::optional<int> level = o.level;
    if (!level && cfg.contains("level")) level = cfg.at("level").get<int>();
    if (!order.empty() && level && static_cast<int>(order.size()) != *level) {
      throw std::invalid_argument("--order and --level disagree");
    }
    if (order.empty() && level) order = default_order(*level);
    return order;
  });

  r.out_path = o.out_path;
  if (r.out_path.empty() && cfg.contains("out")) r.out_path = cfg.at("out").get<std::string>();
  return r;
}

std::vector<int> order_for(const Resolved& r, const QState& state) {
  if (!r.order.empty()) return r.order;
  return default_order(state.subsystems());
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path);
  file << text;
}

int cmd_discord(const Options& o, std::ostream& out) {
  const Resolved r = resolve(o, true);
  const QState state = config_step([&] { return build(r.spec); });
  const std::vector<int> order = order_for(r, state);
  const DiscordResult result = config_step([&] { return discord(state, order, r.optimizer); });
  emit(io::result_to_json(result).dump(2) + "\n", r.out_path, out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  Options base = o;
  base.mu.reset();
  const Resolved r = resolve(base, false);
  const io::Json sweep = r.config.contains("sweep") ? r.config.at("sweep") : io::Json::object();

  StateSpec spec = config_step([&] {
    StateSpec s;
    if (!o.family.empty()) {
      s.family = family_from_name(o.family);
    } else if (r.config.contains("state")) {
      io::Json doc = r.config.at("state");
      doc.erase("mu");
      s.family = family_from_name(doc.at("family").get<std::string>());
    } else {
      throw std::invalid_argument("sweep needs --family");
    }
    if (!family_uses_mu(s.family)) throw std::invalid_argument("sweep needs a mu-parameterized family");
    return s;
  });

  const int points = o.points.value_or(sweep.value("points", 21));
  const double start = o.mu_start.value_or(sweep.value("start", 0.0));
  const double stop = o.mu_stop.value_or(sweep.value("stop", 1.0));
  if (points < 1) throw ConfigError("--points must be >= 1");
  if (!(start >= 0.0 && start <= 1.0 && stop >= 0.0 && stop <= 1.0)) {
    throw ConfigError("mu grid must lie within [0, 1]");
  }
  std::vector<int> order = r.order.empty() ? default_order(3) : r.order;
  if (order.size() != 3) throw ConfigError("sweep reports the three-party decomposition; use level 3");

  std::ostringstream csv;
  csv << io::csv_row(std::vector<std::string>{"mu", "D", "Delta_AB_C", "Delta_AC_B", "Delta_BC_PiA", "Delta_ABC"});
  for (int i = 0; i < points; ++i) {
    const double mu = points == 1 ? start : start + (stop - start) * i / (points - 1);
    spec.mu = mu;
    const DiscordResult result = config_step([&] { return discord(build(spec), order, r.optimizer); });
    const auto& d = result.decomposition;
    csv << io::csv_row(std::vector<double>{mu, result.value, d.at("Delta_AB_C"), d.at("Delta_AC_B"),
                                           d.at("Delta_BC_PiA"), d.at("Delta_ABC")});
  }
  emit(csv.str(), r.out_path, out);
  return kExitOk;
}

int cmd_flux(const Options& o, std::ostream& out) {
  const Resolved r = resolve(o, true);
  const QState full = config_step([&] { return build(r.spec); });
  const std::vector<int> order = order_for(r, full);
  if (order.size() != 2 && order.size() != 3) throw ConfigError("flux reports cover two or three parties");
  const QState state = config_step([&] { return arrange_parties(full, order); });
  const int depth = static_cast<int>(order.size()) - 1;

  const MeasurementTree tree = config_step([&] {
    if (!o.params_path.empty() && o.z_tree) throw std::invalid_argument("--params conflicts with --z-tree");
    if (!o.params_path.empty()) {
      return tree_from_params(state.dims(), depth, io::params_from_json(io::read_json_file(o.params_path)));
    }
    if (o.z_tree) return computational_tree(state.dims(), depth);
    return tree_from_params(state.dims(), depth, discord(state, default_order(depth + 1), r.optimizer).optimal_params);
  });

  const std::vector<FluxReport> reports = flux_report(state, tree);
  std::ostringstream csv;
  csv << io::csv_row(flux_csv_columns(state.subsystems()));
  csv << io::csv_row(flux_csv_values(reports));
  emit(csv.str(), r.out_path, out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Resolved r = resolve(o, false);
  oracle::SuiteOptions suite;
  suite.seed = o.seed.value_or(r.config.value("seed", std::uint64_t{0}));
  suite.samples = o.samples.value_or(r.config.value("samples", 100));
  suite.optimization_samples = o.optimization_samples.value_or(r.config.value("optimization_samples", 3));
  if (suite.samples < 1) throw ConfigError("--samples must be >= 1");
  if (suite.optimization_samples < 0) throw ConfigError("--opt-samples must be >= 0");
  if (o.inject_fault == "flip-monogamy-sign") {
    suite.fault = oracle::Fault::flip_monogamy_sign;
  } else if (!o.inject_fault.empty()) {
    throw ConfigError("unknown fault '" + o.inject_fault + "'");
  }

  const std::vector<oracle::VerifyReport> reports = oracle::verify_suite(suite);
  std::ostringstream csv;
  csv << io::csv_row(std::vector<std::string>{"check", "samples", "max_violation", "tolerance", "pass"});
  bool all_pass = true;
  for (const auto& rep : reports) {
    all_pass = all_pass && rep.pass;
    csv << io::csv_row(std::vector<std::string>{rep.check, std::to_string(rep.samples),
                                                io::format_number(rep.max_violation),
                                                io::format_number(rep.tolerance), rep.pass ? "true" : "false"});
  }
  emit(csv.str(), r.out_path, out);
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multipartite quantum discord with conditional measurement trees"};
  app.require_subcommand(1);
  Options o;

  auto* discord_cmd = app.add_subcommand("discord", "Optimized discord of a state");
  add_state_flags(discord_cmd, o);
  add_order_flags(discord_cmd, o);
  add_optimizer_flags(discord_cmd, o);
  add_common_flags(discord_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "Discord and decomposition over a mu grid");
  sweep_cmd->add_option("--family", o.family, "State family");
  add_order_flags(sweep_cmd, o);
  add_optimizer_flags(sweep_cmd, o);
  add_common_flags(sweep_cmd, o);
  sweep_cmd->add_option("--points", o.points, "Number of mu values");
  sweep_cmd->add_option("--mu-start", o.mu_start, "First mu");
  sweep_cmd->add_option("--mu-stop", o.mu_stop, "Last mu");

  auto* flux_cmd = app.add_subcommand("flux", "Entropy ledger before and after each measurement");
  add_state_flags(flux_cmd, o);
  add_order_flags(flux_cmd, o);
  add_optimizer_flags(flux_cmd, o);
  add_common_flags(flux_cmd, o);
  flux_cmd->add_option("--params", o.params_path, "Measurement tree angles JSON file");
  flux_cmd->add_flag("--z-tree", o.z_tree, "Use the computational basis at every node");

  auto* verify_cmd = app.add_subcommand("verify", "Identity and invariant checks");
  add_common_flags(verify_cmd, o);
  verify_cmd->add_option("--samples", o.samples, "Random samples per check");
  verify_cmd->add_option("--opt-samples", o.optimization_samples, "Samples for optimizer-backed checks");
  verify_cmd->add_option("--seed", o.seed, "Random seed");
  verify_cmd->add_option("--inject-fault", o.inject_fault)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (discord_cmd->parsed()) return cmd_discord(o, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out);
    if (flux_cmd->parsed()) return cmd_flux(o, out);
    return cmd_verify(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const io::Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace mdiscord
