#include "mdiscord/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace mdiscord::io {

namespace {

int node_index_of(const std::vector<int>& path) {
  int offset = 0;
  for (int bit : path) {
    if (bit != 0 && bit != 1) throw StructureError("tree path entries must be 0 or 1");
    offset = 2 * offset + bit;
  }
  return (1 << path.size()) - 1 + offset;
}

}  // namespace

Json state_to_json(const QState& state) {
  Json rows = Json::array();
  for (int r = 0; r < state.side(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < state.side(); ++c) {
      const Complex z = state.matrix()(r, c);
      row.push_back({z.real(), z.imag()});
    }
    rows.push_back(std::move(row));
  }
  return {{"dims", state.dims()}, {"matrix", std::move(rows)}};
}

QState state_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix")) {
    throw StructureError("state JSON needs 'dims' and 'matrix'");
  }
  Dims dims;
  try {
    dims = doc.at("dims").get<Dims>();
  } catch (const Json::exception&) {
    throw StructureError("'dims' must be a list of integers");
  }
  const Json& rows = doc.at("matrix");
  if (!rows.is_array()) throw StructureError("'matrix' must be a list of rows");
  const auto side = static_cast<Eigen::Index>(rows.size());
  Matrix m(side, side);
  for (Eigen::Index r = 0; r < side; ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != side) {
      throw StructureError("density matrix must be square");
    }
    for (Eigen::Index c = 0; c < side; ++c) {
      const Json& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw StructureError("matrix entries must be [re, im] pairs");
      }
      m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  QState structural(dims, m);
  return make_valid_state(structural.dims(), structural.matrix());
}

Json params_to_json(const MeasParams& params) {
  Json nodes = Json::array();
  for (std::size_t k = 0; k < params.nodes.size(); ++k) {
    nodes.push_back({{"path", qubit_node_path(static_cast<int>(k))},
                     {"theta", params.nodes[k].theta},
                     {"phi", params.nodes[k].phi}});
  }
  return {{"nodes", std::move(nodes)}};
}

MeasParams params_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.at("nodes").is_array()) {
    throw StructureError("parameter JSON needs a 'nodes' list");
  }
  const Json& nodes = doc.at("nodes");
  std::map<int, Angles> by_index;
  for (const Json& node : nodes) {
    std::vector<int> path;
    double theta = 0.0, phi = 0.0;
    try {
      path = node.at("path").get<std::vector<int>>();
      theta = node.at("theta").get<double>();
      phi = node.at("phi").get<double>();
    } catch (const Json::exception&) {
      throw StructureError("each node needs 'path', 'theta' and 'phi'");
    }
    if (path.size() > 20) throw StructureError("tree path too long");
    if (!by_index.emplace(node_index_of(path), Angles{theta, phi}).second) {
      throw StructureError("duplicate tree path");
    }
  }
  MeasParams params;
  for (int k = 0; k < static_cast<int>(by_index.size()); ++k) {
    auto it = by_index.find(k);
    if (it == by_index.end()) throw StructureError("tree nodes are incomplete");
    params.nodes.push_back(it->second);
  }
  int depth = 0;
  while (qubit_tree_nodes(depth) < static_cast<int>(params.nodes.size())) ++depth;
  if (params.nodes.empty() || qubit_tree_nodes(depth) != static_cast<int>(params.nodes.size())) {
    throw StructureError("tree nodes do not form a complete tree");
  }
  return params;
}

StateSpec state_spec_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("family")) throw std::invalid_argument("state spec needs 'family'");
  StateSpec spec;
  try {
    spec.family = family_from_name(doc.at("family").get<std::string>());
    if (doc.contains("mu")) spec.mu = doc.at("mu").get<double>();
    if (doc.contains("qubits")) spec.qubits = doc.at("qubits").get<int>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad state spec: ") + e.what());
  }
  if (doc.contains("matrix")) spec.explicit_state = state_from_json(doc.at("matrix"));
  spec.check();
  return spec;
}

OptimizerConfig optimizer_from_json(const Json& doc, OptimizerConfig base) {
  if (!doc.is_object()) throw std::invalid_argument("optimizer config must be an object");
  try {
    if (doc.contains("grid_points")) base.grid_points_per_angle = doc.at("grid_points").get<int>();
    if (doc.contains("refine_starts")) base.refine_starts = doc.at("refine_starts").get<int>();
    if (doc.contains("simplex_iters")) base.simplex_max_iters = doc.at("simplex_iters").get<int>();
    if (doc.contains("simplex_tol")) base.simplex_tol = doc.at("simplex_tol").get<double>();
    if (doc.contains("seed")) base.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("max_restarts")) base.max_restarts = doc.at("max_restarts").get<int>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad optimizer config: ") + e.what());
  }
  base.check();
  return base;
}

Json optimizer_to_json(const OptimizerConfig& config) {
  return {{"grid_points", config.grid_points_per_angle}, {"refine_starts", config.refine_starts},
          {"simplex_iters", config.simplex_max_iters},   {"simplex_tol", config.simplex_tol},
          {"seed", config.seed},                         {"max_restarts", config.max_restarts}};
}

Json result_to_json(const DiscordResult& result) {
  Json decomposition = Json::object();
  for (const auto& [key, value] : result.decomposition) decomposition[key] = value;
  const auto& d = result.diagnostics;
  return {{"value", result.value},
          {"level", result.level},
          {"order", result.order},
          {"params", params_to_json(result.optimal_params)},
          {"decomposition", std::move(decomposition)},
          {"diagnostics",
           {{"evaluations", d.evaluations},
            {"restarts", d.restarts},
            {"grid_best", d.grid_best},
            {"converged", d.converged},
            {"trace", d.trace}}}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

std::string csv_row(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  return csv_row(fields);
}

}  // namespace mdiscord::io
