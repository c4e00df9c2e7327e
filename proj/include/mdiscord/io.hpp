#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mdiscord/discord.hpp"
#include "mdiscord/measure.hpp"
#include "mdiscord/optimizer.hpp"
#include "mdiscord/qstate.hpp"
#include "mdiscord/states.hpp"

namespace mdiscord::io {

using Json = nlohmann::json;

/// {"dims": [...], "matrix": [[[re, im], ...], ...]}
Json state_to_json(const QState& state);
/// Throws StructureError on a malformed document and InvalidStateError when
/// the matrix is not a density matrix.
QState state_from_json(const Json& doc);

/// {"nodes": [{"path": [...], "theta": t, "phi": p}, ...]} in level order.
Json params_to_json(const MeasParams& params);
/// Accepts nodes in any order; every path of the complete tree must appear once.
MeasParams params_from_json(const Json& doc);

/// {"family": name, "mu": x, "qubits": n, "matrix": <state>}
StateSpec state_spec_from_json(const Json& doc);

/// Keys grid_points, refine_starts, simplex_iters, simplex_tol, seed, max_restarts; missing keys keep `base`.
OptimizerConfig optimizer_from_json(const Json& doc, OptimizerConfig base = {});
Json optimizer_to_json(const OptimizerConfig& config);

Json result_to_json(const DiscordResult& result);

/// Throws std::runtime_error when the file cannot be read or parsed.
Json read_json_file(const std::string& path);

/// %.12g with '.' as decimal separator.
std::string format_number(double value);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);
std::string csv_row(const std::vector<double>& values);

}  // namespace mdiscord::io
