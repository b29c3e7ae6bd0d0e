#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "mechsynth/harness.hpp"

namespace mechsynth::io {

using Json = nlohmann::json;

// Case documents:
//   {"name": "...", "targets": [[x, y], ...],
//    "angle_mode": {"type": "gene", "count": n}
//                | {"type": "prescribed", "values": [...]}
//                | {"type": "base_with_increments", "increment": d, "count": n},
//    "bounds": [[lo, hi], ...], "has_frame": bool,
//    "de": {"np", "itermax", "f", "cr", "mp", "strategy", "mutation", "stop_error"}}
Json case_to_json(const CaseSpec& spec);
CaseSpec case_from_json(const Json& doc);

/// A built-in id (1, 2, 2r, 3) or a path to a case document.
CaseSpec load_case(const std::string& id_or_path);

Json record_to_json(const RunRecord& record);
RunRecord record_from_json(const Json& doc);

Json stats_to_json(const BatchStats& stats, bool include_records = false);

/// Reads a design vector from a JSON array, an object with "best_vector"
/// (a saved run record), or whitespace/comma separated numbers.
DesignVector load_vector(const std::filesystem::path& path);

/// generation, best_penalized, best_raw
void write_history_csv(std::ostream& out, const RunRecord& record);

/// theta1, x, y, branch; unassemblable samples carry empty x, y.
/// Returns the number of assemblable rows.
std::size_t write_trace_csv(std::ostream& out, const MechanismParams& params, std::span<const double> theta1,
                            Branch branch);

/// Joint positions at each crank angle, for mechanism sketches.
void write_mechanism_csv(std::ostream& out, const MechanismParams& params, std::span<const double> theta1,
                         Branch branch);

/// seed, error, penalized, stop_generation, wall_time
void write_errors_csv(std::ostream& out, const BatchStats& stats);

void write_json(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);

/// Opens a file for writing or throws std::runtime_error naming the path.
std::ofstream open_output(const std::filesystem::path& path);

} // namespace mechsynth::io
