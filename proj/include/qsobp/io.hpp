#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "qsobp/construction.hpp"
#include "qsobp/operator.hpp"
#include "qsobp/simplex.hpp"

namespace qsobp::io {

using nlohmann::json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Parsed construction request.
///
/// Schema: {"vertices": int, "edges": [[u,v],...], "alleles": int,
///          "females": [cell,...], "female_weights": W, "male_weights": W}
/// Cells are 1-based positions in the lexicographic enumeration. W is either
/// an object {"<cell>": weight} covering the whole partition, or an array in
/// ascending cell order. Optional "cell_cap" overrides the 2^20 cap.
struct ConstructionInput {
  ConfigurationSpace space;
  WeightPair weights;
};

ConstructionInput parse_construction(const json& doc);

/// {"n": int, "nu": int, "pf": [[[...]]], "pm": [[[...]]]}, indexed [i][k][j].
json operator_to_json(const BisexualOperator& op);
BisexualOperator operator_from_json(const json& doc);

/// Reads and parses a JSON file; syntax errors report line and column.
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& doc);

json state_to_json(const PopulationState& s);

/// "x1,...,xn;y1,...,ynu".
PopulationState parse_state(std::string_view text);

}  // namespace qsobp::io
