#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "idg/analysis.hpp"
#include "idg/decode.hpp"
#include "idg/design.hpp"
#include "idg/model.hpp"
#include "idg/sim.hpp"

namespace idg::io {

using nlohmann::json;

// Graph file: { "n": int, "inhibitors": [int], "defectives": [int],
// "edges": [[int,int]] }, 0-indexed, lossless round trip.
json graph_to_json(const AssociationGraph& graph);
AssociationGraph graph_from_json(const json& j);

// Matrix file: first line "T n", then T lines of n characters from {0,1}.
std::string matrix_to_text(const PoolingMatrix& matrix);
PoolingMatrix matrix_from_text(const std::string& text);

// Outcome vectors travel as strings over {0,1} ordered by test index.
std::string outcomes_to_string(std::span<const std::uint8_t> y);
std::vector<std::uint8_t> outcomes_from_string(const std::string& text);

json params_to_json(const DesignParams& params);
json decode_result_to_json(const DecodeResult& result);
json bound_report_to_json(const BoundReport& report);
json trial_report_to_json(const TrialReport& report);
json sweep_result_to_json(const SweepResult& result);

SweepConfig sweep_config_from_json(const json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace idg::io
