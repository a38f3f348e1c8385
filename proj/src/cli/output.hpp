#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "exactflow/core.hpp"

namespace exactflow::cli {

std::string format_number(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const nlohmann::json& config);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

// Legacy VTK structured points, ASCII. Axisymmetric grids map r to the first
// axis and z to the second, with velocity (v, u, 0).
void write_vtk(std::ostream& out, const RunConfig& cfg, const std::vector<FlowState>& states);

void write_json_rows(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// <out>.meta.json next to a data file.
void write_meta(const std::string& data_path, const std::string& command, const std::string& format,
                const nlohmann::json& config, std::size_t records);

}  // namespace exactflow::cli
