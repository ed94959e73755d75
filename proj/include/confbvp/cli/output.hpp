#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace confbvp::cli {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

/// CSV with a header row and CRLF line endings. Cells are written verbatim.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Numeric CSV rows.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct PlotBlock {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Two whitespace-separated columns per block, blocks separated by a blank
/// line, each introduced by a "# name" comment.
void write_plot_data(const std::filesystem::path& path, const std::vector<PlotBlock>& blocks);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace confbvp::cli
