#include "confbvp/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "confbvp/errors.hpp"

namespace confbvp::cli {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, ptr};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto out = open(path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<std::string>> text;
  text.reserve(rows.size());
  for (const auto& r : rows) {
    auto& cells = text.emplace_back();
    for (double v : r) cells.push_back(format_number(v));
  }
  write_csv(path, header, text);
}

void write_plot_data(const std::filesystem::path& path, const std::vector<PlotBlock>& blocks) {
  auto out = open(path);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out << '\n';
    out << "# " << blocks[b].name << '\n';
    for (std::size_t i = 0; i < blocks[b].x.size(); ++i) {
      out << format_number(blocks[b].x[i]) << ' ' << format_number(blocks[b].y[i]) << '\n';
    }
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto out = open(path);
  out << j.dump(2) << '\n';
}

}  // namespace confbvp::cli
