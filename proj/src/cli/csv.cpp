#include <cstdio>

#include "ssflab/cli.hpp"

namespace ssflab::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_)
    throw Error(path_.string() + ": row has " + std::to_string(cells.size()) +
                " cells, header has " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format(cells[i]);
  out_ << '\n';
  if (!out_) throw Error("write failed on " + path_.string());
}

std::string CsvWriter::format(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", v);
          return buf;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "1" : "0";
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char ch : v) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return quoted + "\"";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

std::string CsvWriter::join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format(values[i]);
  }
  return out;
}

}  // namespace ssflab::cli
