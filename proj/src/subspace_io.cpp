#include "scatter/subspace_io.hpp"

#include <sstream>

namespace scatter {

std::vector<std::string> format_rows(const Field& f, int r, const std::vector<Vec>& rows) {
  std::vector<std::string> out;
  std::ostringstream head;
  head << r << ' ' << f.m() << ' ' << f.h_exp() << ' ' << std::hex << f.modulus();
  out.push_back(head.str());
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += ' ';
      line += f.to_hex(row[j]);
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::string format_rows_text(const Field& f, int r, const std::vector<Vec>& rows) {
  std::string text;
  for (const auto& line : format_rows(f, r, rows)) text += line + '\n';
  return text;
}

std::string format_matrix_text(const Field& f, const MatrixFqm& a) {
  std::vector<Vec> rows;
  for (int i = 0; i < a.rows; ++i) rows.push_back(a.row(i));
  return format_rows_text(f, a.cols, rows);
}

RowsFile parse_rows(const Field& f, const std::vector<std::string>& lines) {
  if (lines.empty()) throw AmbientMismatch("rows file: missing header");
  RowsFile out;
  std::istringstream head(lines[0]);
  std::string mod_hex;
  if (!(head >> out.r >> out.m >> out.q_exp >> mod_hex)) throw AmbientMismatch("rows file: malformed header");
  out.modulus = std::stoull(mod_hex, nullptr, 16);
  if (out.m != f.m() || out.q_exp != f.h_exp() || out.modulus != f.modulus()) {
    throw AmbientMismatch("rows file: header does not match the configured field");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    Vec row;
    std::string tok;
    while (in >> tok) row.push_back(f.from_hex(tok));
    if (row.empty()) continue;
    if (static_cast<int>(row.size()) != out.r) {
      throw AmbientMismatch("rows file: line " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(out.r));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

RowsFile parse_rows(const Field& f, std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return parse_rows(f, lines);
}

}  // namespace scatter
