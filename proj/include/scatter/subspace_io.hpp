#pragma once

// Text format for subspace bases and matrices:
//   r m q_exp modulus_hex
//   <row 0 as r space-separated element hex strings>
//   ...

#include <string>
#include <string_view>
#include <vector>

#include "scatter/fq_linalg.hpp"

namespace scatter {

struct RowsFile {
  int r = 0;
  int m = 0;
  int q_exp = 0;
  std::uint64_t modulus = 0;
  std::vector<Vec> rows;
};

std::vector<std::string> format_rows(const Field& f, int r, const std::vector<Vec>& rows);
std::string format_rows_text(const Field& f, int r, const std::vector<Vec>& rows);
std::string format_matrix_text(const Field& f, const MatrixFqm& a);

/// Parses the text form; element strings are validated against f. Throws FieldError or
/// AmbientMismatch on malformed input.
RowsFile parse_rows(const Field& f, std::string_view text);
RowsFile parse_rows(const Field& f, const std::vector<std::string>& lines);

}  // namespace scatter
