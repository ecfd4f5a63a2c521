#pragma once

#include <span>
#include <vector>

#include "scatter/field_tower.hpp"

namespace scatter {

/// Incremental reduced row-echelon basis of bit-sliced F_q rows. Rows are kept fully
/// reduced with pivot entry 1 and sorted by pivot (lowest position first), so the row
/// set is the unique canonical basis of the span.
class FqEchelon {
 public:
  explicit FqEchelon(const Field& field) : f_(&field) {}

  FqRow reduce(FqRow v) const noexcept;
  bool insert(FqRow v);
  bool contains(const FqRow& v) const noexcept { return f_->row_is_zero(reduce(v)); }

  int rank() const noexcept { return static_cast<int>(rows_.size()); }
  const std::vector<FqRow>& rows() const noexcept { return rows_; }
  const std::vector<int>& pivots() const noexcept { return pivots_; }

 private:
  const Field* f_;
  std::vector<FqRow> rows_;
  std::vector<int> pivots_;
};

/// All coefficient vectors c (position j = coefficient of vecs[j]) with sum c_j vecs[j] = 0,
/// returned as a basis of the kernel. Requires vecs.size() <= kMaxPositions.
std::vector<FqRow> fq_kernel(const Field& field, std::span<const FqRow> vecs);

/// F_q-rank of a set of rows.
int fq_rank(const Field& field, std::span<const FqRow> vecs);

}  // namespace scatter
