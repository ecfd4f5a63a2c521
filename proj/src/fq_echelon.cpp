#include "scatter/fq_echelon.hpp"

#include <algorithm>

namespace scatter {

FqRow FqEchelon::reduce(FqRow v) const noexcept {
  // Rows are fully reduced, so eliminating each pivot once in any order suffices.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const int c = f_->row_entry(v, pivots_[i]);
    if (c) f_->row_axpy(v, c, rows_[i]);
  }
  return v;
}

bool FqEchelon::insert(FqRow v) {
  v = reduce(v);
  const int p = f_->row_lead(v);
  if (p < 0) return false;
  const int lead = f_->row_entry(v, p);
  if (lead != 1) v = f_->row_scaled(f_->fq_inv(lead), v);
  for (auto& row : rows_) {
    const int c = f_->row_entry(row, p);
    if (c) f_->row_axpy(row, c, v);
  }
  const auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  const auto idx = it - pivots_.begin();
  pivots_.insert(it, p);
  rows_.insert(rows_.begin() + idx, v);
  return true;
}

std::vector<FqRow> fq_kernel(const Field& field, std::span<const FqRow> vecs) {
  struct Entry {
    FqRow value;
    FqRow tag;
    int pivot;
  };
  std::vector<Entry> basis;
  std::vector<FqRow> kernel;
  for (std::size_t j = 0; j < vecs.size(); ++j) {
    FqRow v = vecs[j];
    FqRow tag;
    tag.plane[0] = std::uint64_t{1} << j;
    for (const auto& b : basis) {
      const int c = field.row_entry(v, b.pivot);
      if (c) {
        field.row_axpy(v, c, b.value);
        field.row_axpy(tag, c, b.tag);
      }
    }
    const int p = field.row_lead(v);
    if (p < 0) {
      kernel.push_back(tag);
      continue;
    }
    const int inv = field.fq_inv(field.row_entry(v, p));
    basis.push_back({field.row_scaled(inv, v), field.row_scaled(inv, tag), p});
  }
  return kernel;
}

int fq_rank(const Field& field, std::span<const FqRow> vecs) {
  FqEchelon ech(field);
  for (const auto& v : vecs) ech.insert(v);
  return ech.rank();
}

}  // namespace scatter
