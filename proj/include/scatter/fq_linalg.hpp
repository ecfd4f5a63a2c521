#pragma once

// Linear algebra over F_{q^m} = GF(2^e): dense matrices, F_{q^m}-subspaces in RREF,
// F_q-subspaces in canonical flattened form, and deterministic subspace enumeration.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "scatter/field_tower.hpp"

namespace scatter {

class AmbientMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WorkLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector of F_{q^m}^r.
using Vec = std::vector<Elem>;

struct MatrixFqm {
  int rows = 0;
  int cols = 0;
  std::vector<Elem> a;

  MatrixFqm() = default;
  MatrixFqm(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

  Elem& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  Elem operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static MatrixFqm identity(int n);
  static MatrixFqm from_rows(std::span<const Vec> rows, int cols);
  Vec row(int i) const;
  MatrixFqm transpose() const;

  bool operator==(const MatrixFqm&) const = default;
};

struct RowReduction {
  int rank = 0;
  MatrixFqm rref;
  std::vector<int> pivots;
  std::optional<Elem> det;  // square inputs only
};

RowReduction row_reduce(const Field& f, MatrixFqm m);
MatrixFqm mat_mul(const Field& f, const MatrixFqm& a, const MatrixFqm& b);
/// Throws SingularMatrix.
MatrixFqm inverse(const Field& f, const MatrixFqm& a);
/// Basis of the right kernel {x : m x = 0}.
std::vector<Vec> nullspace(const Field& f, const MatrixFqm& m);
/// Entry (i, j) = t_i^(q^j) for j < t.size().
MatrixFqm moore_matrix(const Field& f, std::span<const Elem> t);
/// Row vector times matrix.
Vec vec_mul(const Field& f, const Vec& v, const MatrixFqm& a);
int fqm_span_dim(const Field& f, std::span<const Vec> vectors);

/// Saturates at UINT64_MAX.
std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q);

/// F_{q^m}-subspace of F_{q^m}^r kept in reduced row-echelon form.
class FqmSubspace {
 public:
  FqmSubspace() = default;
  static FqmSubspace span(FieldPtr f, int r, std::span<const Vec> gens);
  static FqmSubspace full(FieldPtr f, int r);

  const FieldPtr& field() const noexcept { return f_; }
  int ambient() const noexcept { return r_; }
  int dim() const noexcept { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& rows() const noexcept { return rows_; }
  const std::vector<int>& pivots() const noexcept { return pivots_; }
  bool contains(const Vec& v) const;

  bool operator==(const FqmSubspace& o) const { return r_ == o.r_ && rows_ == o.rows_; }

 private:
  FieldPtr f_;
  int r_ = 0;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

/// F_q-subspace of F_{q^m}^r. Coordinate j is flattened to F_q-positions j*m .. j*m+m-1
/// in the basis {x^i} of F_{q^m} over F_q; the basis is the unique reduced echelon basis
/// with respect to that position order. Requires r*m <= 64.
class FqSubspace {
 public:
  FqSubspace() = default;
  static FqSubspace span(FieldPtr f, int r, std::span<const Vec> gens);
  static FqSubspace flatten(const FqmSubspace& h);
  static FqSubspace zero(FieldPtr f, int r) { return span(std::move(f), r, {}); }

  const FieldPtr& field() const noexcept { return f_; }
  int ambient() const noexcept { return r_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const noexcept { return basis_; }
  const std::vector<FqRow>& rows() const noexcept { return rows_; }

  FqRow to_row(const Vec& v) const;
  Vec to_vec(const FqRow& row) const;
  bool contains(const Vec& v) const;

  FqSubspace intersect(const FqSubspace& o) const;
  FqSubspace sum(const FqSubspace& o) const;
  /// Coordinatewise x -> x^(q^i).
  FqSubspace frobenius(int i) const;
  /// Keeps coordinates [first, first + count).
  FqSubspace project(int first, int count) const;
  /// Places the vectors at coordinates [offset, offset + r) of an ambient of size r_new.
  FqSubspace embed(int r_new, int offset) const;
  /// All q^dim elements; small subspaces only.
  std::vector<Vec> elements() const;
  /// Element sum_j c_j b_j for F_q codes c.
  Vec combine(std::span<const int> codes) const;

  bool operator==(const FqSubspace& o) const { return r_ == o.r_ && rows_ == o.rows_; }

 private:
  void check_same(const FqSubspace& o) const;

  FieldPtr f_;
  int r_ = 0;
  std::vector<Vec> basis_;
  std::vector<FqRow> rows_;
};

/// dim_q(U ∩ H), by flattening H and intersecting canonical F_q-bases.
int weight(const FqSubspace& u, const FqmSubspace& h);

/// {u A : u in U}. Throws SingularMatrix.
FqSubspace apply_gl(const MatrixFqm& a, const FqSubspace& u);
FqmSubspace apply_gl(const MatrixFqm& a, const FqmSubspace& h);

/// Enumerates d x n RREF matrices over an alphabet of size Q whose symbols 0 and 1 stand
/// for the field's 0 and 1. Order: pivot profile (lexicographic), then free entries
/// row-major with the last one varying fastest.
class RrefCursor {
 public:
  RrefCursor(int n, int d, std::uint64_t alphabet);

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t index() const noexcept { return index_; }
  bool valid() const noexcept { return index_ < total_; }

  void seek(std::uint64_t index);
  bool next();
  bool advance(std::uint64_t k);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const std::vector<int>& pivots() const noexcept { return pivots_; }
  /// Symbol at (i, j), row-major.
  std::uint64_t symbol(int i, int j) const noexcept { return sym_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  void load_profile();
  void write_digits();
  bool next_profile();

  int n_;
  int d_;
  std::uint64_t q_;
  std::uint64_t total_;
  std::uint64_t index_ = 0;
  std::vector<int> pivots_;
  std::vector<std::pair<int, int>> free_;
  std::vector<std::uint64_t> digits_;
  std::vector<std::uint64_t> sym_;
};

/// Computes dim_q(U ∩ H) for one fixed U against many H given in RREF, reducing each basis
/// vector of U by H and measuring the F_q-rank of the residuals.
class WeightEvaluator {
 public:
  explicit WeightEvaluator(const FqSubspace& u);

  /// rref: d rows of length r, row-major; pivots ascending.
  int weight(std::span<const Elem> rref, std::span<const int> pivots) const;
  int weight(const FqmSubspace& h) const;

 private:
  const Field* f_;
  int r_;
  int dim_;
  std::vector<Elem> basis_;  // dim x r row-major
};

/// GF(2) rank of bit rows.
int gf2_rank(std::span<std::uint64_t> rows) noexcept;

}  // namespace scatter
