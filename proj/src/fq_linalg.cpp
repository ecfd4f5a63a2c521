#include "scatter/fq_linalg.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "scatter/fq_echelon.hpp"

namespace scatter {
namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, int exp) noexcept {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

void check_positions(const Field& f, int r) {
  if (r < 0 || r * f.m() > kMaxPositions) {
    throw AmbientMismatch("ambient of dimension " + std::to_string(r) + " exceeds F_q-flattening capacity");
  }
}

}  // namespace

MatrixFqm MatrixFqm::identity(int n) {
  MatrixFqm m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MatrixFqm MatrixFqm::from_rows(std::span<const Vec> rows, int cols) {
  MatrixFqm m(static_cast<int>(rows.size()), cols);
  for (int i = 0; i < m.rows; ++i) {
    if (static_cast<int>(rows[i].size()) != cols) throw AmbientMismatch("row length differs from column count");
    std::copy(rows[i].begin(), rows[i].end(), m.a.begin() + static_cast<std::ptrdiff_t>(i) * cols);
  }
  return m;
}

Vec MatrixFqm::row(int i) const {
  return Vec(a.begin() + static_cast<std::ptrdiff_t>(i) * cols, a.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols);
}

MatrixFqm MatrixFqm::transpose() const {
  MatrixFqm t(cols, rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

RowReduction row_reduce(const Field& f, MatrixFqm m) {
  RowReduction out;
  Elem det = 1;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i) {
      if (m(i, c)) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
    }
    const Elem p = m(r, c);
    det = f.mul(det, p);
    const Elem pinv = f.inv(p);
    for (int j = c; j < m.cols; ++j) m(r, j) = f.mul(m(r, j), pinv);
    for (int i = 0; i < m.rows; ++i) {
      const Elem factor = i == r ? 0 : m(i, c);
      if (!factor) continue;
      for (int j = c; j < m.cols; ++j) m(i, j) ^= f.mul(factor, m(r, j));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  if (m.rows == m.cols) out.det = r == m.rows ? det : 0;
  out.rref = std::move(m);
  return out;
}

MatrixFqm mat_mul(const Field& f, const MatrixFqm& a, const MatrixFqm& b) {
  if (a.cols != b.rows) throw AmbientMismatch("matrix product shape mismatch");
  MatrixFqm c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const Elem x = a(i, k);
      if (!x) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) ^= f.mul(x, b(k, j));
    }
  }
  return c;
}

MatrixFqm inverse(const Field& f, const MatrixFqm& a) {
  if (a.rows != a.cols) throw SingularMatrix("non-square matrix has no inverse");
  const int n = a.rows;
  MatrixFqm aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const RowReduction red = row_reduce(f, aug);
  if (red.rank < n || red.pivots[n - 1] != n - 1) throw SingularMatrix("matrix is singular");
  MatrixFqm inv(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv(i, j) = red.rref(i, n + j);
  }
  return inv;
}

std::vector<Vec> nullspace(const Field& f, const MatrixFqm& m) {
  const RowReduction red = row_reduce(f, m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int p : red.pivots) is_pivot[p] = true;
  std::vector<Vec> out;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    Vec x(m.cols, 0);
    x[fc] = 1;
    for (int i = 0; i < red.rank; ++i) x[red.pivots[i]] = red.rref(i, fc);
    out.push_back(std::move(x));
  }
  return out;
}

MatrixFqm moore_matrix(const Field& f, std::span<const Elem> t) {
  const int n = static_cast<int>(t.size());
  MatrixFqm m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = f.frob_q(t[i], j);
  }
  return m;
}

Vec vec_mul(const Field& f, const Vec& v, const MatrixFqm& a) {
  if (static_cast<int>(v.size()) != a.rows) throw AmbientMismatch("vector length differs from matrix rows");
  Vec out(a.cols, 0);
  for (int i = 0; i < a.rows; ++i) {
    if (!v[i]) continue;
    for (int j = 0; j < a.cols; ++j) out[j] ^= f.mul(v[i], a(i, j));
  }
  return out;
}

int fqm_span_dim(const Field& f, std::span<const Vec> vectors) {
  if (vectors.empty()) return 0;
  // Small dense elimination; this sits in the fast scatteredness loop.
  const int cols = static_cast<int>(vectors[0].size());
  Elem buf[16][16];
  const int rows = static_cast<int>(vectors.size());
  if (rows > 16 || cols > 16) return row_reduce(f, MatrixFqm::from_rows(vectors, cols)).rank;
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(vectors[i].size()) != cols) throw AmbientMismatch("vectors of different lengths");
    for (int j = 0; j < cols; ++j) buf[i][j] = vectors[i][j];
  }
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i) {
      if (buf[i][c]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) std::swap(buf[piv], buf[r]);
    const Elem pinv = f.inv(buf[r][c]);
    for (int i = r + 1; i < rows; ++i) {
      if (!buf[i][c]) continue;
      const Elem factor = f.mul(buf[i][c], pinv);
      for (int j = c; j < cols; ++j) buf[i][j] ^= f.mul(factor, buf[r][j]);
    }
    ++r;
  }
  return r;
}

std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q) {
  if (k < 0 || k > n) return 0;
  // [n,k]_q = [n-1,k-1]_q + q^k [n-1,k]_q
  std::vector<std::uint64_t> prev(k + 1, 0), cur(k + 1, 0);
  prev[0] = 1;
  for (int i = 1; i <= n; ++i) {
    cur[0] = 1;
    for (int j = 1; j <= std::min(i, k); ++j) {
      const std::uint64_t a = prev[j - 1];
      const std::uint64_t b = j <= i - 1 ? sat_mul(sat_pow(q, j), prev[j]) : 0;
      cur[j] = a > kSat - b ? kSat : a + b;
    }
    for (int j = std::min(i, k) + 1; j <= k; ++j) cur[j] = 0;
    std::swap(prev, cur);
  }
  return prev[k];
}

// ---------------------------------------------------------------- FqmSubspace

FqmSubspace FqmSubspace::span(FieldPtr f, int r, std::span<const Vec> gens) {
  FqmSubspace s;
  s.r_ = r;
  if (!gens.empty()) {
    for (const auto& g : gens) {
      if (static_cast<int>(g.size()) != r) throw AmbientMismatch("generator outside the ambient space");
    }
    const RowReduction red = row_reduce(*f, MatrixFqm::from_rows(gens, r));
    for (int i = 0; i < red.rank; ++i) s.rows_.push_back(red.rref.row(i));
    s.pivots_ = red.pivots;
  }
  s.f_ = std::move(f);
  return s;
}

FqmSubspace FqmSubspace::full(FieldPtr f, int r) {
  std::vector<Vec> rows;
  for (int i = 0; i < r; ++i) {
    Vec v(r, 0);
    v[i] = 1;
    rows.push_back(std::move(v));
  }
  return span(std::move(f), r, rows);
}

bool FqmSubspace::contains(const Vec& v) const {
  if (static_cast<int>(v.size()) != r_) throw AmbientMismatch("vector outside the ambient space");
  Vec w = v;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Elem c = w[pivots_[i]];
    if (!c) continue;
    for (int j = 0; j < r_; ++j) w[j] ^= f_->mul(c, rows_[i][j]);
  }
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

// ---------------------------------------------------------------- FqSubspace

FqRow FqSubspace::to_row(const Vec& v) const {
  if (static_cast<int>(v.size()) != r_) throw AmbientMismatch("vector outside the ambient space");
  FqRow row;
  for (int c = 0; c < r_; ++c) f_->row_put(row, c, v[c]);
  return row;
}

Vec FqSubspace::to_vec(const FqRow& row) const {
  Vec v(r_);
  for (int c = 0; c < r_; ++c) v[c] = f_->row_get(row, c);
  return v;
}

FqSubspace FqSubspace::span(FieldPtr f, int r, std::span<const Vec> gens) {
  check_positions(*f, r);
  FqSubspace s;
  s.f_ = std::move(f);
  s.r_ = r;
  FqEchelon ech(*s.f_);
  for (const auto& g : gens) ech.insert(s.to_row(g));
  s.rows_ = ech.rows();
  for (const auto& row : s.rows_) s.basis_.push_back(s.to_vec(row));
  return s;
}

FqSubspace FqSubspace::flatten(const FqmSubspace& h) {
  const Field& f = *h.field();
  std::vector<Vec> gens;
  for (const auto& row : h.rows()) {
    for (int i = 0; i < f.m(); ++i) {
      Vec g(row.size());
      for (std::size_t j = 0; j < row.size(); ++j) g[j] = f.mul(row[j], Elem{1} << i);
      gens.push_back(std::move(g));
    }
  }
  return span(h.field(), h.ambient(), gens);
}

bool FqSubspace::contains(const Vec& v) const {
  FqEchelon ech(*f_);
  for (const auto& row : rows_) ech.insert(row);
  return ech.contains(to_row(v));
}

void FqSubspace::check_same(const FqSubspace& o) const {
  if (r_ != o.r_ || !f_->same_as(*o.f_)) throw AmbientMismatch("subspaces live in different ambients");
}

FqSubspace FqSubspace::intersect(const FqSubspace& o) const {
  check_same(o);
  // Kernel of the stacked bases: sum c_j a_j = sum c'_j b_j.
  std::vector<FqRow> stacked(rows_);
  stacked.insert(stacked.end(), o.rows_.begin(), o.rows_.end());
  const auto kernel = fq_kernel(*f_, stacked);
  std::vector<Vec> gens;
  for (const auto& tag : kernel) {
    FqRow x;
    for (int j = 0; j < dim(); ++j) f_->row_axpy(x, f_->row_entry(tag, j), rows_[j]);
    gens.push_back(to_vec(x));
  }
  return span(f_, r_, gens);
}

FqSubspace FqSubspace::sum(const FqSubspace& o) const {
  check_same(o);
  std::vector<Vec> gens(basis_);
  gens.insert(gens.end(), o.basis_.begin(), o.basis_.end());
  return span(f_, r_, gens);
}

FqSubspace FqSubspace::frobenius(int i) const {
  std::vector<Vec> gens;
  for (const auto& b : basis_) {
    Vec g(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) g[j] = f_->frob_q(b[j], i);
    gens.push_back(std::move(g));
  }
  return span(f_, r_, gens);
}

FqSubspace FqSubspace::project(int first, int count) const {
  if (first < 0 || count < 0 || first + count > r_) throw AmbientMismatch("projection outside the ambient");
  std::vector<Vec> gens;
  for (const auto& b : basis_) gens.emplace_back(b.begin() + first, b.begin() + first + count);
  return span(f_, count, gens);
}

FqSubspace FqSubspace::embed(int r_new, int offset) const {
  if (offset < 0 || offset + r_ > r_new) throw AmbientMismatch("embedding outside the target ambient");
  std::vector<Vec> gens;
  for (const auto& b : basis_) {
    Vec g(r_new, 0);
    std::copy(b.begin(), b.end(), g.begin() + offset);
    gens.push_back(std::move(g));
  }
  return span(f_, r_new, gens);
}

Vec FqSubspace::combine(std::span<const int> codes) const {
  FqRow x;
  for (int j = 0; j < dim(); ++j) f_->row_axpy(x, codes[j], rows_[j]);
  return to_vec(x);
}

std::vector<Vec> FqSubspace::elements() const {
  const std::uint64_t q = f_->q();
  const std::uint64_t count = sat_pow(q, dim());
  if (count > (std::uint64_t{1} << 24)) throw WorkLimitExceeded("subspace too large to list");
  std::vector<Vec> out;
  out.reserve(count);
  std::vector<int> codes(dim(), 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t t = idx;
    for (int j = dim() - 1; j >= 0; --j) {
      codes[j] = static_cast<int>(t % q);
      t /= q;
    }
    out.push_back(combine(codes));
  }
  return out;
}

int weight(const FqSubspace& u, const FqmSubspace& h) {
  if (u.ambient() != h.ambient() || !u.field()->same_as(*h.field())) {
    throw AmbientMismatch("weight of subspaces in different ambients");
  }
  return u.intersect(FqSubspace::flatten(h)).dim();
}

FqSubspace apply_gl(const MatrixFqm& a, const FqSubspace& u) {
  const Field& f = *u.field();
  if (a.rows != u.ambient() || a.cols != u.ambient()) throw AmbientMismatch("matrix size differs from ambient");
  if (row_reduce(f, a).rank < a.rows) throw SingularMatrix("apply_gl needs an invertible matrix");
  std::vector<Vec> gens;
  for (const auto& b : u.basis()) gens.push_back(vec_mul(f, b, a));
  return FqSubspace::span(u.field(), u.ambient(), gens);
}

FqmSubspace apply_gl(const MatrixFqm& a, const FqmSubspace& h) {
  const Field& f = *h.field();
  if (a.rows != h.ambient() || a.cols != h.ambient()) throw AmbientMismatch("matrix size differs from ambient");
  if (row_reduce(f, a).rank < a.rows) throw SingularMatrix("apply_gl needs an invertible matrix");
  std::vector<Vec> gens;
  for (const auto& b : h.rows()) gens.push_back(vec_mul(f, b, a));
  return FqmSubspace::span(h.field(), h.ambient(), gens);
}

// ---------------------------------------------------------------- RrefCursor

RrefCursor::RrefCursor(int n, int d, std::uint64_t alphabet)
    : n_(n), d_(d), q_(alphabet), total_(gaussian_binomial(n, d, alphabet)),
      sym_(static_cast<std::size_t>(std::max(d, 0)) * std::max(n, 0), 0) {
  if (d < 0 || d > n) throw AmbientMismatch("subspace dimension outside [0, n]");
  if (alphabet < 2) throw AmbientMismatch("alphabet needs at least 0 and 1");
  seek(0);
}

void RrefCursor::load_profile() {
  free_.clear();
  for (int i = 0; i < d_; ++i) {
    int k = i + 1;
    for (int j = pivots_[i] + 1; j < n_; ++j) {
      if (k < d_ && pivots_[k] == j) {
        ++k;
        continue;
      }
      free_.emplace_back(i, j);
    }
  }
  digits_.assign(free_.size(), 0);
  std::fill(sym_.begin(), sym_.end(), 0);
  for (int i = 0; i < d_; ++i) sym_[static_cast<std::size_t>(i) * n_ + pivots_[i]] = 1;
}

void RrefCursor::write_digits() {
  for (std::size_t t = 0; t < free_.size(); ++t) {
    sym_[static_cast<std::size_t>(free_[t].first) * n_ + free_[t].second] = digits_[t];
  }
}

bool RrefCursor::next_profile() {
  int i = d_ - 1;
  while (i >= 0 && pivots_[i] == n_ - d_ + i) --i;
  if (i < 0) return false;
  ++pivots_[i];
  for (int j = i + 1; j < d_; ++j) pivots_[j] = pivots_[j - 1] + 1;
  return true;
}

void RrefCursor::seek(std::uint64_t index) {
  index_ = index;
  pivots_.resize(d_);
  for (int i = 0; i < d_; ++i) pivots_[i] = i;
  load_profile();
  if (index >= total_) return;
  std::uint64_t rest = index;
  for (;;) {
    const std::uint64_t count = sat_pow(q_, static_cast<int>(free_.size()));
    if (rest < count) break;
    rest -= count;
    next_profile();
    load_profile();
  }
  for (std::size_t t = free_.size(); t-- > 0;) {
    digits_[t] = rest % q_;
    rest /= q_;
  }
  write_digits();
}

bool RrefCursor::next() {
  if (index_ >= total_) return false;
  ++index_;
  if (index_ >= total_) return false;
  for (std::size_t t = free_.size(); t-- > 0;) {
    std::uint64_t& s = sym_[static_cast<std::size_t>(free_[t].first) * n_ + free_[t].second];
    if (++digits_[t] < q_) {
      s = digits_[t];
      return true;
    }
    digits_[t] = 0;
    s = 0;
  }
  next_profile();
  load_profile();
  return true;
}

bool RrefCursor::advance(std::uint64_t k) {
  if (k <= 64) {
    for (std::uint64_t i = 0; i < k; ++i) next();
    return valid();
  }
  const std::uint64_t target = index_ + k;
  if (target >= total_ || target < index_) {
    index_ = total_;
    return false;
  }
  seek(target);
  return true;
}

// ---------------------------------------------------------------- WeightEvaluator

int gf2_rank(std::span<std::uint64_t> rows) noexcept {
  int rank = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t v = rows[i];
    for (int j = 0; j < rank; ++j) v = std::min(v, v ^ rows[j]);
    if (v) rows[rank++] = v;
  }
  return rank;
}

WeightEvaluator::WeightEvaluator(const FqSubspace& u)
    : f_(u.field().get()), r_(u.ambient()), dim_(u.dim()) {
  basis_.reserve(static_cast<std::size_t>(dim_) * r_);
  for (const auto& b : u.basis()) basis_.insert(basis_.end(), b.begin(), b.end());
}

int WeightEvaluator::weight(std::span<const Elem> rref, std::span<const int> pivots) const {
  const int d = static_cast<int>(pivots.size());
  int nonpiv[kMaxPositions];
  int nn = 0;
  for (int c = 0, k = 0; c < r_; ++c) {
    if (k < d && pivots[k] == c) {
      ++k;
    } else {
      nonpiv[nn++] = c;
    }
  }
  if (nn == 0) return dim_;
  const int m = f_->m();
  if (f_->h_exp() == 1) {
    std::uint64_t res[kMaxPositions];
    for (int j = 0; j < dim_; ++j) {
      const Elem* u = &basis_[static_cast<std::size_t>(j) * r_];
      std::uint64_t packed = 0;
      for (int s = 0; s < nn; ++s) {
        const int c = nonpiv[s];
        Elem y = u[c];
        for (int i = 0; i < d; ++i) {
          const Elem up = u[pivots[i]];
          if (up) y ^= f_->mul(up, rref[static_cast<std::size_t>(i) * r_ + c]);
        }
        packed |= f_->coords(y) << (s * m);
      }
      res[j] = packed;
    }
    return dim_ - gf2_rank(std::span<std::uint64_t>(res, dim_));
  }
  FqEchelon ech(*f_);
  for (int j = 0; j < dim_; ++j) {
    const Elem* u = &basis_[static_cast<std::size_t>(j) * r_];
    FqRow row;
    for (int s = 0; s < nn; ++s) {
      const int c = nonpiv[s];
      Elem y = u[c];
      for (int i = 0; i < d; ++i) {
        const Elem up = u[pivots[i]];
        if (up) y ^= f_->mul(up, rref[static_cast<std::size_t>(i) * r_ + c]);
      }
      f_->row_put(row, s, y);
    }
    ech.insert(row);
  }
  return dim_ - ech.rank();
}

int WeightEvaluator::weight(const FqmSubspace& h) const {
  std::vector<Elem> flat;
  for (const auto& row : h.rows()) flat.insert(flat.end(), row.begin(), row.end());
  return weight(flat, h.pivots());
}

}  // namespace scatter
