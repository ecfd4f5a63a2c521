#include "scatter/field_tower.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "scatter/fq_echelon.hpp"

namespace scatter {
namespace {

int poly_degree(std::uint64_t p) noexcept { return p ? 63 - __builtin_clzll(p) : -1; }

std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f, int n) noexcept {
  const std::uint64_t top = std::uint64_t{1} << n;
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= f;
  }
  return r;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) noexcept {
  while (b) {
    const int db = poly_degree(b);
    while (a && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
    std::swap(a, b);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Kernel of the GF(2)-linear map sending x^j to cols[j].
std::vector<std::uint64_t> gf2_kernel(const std::vector<std::uint64_t>& cols) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> piv;  // (image, tag), leads distinct
  std::vector<std::uint64_t> kernel;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::uint64_t v = cols[j];
    std::uint64_t tag = std::uint64_t{1} << j;
    for (const auto& [pv, pt] : piv) {
      if ((v >> poly_degree(pv)) & 1) {
        v ^= pv;
        tag ^= pt;
      }
    }
    if (v == 0) {
      kernel.push_back(tag);
    } else {
      piv.emplace_back(v, tag);
    }
  }
  return kernel;
}

}  // namespace

bool Field::is_irreducible(std::uint64_t poly) noexcept {
  const int n = poly_degree(poly);
  if (n < 1 || n > 63) return false;
  if (n == 1) return true;
  if ((poly & 1) == 0) return false;
  // x^(2^n) == x mod f, and gcd(x^(2^(n/p)) - x, f) == 1 for every prime p | n.
  const std::uint64_t x = 2;
  auto frob_power = [&](int k) {
    std::uint64_t r = x;
    for (int i = 0; i < k; ++i) r = poly_mulmod(r, r, poly, n);
    return r;
  };
  if (frob_power(n) != x) return false;
  for (std::uint64_t p : prime_factors(static_cast<std::uint64_t>(n))) {
    const std::uint64_t g = poly_gcd(poly, frob_power(n / static_cast<int>(p)) ^ x);
    if (g != 1) return false;
  }
  return true;
}

std::uint64_t Field::default_modulus(int degree) noexcept {
  switch (degree) {
    case 6:
      return 0x5b;  // x^6 + x^4 + x^3 + x + 1
    case 18:
      return (std::uint64_t{1} << 18) | (1u << 3) | 1u;  // x^18 + x^3 + 1
    case 30:
      return (std::uint64_t{1} << 30) | (1u << 6) | (1u << 4) | 2u | 1u;  // x^30 + x^6 + x^4 + x + 1
    default:
      return 0;
  }
}

std::shared_ptr<const Field> Field::tower(int h_exp) {
  const int degree = 6 * h_exp;
  const std::uint64_t mod = default_modulus(degree);
  if (mod == 0) throw DegreeMismatch("no default modulus for degree " + std::to_string(degree));
  return make(degree, mod, h_exp);
}

std::shared_ptr<const Field> Field::make(int degree, std::uint64_t modulus, int h_exp) {
  if (h_exp < 1) throw DegreeMismatch("h_exp must be positive");
  if (h_exp % 2 == 0) throw EvenH("h_exp must be odd, got " + std::to_string(h_exp));
  if (h_exp > kMaxPlanes) throw DegreeMismatch("h_exp too large for this build");
  if (poly_degree(modulus) != degree) throw DegreeMismatch("modulus degree differs from e");
  if (degree != 6 * h_exp) throw DegreeMismatch("tower field requires e = 6h");
  if (!is_irreducible(modulus)) throw ReducibleModulus("modulus is reducible over GF(2)");
  return std::shared_ptr<const Field>(new Field(degree, modulus, h_exp));
}

Field::Field(int degree, std::uint64_t modulus, int h_exp)
    : e_(degree), h_(h_exp), m_(degree / h_exp), modulus_(modulus) {
  build_tables();
  build_frobenius();
  build_subfield_coords();
  build_trace_kernel();
}

Elem Field::slow_mul(Elem a, Elem b) const noexcept { return poly_mulmod(a, b, modulus_, e_); }

void Field::build_tables() {
  if (e_ > 20) return;
  const std::uint64_t order = size() - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](Elem a, std::uint64_t n) {
    Elem r = 1;
    while (n) {
      if (n & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      n >>= 1;
    }
    return r;
  };
  Elem g = 2;
  for (;; ++g) {
    bool primitive = true;
    for (std::uint64_t p : factors) {
      if (slow_pow(g, order / p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) break;
  }
  exp_.assign(2 * order, 0);
  log_.assign(size(), 0);
  Elem v = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = v;
    exp_[i + order] = v;
    log_[v] = static_cast<std::uint32_t>(i);
    v = slow_mul(v, g);
  }
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw ZeroInverse("inverse of zero");
  if (!log_.empty()) {
    const std::uint64_t order = size() - 1;
    return exp_[order - log_[a]];
  }
  return pow(a, size() - 2);
}

Elem Field::pow(Elem a, std::uint64_t n) const noexcept {
  Elem r = 1;
  while (n) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

void Field::build_frobenius() {
  frob_cols_.assign(static_cast<std::size_t>(m_) * e_, 0);
  for (int j = 0; j < e_; ++j) {
    Elem v = Elem{1} << j;
    for (int k = 0; k < m_; ++k) {
      frob_cols_[static_cast<std::size_t>(k) * e_ + j] = v;
      for (int s = 0; s < h_; ++s) v = slow_mul(v, v);
    }
  }
  if (e_ <= 18) {
    frob_tab_.assign(static_cast<std::size_t>(m_) * size(), 0);
    for (int k = 0; k < m_; ++k) {
      const Elem* cols = &frob_cols_[static_cast<std::size_t>(k) * e_];
      Elem* out = &frob_tab_[static_cast<std::size_t>(k) * size()];
      for (Elem x = 1; x < size(); ++x) {
        const int low = __builtin_ctzll(x);
        out[x] = out[x & (x - 1)] ^ cols[low];
      }
    }
  }
}

Elem Field::rel_trace(Elem x, int sub_index) const {
  if (sub_index != 1 && sub_index != 2) throw BadSubIndex("rel_trace sub_index must be 1 or 2");
  Elem r = 0;
  for (int j = 0; j < m_; j += sub_index) r ^= frob_q(x, j);
  return r;
}

std::vector<Elem> Field::subfield_elements(int d) const {
  std::vector<std::uint64_t> cols(e_);
  for (int j = 0; j < e_; ++j) cols[j] = frob_q(Elem{1} << j, d) ^ (Elem{1} << j);
  const auto basis = gf2_kernel(cols);
  std::vector<Elem> out(std::size_t{1} << basis.size(), 0);
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = out[i & (i - 1)] ^ basis[__builtin_ctzll(i)];
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Field::build_subfield_coords() {
  // F_2-basis of F_q with b_0 = 1.
  std::vector<std::uint64_t> cols(e_);
  for (int j = 0; j < e_; ++j) cols[j] = frob_q(Elem{1} << j, 1) ^ (Elem{1} << j);
  std::vector<Elem> fq_basis{1};
  std::vector<Elem> reduced{1};  // GF(2) echelon by highest bit
  auto reduce = [&](Elem v) {
    for (Elem r : reduced) {
      if ((v >> poly_degree(r)) & 1) v ^= r;
    }
    return v;
  };
  for (Elem k : gf2_kernel(cols)) {
    const Elem r = reduce(k);
    if (r == 0) continue;
    fq_basis.push_back(k);
    reduced.push_back(r);
    std::sort(reduced.begin(), reduced.end(), std::greater<>());
  }
  if (static_cast<int>(fq_basis.size()) != h_) throw FieldError("subfield F_q has unexpected dimension");

  const int n = e_;
  elem_of_coord_.assign(n, 0);
  for (int k = 0; k < h_; ++k) {
    for (int i = 0; i < m_; ++i) elem_of_coord_[k * m_ + i] = slow_mul(fq_basis[k], Elem{1} << i);
  }
  // Invert the change of basis: coord_of_bit_[b] = coordinates of x^b.
  std::vector<std::pair<Elem, std::uint64_t>> piv(n, {0, 0});
  for (int t = 0; t < n; ++t) {
    Elem v = elem_of_coord_[t];
    std::uint64_t tag = std::uint64_t{1} << t;
    while (v) {
      const int top = poly_degree(v);
      if (piv[top].first == 0) {
        piv[top] = {v, tag};
        break;
      }
      v ^= piv[top].first;
      tag ^= piv[top].second;
    }
    if (v == 0) throw FieldError("position basis is singular");
  }
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < b; ++c) {
      if ((piv[b].first >> c) & 1) {
        piv[b].first ^= piv[c].first;
        piv[b].second ^= piv[c].second;
      }
    }
  }
  coord_of_bit_.assign(n, 0);
  for (int b = 0; b < n; ++b) coord_of_bit_[b] = piv[b].second;
  if (e_ <= 18) {
    coord_tab_.assign(size(), 0);
    for (Elem y = 1; y < size(); ++y) {
      coord_tab_[y] = coord_tab_[y & (y - 1)] ^ coord_of_bit_[__builtin_ctzll(y)];
    }
  }

  const std::size_t qq = q();
  fq_elems_.assign(qq, 0);
  for (std::size_t c = 1; c < qq; ++c) fq_elems_[c] = fq_elems_[c & (c - 1)] ^ fq_basis[__builtin_ctzll(c)];
  fq_mul_.assign(qq * qq, 0);
  for (std::size_t a = 0; a < qq; ++a) {
    for (std::size_t b = 0; b < qq; ++b) {
      fq_mul_[a * qq + b] = static_cast<std::uint16_t>(fq_code(slow_mul(fq_elems_[a], fq_elems_[b])));
    }
  }
  fq_mul_cols_.assign(qq * h_, 0);
  for (std::size_t c = 0; c < qq; ++c) {
    for (int j = 0; j < h_; ++j) fq_mul_cols_[c * h_ + j] = fq_mul_[c * qq + (std::size_t{1} << j)];
  }
}

Elem Field::from_coords(std::uint64_t packed) const noexcept {
  Elem r = 0;
  for (std::uint64_t b = packed; b; b &= b - 1) r ^= elem_of_coord_[__builtin_ctzll(b)];
  return r;
}

int Field::fq_code(Elem c) const {
  const std::uint64_t packed = coords(c);
  int code = 0;
  std::uint64_t rest = packed;
  for (int k = 0; k < h_; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << (k * m_);
    if (packed & bit) code |= 1 << k;
    rest &= ~bit;
  }
  if (rest != 0) throw FieldError("element is not in F_q");
  return code;
}

int Field::fq_inv(int a) const {
  if (a == 0) throw ZeroInverse("inverse of zero in F_q");
  return fq_code(inv(fq_elems_[a]));
}

bool Field::row_is_zero(const FqRow& v) const noexcept {
  std::uint64_t acc = 0;
  for (int k = 0; k < h_; ++k) acc |= v.plane[k];
  return acc == 0;
}

int Field::row_lead(const FqRow& v) const noexcept {
  std::uint64_t acc = 0;
  for (int k = 0; k < h_; ++k) acc |= v.plane[k];
  return acc ? __builtin_ctzll(acc) : -1;
}

int Field::row_entry(const FqRow& v, int pos) const noexcept {
  int c = 0;
  for (int k = 0; k < h_; ++k) c |= static_cast<int>((v.plane[k] >> pos) & 1) << k;
  return c;
}

void Field::row_add(FqRow& y, const FqRow& x) const noexcept {
  for (int k = 0; k < h_; ++k) y.plane[k] ^= x.plane[k];
}

void Field::row_axpy(FqRow& y, int c, const FqRow& x) const noexcept {
  if (c == 0) return;
  if (h_ == 1) {
    y.plane[0] ^= x.plane[0];
    return;
  }
  const std::uint16_t* cols = &fq_mul_cols_[static_cast<std::size_t>(c) * h_];
  for (int j = 0; j < h_; ++j) {
    const std::uint64_t src = x.plane[j];
    if (!src) continue;
    for (unsigned col = cols[j]; col; col &= col - 1) y.plane[__builtin_ctz(col)] ^= src;
  }
}

FqRow Field::row_scaled(int c, const FqRow& x) const noexcept {
  FqRow out;
  row_axpy(out, c, x);
  return out;
}

void Field::row_put(FqRow& v, int slot, Elem y) const noexcept {
  const std::uint64_t packed = coords(y);
  const std::uint64_t mask = (std::uint64_t{1} << m_) - 1;
  const int shift = slot * m_;
  for (int k = 0; k < h_; ++k) {
    const std::uint64_t bits = (packed >> (k * m_)) & mask;
    v.plane[k] = (v.plane[k] & ~(mask << shift)) | (bits << shift);
  }
}

Elem Field::row_get(const FqRow& v, int slot) const noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << m_) - 1;
  std::uint64_t packed = 0;
  for (int k = 0; k < h_; ++k) packed |= ((v.plane[k] >> (slot * m_)) & mask) << (k * m_);
  return from_coords(packed);
}

void Field::build_trace_kernel() {
  std::vector<std::uint64_t> cols(e_);
  for (int j = 0; j < e_; ++j) cols[j] = rel_trace(Elem{1} << j, 2);
  FqEchelon ech(*this);
  for (Elem k : gf2_kernel(cols)) {
    FqRow row;
    row_put(row, 0, k);
    ech.insert(row);
  }
  trace_kernel_.clear();
  for (const FqRow& row : ech.rows()) trace_kernel_.push_back(row_get(row, 0));
}

std::string Field::to_hex(Elem a) const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int nibbles = (e_ + 3) / 4;
  std::string s(nibbles, '0');
  for (int i = 0; i < nibbles; ++i) s[nibbles - 1 - i] = kDigits[(a >> (4 * i)) & 0xf];
  return s;
}

Elem Field::from_hex(std::string_view s) const {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw FieldError("malformed element hex '" + std::string(s) + "'");
  }
  if (v >= size()) throw FieldError("element hex '" + std::string(s) + "' exceeds field degree");
  return v;
}

FieldElement::FieldElement(FieldPtr field, Elem bits) : field_(std::move(field)), bits_(bits) {
  if (!field_) throw FieldError("element without owning field");
  if (bits_ >= field_->size()) throw FieldError("element representative has degree >= e");
}

void FieldElement::check_owner(const FieldElement& o) const {
  if (!field_->same_as(*o.field_)) throw FieldMismatch("operands belong to different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_owner(o);
  return {field_, bits_ ^ o.bits_};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_owner(o);
  return {field_, field_->mul(bits_, o.bits_)};
}

FieldElement FieldElement::inv() const { return {field_, field_->inv(bits_)}; }

FieldElement FieldElement::pow(std::uint64_t n) const { return {field_, field_->pow(bits_, n)}; }

FieldElement FieldElement::frob_q(int i) const { return {field_, field_->frob_q(bits_, i)}; }

FieldElement FieldElement::rel_trace(int sub_index) const {
  return {field_, field_->rel_trace(bits_, sub_index)};
}

bool FieldElement::operator==(const FieldElement& o) const {
  check_owner(o);
  return bits_ == o.bits_;
}

}  // namespace scatter
