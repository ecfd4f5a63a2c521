#pragma once

// Binary extension fields GF(2^e) viewed as the tower F_q < F_{q^2} < F_{q^6}, q = 2^h.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scatter {

/// Raw element bits: coefficient of x^i is bit i of the word.
using Elem = std::uint64_t;

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReducibleModulus : public FieldError {
 public:
  using FieldError::FieldError;
};

class DegreeMismatch : public FieldError {
 public:
  using FieldError::FieldError;
};

class EvenH : public FieldError {
 public:
  using FieldError::FieldError;
};

class ZeroInverse : public FieldError {
 public:
  using FieldError::FieldError;
};

class FieldMismatch : public FieldError {
 public:
  using FieldError::FieldError;
};

class BadSubIndex : public FieldError {
 public:
  using FieldError::FieldError;
};

/// Upper bound on h_exp supported by the bit-sliced F_q rows (e = 6h <= 54).
inline constexpr int kMaxPlanes = 9;

/// Number of F_q-linear positions a bit-sliced row can hold.
inline constexpr int kMaxPositions = 64;

/// A vector over F_q with up to 64 positions, stored bit-sliced: the F_q entry at
/// position p is the h-bit code whose k-th bit is bit p of plane[k].
struct FqRow {
  std::array<std::uint64_t, kMaxPlanes> plane{};

  bool operator==(const FqRow&) const = default;
};

/// Immutable description of GF(2^e) with e = 6h, h odd, together with the precomputed
/// tables used by every hot loop (multiplication, q-Frobenius powers, F_q-coordinates).
class Field {
 public:
  /// Validates and builds the field. Throws EvenH, DegreeMismatch or ReducibleModulus.
  static std::shared_ptr<const Field> make(int degree, std::uint64_t modulus, int h_exp);

  /// Field with the shipped default modulus for degree 6h.
  static std::shared_ptr<const Field> tower(int h_exp);

  /// Default irreducible modulus for a degree, or 0 when none is shipped.
  static std::uint64_t default_modulus(int degree) noexcept;

  /// Rabin irreducibility test over GF(2).
  static bool is_irreducible(std::uint64_t poly) noexcept;

  int degree() const noexcept { return e_; }
  int h_exp() const noexcept { return h_; }
  /// Degree of the ambient field over F_q (always 6 for tower fields).
  int m() const noexcept { return m_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  /// |F_{q^m}| = 2^e.
  std::uint64_t size() const noexcept { return std::uint64_t{1} << e_; }
  std::uint64_t q() const noexcept { return std::uint64_t{1} << h_; }

  Elem add(Elem a, Elem b) const noexcept { return a ^ b; }
  Elem mul(Elem a, Elem b) const noexcept {
    if (!log_.empty()) {
      if (a == 0 || b == 0) return 0;
      return exp_[log_[a] + log_[b]];
    }
    return slow_mul(a, b);
  }
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t n) const noexcept;

  /// x^(q^i) for any i >= 0.
  Elem frob_q(Elem x, int i) const noexcept {
    const int k = i % m_;
    if (!frob_tab_.empty()) return frob_tab_[static_cast<std::size_t>(k) * size() + x];
    Elem r = 0;
    const Elem* cols = &frob_cols_[static_cast<std::size_t>(k) * e_];
    for (Elem b = x; b; b &= b - 1) r ^= cols[__builtin_ctzll(b)];
    return r;
  }

  /// Relative trace onto F_q (sub_index 1) or F_{q^2} (sub_index 2).
  Elem rel_trace(Elem x, int sub_index) const;

  /// Membership in F_{q^d}, decided by x^(q^d) = x.
  bool in_subfield(Elem x, int d) const noexcept { return frob_q(x, d) == x; }

  /// Canonical F_q-basis of T = ker Tr_{q^6/q^2}.
  const std::vector<Elem>& trace_kernel_basis() const noexcept { return trace_kernel_; }

  /// All elements of F_{q^d} (d dividing m) in increasing bit order.
  std::vector<Elem> subfield_elements(int d) const;

  // --- F_q-coordinates with respect to the basis {b_k x^i : k < h, i < m}, where
  // b_0 = 1, ..., b_{h-1} is an F_2-basis of F_q and x is the root of the modulus.
  // Packed form: bit k*m + i holds the k-th bit of the F_q-coordinate at x^i.

  std::uint64_t coords(Elem y) const noexcept {
    if (!coord_tab_.empty()) return coord_tab_[y];
    std::uint64_t r = 0;
    for (Elem b = y; b; b &= b - 1) r ^= coord_of_bit_[__builtin_ctzll(b)];
    return r;
  }
  Elem from_coords(std::uint64_t packed) const noexcept;

  /// F_q elements are addressed by h-bit codes; code 1 is the identity.
  int fq_code(Elem c) const;
  Elem fq_elem(int code) const noexcept { return fq_elems_[code]; }
  int fq_mul(int a, int b) const noexcept { return fq_mul_[static_cast<std::size_t>(a) * q() + b]; }
  int fq_inv(int a) const;

  // --- bit-sliced F_q rows
  bool row_is_zero(const FqRow& v) const noexcept;
  /// Lowest nonzero position, or -1.
  int row_lead(const FqRow& v) const noexcept;
  int row_entry(const FqRow& v, int pos) const noexcept;
  void row_add(FqRow& y, const FqRow& x) const noexcept;
  /// y += c * x for an F_q code c.
  void row_axpy(FqRow& y, int c, const FqRow& x) const noexcept;
  FqRow row_scaled(int c, const FqRow& x) const noexcept;
  /// Writes the F_q-coordinates of y at positions slot*m .. slot*m + m - 1.
  void row_put(FqRow& v, int slot, Elem y) const noexcept;
  Elem row_get(const FqRow& v, int slot) const noexcept;

  /// Element wire format: lowercase hex of ceil(e/4) nibbles, constant term in bit 0.
  std::string to_hex(Elem a) const;
  Elem from_hex(std::string_view s) const;

  bool same_as(const Field& other) const noexcept {
    return this == &other || (e_ == other.e_ && h_ == other.h_ && modulus_ == other.modulus_);
  }

  /// Shift-and-add multiplication with reduction, independent of the tables.
  Elem slow_mul(Elem a, Elem b) const noexcept;

 private:
  Field(int degree, std::uint64_t modulus, int h_exp);
  void build_tables();
  void build_frobenius();
  void build_subfield_coords();
  void build_trace_kernel();

  int e_;
  int h_;
  int m_;
  std::uint64_t modulus_;

  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;

  std::vector<Elem> frob_cols_;  // m blocks of e columns
  std::vector<Elem> frob_tab_;   // m blocks of 2^e entries, small fields only

  std::vector<Elem> fq_elems_;             // code -> element
  std::vector<std::uint16_t> fq_mul_;      // code x code -> code
  std::vector<std::uint16_t> fq_mul_cols_; // code c, column j -> code(c * b_j)
  std::vector<std::uint64_t> coord_of_bit_;
  std::vector<Elem> elem_of_coord_;        // bit k*m+i -> b_k x^i
  std::vector<std::uint64_t> coord_tab_;

  std::vector<Elem> trace_kernel_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Value-semantic element tied to its owning field.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Elem bits);

  static FieldElement zero(FieldPtr field) { return {std::move(field), 0}; }
  static FieldElement one(FieldPtr field) { return {std::move(field), 1}; }

  Elem bits() const noexcept { return bits_; }
  const FieldPtr& field() const noexcept { return field_; }
  bool is_zero() const noexcept { return bits_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const { return *this + o; }
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const { return *this * o.inv(); }
  FieldElement inv() const;
  FieldElement pow(std::uint64_t n) const;
  FieldElement frob_q(int i) const;
  FieldElement rel_trace(int sub_index) const;

  bool operator==(const FieldElement& o) const;

  std::string hex() const { return field_->to_hex(bits_); }

 private:
  void check_owner(const FieldElement& o) const;

  FieldPtr field_;
  Elem bits_;
};

}  // namespace scatter
