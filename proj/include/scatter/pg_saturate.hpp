#pragma once

// Points of PG(k-1, q^m), linear sets, and rho-saturation.

#include <cstdint>
#include <vector>

#include "scatter/fq_linalg.hpp"
#include "scatter/parallel.hpp"
#include "scatter/verdict.hpp"

namespace scatter {

/// Dense ids for the points of PG(k-1, Q), Q = 2^e. A point is stored normalized (first
/// nonzero coordinate 1); its id is the offset of the block with that leading position plus
/// the remaining coordinates packed e bits each, most significant first.
class ProjectiveSpace {
 public:
  /// Requires e (k - 1) <= 60.
  ProjectiveSpace(FieldPtr f, int k);

  const FieldPtr& field() const noexcept { return f_; }
  int k() const noexcept { return k_; }
  std::uint64_t size() const noexcept { return offset_.back(); }

  static Vec normalize(const Field& f, Vec v);
  /// Id of the point spanned by a nonzero vector.
  std::uint64_t id(const Vec& v) const;
  Vec point(std::uint64_t id) const;

  /// e(k-1-c) for coordinate c.
  int shift(int c) const noexcept { return e_ * (k_ - 1 - c); }
  std::uint64_t pack(std::span<const Elem> v) const noexcept;
  /// Id of a normalized vector with leading position lead, from its packed form.
  std::uint64_t id_packed(int lead, std::uint64_t packed) const noexcept {
    return offset_[lead] + (packed & ((std::uint64_t{1} << shift(lead)) - 1));
  }

 private:
  FieldPtr f_;
  int k_;
  int e_;
  std::vector<std::uint64_t> offset_;  // k + 1 entries
};

class PointSet {
 public:
  explicit PointSet(std::uint64_t n) : n_(n), words_((n + 63) / 64, 0) {}

  void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }
  void merge(const PointSet& o) noexcept;
  std::uint64_t count() const noexcept;
  /// Smallest unset index, or kNoIndex when all are set.
  std::uint64_t first_unset() const noexcept;
  std::uint64_t size() const noexcept { return n_; }
  template <class F>
  void for_each(F f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t b = words_[w]; b; b &= b - 1) f(w * 64 + __builtin_ctzll(b));
    }
  }

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> words_;
};

/// Sets every point of the F_{q^m}-span of rows given in reduced row-echelon form.
void mark_span(const ProjectiveSpace& pg, std::span<const Vec> rref, std::span<const int> pivots, PointSet& marks);

/// Ids of the points of L(U), sorted.
std::vector<std::uint64_t> linear_set_ids(const ProjectiveSpace& pg, const FqSubspace& u, const ScanOptions& opt = {});
/// The same points as normalized vectors, in id order.
std::vector<Vec> linear_set_points(const FqSubspace& u, const ScanOptions& opt = {});

struct SaturationResult {
  Verdict verdict;
  int rho = 0;
  std::uint64_t set_size = 0;
  std::uint64_t ambient_points = 0;
  std::uint64_t subsets = 0;
  std::uint64_t distinct_planes = 0;  // hyperplanes spanned, marked once each
};

/// Saturating iff every point of PG(k-1, q^m) lies in the span of rho+1 points of s.
/// Exhaustive: marks the span of every (rho+1)-subset; on failure the witness is the
/// uncovered point of least id.
SaturationResult is_rho_saturating(const ProjectiveSpace& pg, const std::vector<Vec>& s, int rho,
                                   const ScanOptions& opt = {});
SaturationResult is_rho_saturating(const FqSubspace& u, int rho, const ScanOptions& opt = {});

/// Random ambient points, each searched for a covering span of rho+1 points of L(U) through
/// tries random lines ⟨P, u⟩, u ∈ U. k = 4 and rho <= 2 only (rho >= 3 is decided by spanning).
/// A point with no cover found is reported as a candidate, never as proof.
SaturationResult is_rho_saturating_sampled(const FqSubspace& u, int rho, Sampling sample, int tries = 4,
                                           const ScanOptions& opt = {});

/// n choose r, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r) noexcept;

}  // namespace scatter
