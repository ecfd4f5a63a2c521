#pragma once

// Rank-metric codes attached to q-systems: generator, rank weights, minimum distance and
// generalized weights, each by two independent routes.

#include <map>
#include <vector>

#include "scatter/fq_linalg.hpp"
#include "scatter/verdict.hpp"

namespace scatter {

class DegenerateSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankCode {
  FieldPtr field;
  int n = 0;
  int k = 0;
  int m = 0;
  MatrixFqm generator;  // k x n, column j = j-th canonical basis vector of the system
  FqSubspace system;
};

/// Throws DegenerateSystem when U is zero or does not span F_{q^m}^k.
RankCode code_from_system(const FqSubspace& u);

/// dim_q of the span of the coordinates.
int rank_weight(const Field& f, std::span<const Elem> codeword);
Vec encode(const RankCode& c, const Vec& message);

struct CodewordScan {
  int d = 0;
  std::map<int, std::uint64_t> distribution;  // rank weight -> number of nonzero codewords
  std::uint64_t checked = 0;
};

/// All q^{mk} - 1 nonzero codewords, Gray-code order over the message bits.
CodewordScan codeword_scan(const RankCode& c, const ScanOptions& opt = {});
/// d = n - max weight of a hyperplane.
int min_distance_hyperplanes(const RankCode& c, const ScanOptions& opt = {});
/// A_w = (q^m - 1) #{H : wt_U(H) = n - w}.
std::map<int, std::uint64_t> distribution_from_hyperplanes(const RankCode& c, const ScanOptions& opt = {});

/// d_ρ = n - max weight over codimension-ρ F_{q^m}-subspaces.
int generalized_weight_scan(const RankCode& c, int rho, const ScanOptions& opt = {});
/// d_ρ = n - max{dim S : S ⊆ U, dim ⟨S⟩_{q^m} <= k - ρ}.
int generalized_weight_fq(const RankCode& c, int rho, const ScanOptions& opt = {});
/// Same search on random subspaces; an upper bound on d_ρ, capped by n - k + ρ.
int generalized_weight_fq_sampled(const RankCode& c, int rho, Sampling sample);

struct WeightProfile {
  int n = 0;
  int k = 0;
  int m = 0;
  int d = 0;
  std::vector<int> d_rho;  // d_rho[ρ - 1]
  bool singleton_ok = false;
  bool is_mrd = false;
  std::vector<bool> rho_mrd;  // rho_mrd[ρ - 1]
  bool near_mrd = false;
  Mode mode = Mode::exhaustive;
};

WeightProfile classify(int n, int k, int m, const std::vector<int>& d_rho);

/// Exhaustive: d_ρ by the F_q-side formula, d additionally cross-checked against the
/// hyperplane scan (throws InvariantViolation on disagreement).
WeightProfile code_profile(const RankCode& c, const ScanOptions& opt = {});
WeightProfile code_profile_sampled(const RankCode& c, Sampling sample);

}  // namespace scatter
