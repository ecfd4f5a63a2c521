#pragma once

// The subspaces U_s of F_{q^6}^4 and the h-scatteredness tests.

#include <map>
#include <string_view>

#include "scatter/fq_linalg.hpp"
#include "scatter/parallel.hpp"
#include "scatter/rng.hpp"
#include "scatter/verdict.hpp"

namespace scatter {

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// U_s = {(x, y, x^{σ²} + y^σ, x^σ + y^{σ³}) : x, y ∈ T}, σ = q^s, s ∈ {1, 5}.
FqSubspace build_Us(const FieldPtr& f, int s);
/// {(x, y, x^{q²} + y^q + y^{q³}, x^q + x^{q³} + y^{q³}) : x, y ∈ T}.
FqSubspace build_U5prime(const FieldPtr& f);
/// The 0/1 matrix M with M · u'^T = u^T mapping the second form onto U_1 (column action).
MatrixFqm u5prime_to_u1_matrix();

struct DimBound {
  int value = 0;
  bool exact = true;       // (order + 1) divides r n
  bool degenerate = false; // order = 0
};
/// floor(r n / (order + 1)).
DimBound max_dim_bound(int r, int n, int order);

/// Smallest enumeration index (RREF order over F_q) of a d-dim F_q-subspace S of U with
/// dim ⟨S⟩_{q^m} <= max_span, or kNoIndex when there is none.
std::uint64_t find_low_span_subspace(const FqSubspace& u, int d, int max_span, const ScanOptions& opt = {});
/// Basis vectors of the d-dim F_q-subspace of U at an enumeration index.
std::vector<Vec> fq_subspace_at(const FqSubspace& u, int d, std::uint64_t index);

/// U is order-scattered iff it spans V and every (order+1)-dim F_q-subspace of U spans an
/// F_{q^m}-space of dimension order+1. Exhaustive over F_q-subspaces of U.
Verdict is_h_scattered_fast(const FqSubspace& u, int order, const ScanOptions& opt = {});
Verdict is_h_scattered_fast_sampled(const FqSubspace& u, int order, Sampling sample);
/// Literal definition: every order-dim F_{q^m}-subspace meets U in F_q-dimension <= order.
Verdict is_h_scattered_oracle(const FqSubspace& u, int order, const ScanOptions& opt = {});
Verdict is_h_scattered_oracle_sampled(const FqSubspace& u, int order, Sampling sample);

/// From a fast-test witness S (span dim <= order), an order-dim F_{q^m}-subspace containing
/// it; its weight in U is at least order + 1.
FqmSubspace fast_witness_to_subspace(const FqSubspace& u, const std::vector<Vec>& s, int order);
/// From an oracle witness H (weight >= order + 1), an (order+1)-dim F_q-subspace of U ∩ H.
std::vector<Vec> oracle_witness_to_fq(const FqSubspace& u, const FqmSubspace& h, int order);

/// Setwise invariance under the coordinatewise map x -> x^{q²}.
bool frobenius_fixed(const FqmSubspace& h);
bool frobenius_fixed(const FqSubspace& u);
/// Even weight for Frobenius-fixed H; applicable = false otherwise.
Verdict parity_check(const FqSubspace& u, const FqmSubspace& h);

/// Random d-dim F_{q^m}-subspace with an F_{q²}-rational generator matrix.
FqmSubspace random_fixed_subspace(const FieldPtr& f, int r, int d, Rng& rng);
FqmSubspace random_fqm_subspace(const FieldPtr& f, int r, int d, Rng& rng);
FqSubspace random_fq_subspace(const FqSubspace& u, int d, Rng& rng);

enum class Family { all, frobenius_fixed };

struct Spectrum {
  std::map<int, std::uint64_t> histogram;
  std::uint64_t count = 0;
  int subspace_dim = 0;
  Family family = Family::all;
  Mode mode = Mode::exhaustive;
};

/// Weights of all (r - codim)-dim F_{q^m}-subspaces (or only the Frobenius-fixed ones).
Spectrum weight_spectrum(const FqSubspace& u, int codim, Family family, const ScanOptions& opt = {});
Spectrum weight_spectrum_sampled(const FqSubspace& u, int codim, Family family, Sampling sample);

enum class SystemCase {
  alpha_only,        // α ≠ 0, β = 0
  beta_only,         // α = 0, β ≠ 0
  zero_gamma_zero,   // α = β = 0, γ = 0
  zero_gamma_nonzero,
  both_nonzero,
};
std::string_view to_string(SystemCase c) noexcept;

/// au + bv + u^{q²} + v^q = 0, cu + dv + u^q + v^{q³} = 0 over (u, v) ∈ T × T.
struct SemilinearSystem {
  FieldPtr field;
  Elem a = 0, b = 0, c = 0, d = 0;
  Elem alpha = 0, beta = 0, gamma = 0;
  SystemCase bucket = SystemCase::both_nonzero;
  int kernel_dim = 0;
  std::vector<std::pair<Elem, Elem>> kernel_basis;  // F_q-basis of the solutions
};

SemilinearSystem semilinear_system(const FieldPtr& f, Elem a, Elem b, Elem c, Elem d);
/// q^{kernel_dim}.
std::uint64_t count_solutions(const SemilinearSystem& sys);
/// All solutions (u, v); small kernels only.
std::vector<std::pair<Elem, Elem>> system_solutions(const SemilinearSystem& sys);
/// Row space of (1, 0, a, c), (0, 1, b, d): its weight in U_1 is kernel_dim.
FqmSubspace system_subspace(const SemilinearSystem& sys);
/// λ(u) = au + a^{q²}u^{q²} + a^{q⁴}(u + u^{q²}), the F_{q²}-valued quantity fixed by F₁.
Elem system_lambda(const Field& f, Elem a, Elem u);

}  // namespace scatter
