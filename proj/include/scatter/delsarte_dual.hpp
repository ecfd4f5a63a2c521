#pragma once

// Explicit Delsarte-dual construction for U_1 inside Z = F_{q^6}^8.

#include "scatter/fq_linalg.hpp"
#include "scatter/scatter_core.hpp"
#include "scatter/verdict.hpp"

namespace scatter {

class ClosedFormMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DelsarteScene {
  FieldPtr field;
  FqmSubspace v_embed;  // (Y0, Y1, Y2, Y3, 0, 0, 0, 0); also the block Δ
  FqSubspace w;         // (x, y, x^q, y^q, x^{q²}, y^{q²}, x^{q³}, y^{q³}), x, y ∈ T
  FqmSubspace gamma;    // (0, 0, X2, X3, X3, X5, X6, X2)
  FqmSubspace gamma_perp;
  MatrixFqm gram;       // β(X, Y) = X gram Y^T
};

/// Builds the scene and checks its invariants; throws InvariantViolation.
DelsarteScene build_scene(const FieldPtr& f);

Elem beta_form(const Field& f, const Vec& x, const Vec& y);

/// {(x, y, x^q + y^{q³}, y^q + x^{q²})}.
FqSubspace primal_closed_form(const FieldPtr& f);
/// {(x + y^{q³}, y, x^q, y^q + x^{q³})}.
FqSubspace dual_closed_form(const FieldPtr& f);
/// {(z^q + z^{q³} + t^{q³}, t, z, t^q + z^{q²})}.
FqSubspace dual_closed_form_zt(const FieldPtr& f);
/// {(z, t, z^{q²} + t^q, z^q + z^{q³} + t^{q³})}: the image of U_1 under the dual matrix.
FqSubspace dual_arrangement(const FieldPtr& f);

/// ⟨W, Γ⟩_q ∩ V projected to F^4; throws ClosedFormMismatch.
FqSubspace primal_from_scene(const DelsarteScene& s);
/// ⟨W, Γ^⊥⟩_q ∩ Δ projected to F^4; throws ClosedFormMismatch.
FqSubspace dual_from_scene(const DelsarteScene& s);

/// The 0/1 matrix D with D · u^T in the arrangement for u ∈ U_1 (column action).
MatrixFqm dual_equivalence_matrix();
/// Permutation P (row action) with arrangement · P = dual closed form.
MatrixFqm dual_coordinate_permutation();

/// Applies d to every basis vector of U_1 (column action) and checks the image lies in the
/// arrangement with equal dimension. On failure the witness is the first basis vector of U_1
/// whose image falls outside.
Verdict verify_dual_equivalence(const FieldPtr& f, const MatrixFqm& d);
inline Verdict verify_dual_equivalence(const FieldPtr& f) {
  return verify_dual_equivalence(f, dual_equivalence_matrix());
}

}  // namespace scatter
