#include "scatter/delsarte_dual.hpp"

namespace scatter {
namespace {

MatrixFqm zero_one(const int (&rows)[4][4]) {
  MatrixFqm m(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = static_cast<Elem>(rows[i][j]);
  }
  return m;
}

/// Span over x, y ∈ T of the 4-tuples produced by form(x, y); form must be F_q-linear.
template <class Form>
FqSubspace from_form(const FieldPtr& f, int r, Form form) {
  std::vector<Vec> gens;
  for (Elem t : f->trace_kernel_basis()) {
    gens.push_back(form(t, Elem{0}));
    gens.push_back(form(Elem{0}, t));
  }
  return FqSubspace::span(f, r, gens);
}

FqmSubspace coordinate_block(const FieldPtr& f, int r, int first, int count) {
  std::vector<Vec> rows;
  for (int i = first; i < first + count; ++i) {
    Vec v(r, 0);
    v[i] = 1;
    rows.push_back(std::move(v));
  }
  return FqmSubspace::span(f, r, rows);
}

void require(bool cond, const char* what) {
  if (!cond) throw InvariantViolation(std::string("Delsarte scene: ") + what);
}

}  // namespace

Elem beta_form(const Field& f, const Vec& x, const Vec& y) {
  Elem acc = 0;
  for (int i = 0; i < 4; ++i) acc ^= f.mul(x[i], y[i + 4]) ^ f.mul(x[i + 4], y[i]);
  return acc;
}

DelsarteScene build_scene(const FieldPtr& f) {
  DelsarteScene s;
  s.field = f;
  s.v_embed = coordinate_block(f, 8, 0, 4);
  s.w = from_form(f, 8, [&](Elem x, Elem y) {
    return Vec{x, y, f->frob_q(x, 1), f->frob_q(y, 1), f->frob_q(x, 2), f->frob_q(y, 2), f->frob_q(x, 3),
               f->frob_q(y, 3)};
  });
  // Γ = (0, 0, X2, X3, X3, X5, X6, X2)
  const std::vector<Vec> gamma_rows{Vec{0, 0, 1, 0, 0, 0, 0, 1}, Vec{0, 0, 0, 1, 1, 0, 0, 0},
                                    Vec{0, 0, 0, 0, 0, 1, 0, 0}, Vec{0, 0, 0, 0, 0, 0, 1, 0}};
  s.gamma = FqmSubspace::span(f, 8, gamma_rows);
  s.gram = MatrixFqm(8, 8);
  for (int i = 0; i < 4; ++i) {
    s.gram(i, i + 4) = 1;
    s.gram(i + 4, i) = 1;
  }
  const MatrixFqm g = MatrixFqm::from_rows(s.gamma.rows(), 8);
  s.gamma_perp = FqmSubspace::span(f, 8, nullspace(*f, mat_mul(*f, g, s.gram)));

  const auto& t = f->trace_kernel_basis();
  require(*row_reduce(*f, moore_matrix(*f, t)).det != 0, "Moore determinant of the trace-kernel basis vanishes");
  require(s.w.dim() == 8, "dim_q W != 8");
  require(fqm_span_dim(*f, s.w.basis()) == 8, "W does not span Z");
  std::vector<Vec> both(s.gamma.rows());
  both.insert(both.end(), s.v_embed.rows().begin(), s.v_embed.rows().end());
  require(fqm_span_dim(*f, both) == 8, "Γ ∩ V != 0");
  const FqSubspace gamma_q = FqSubspace::flatten(s.gamma);
  require(s.w.intersect(gamma_q).dim() == 0, "W ∩ Γ != 0");
  require(s.w.sum(gamma_q).dim() == 8 + 6 * 4, "⟨W, Γ⟩ is not a direct sum");
  require(*row_reduce(*f, s.gram).det != 0, "β is degenerate");
  require(s.gamma_perp.dim() == 4, "dim Γ^⊥ != 4");
  // Γ^⊥ = (Z0, 0, 0, Z3, Z4, Z5, Z3, Z0)
  const std::vector<Vec> perp_rows{Vec{1, 0, 0, 0, 0, 0, 0, 1}, Vec{0, 0, 0, 1, 0, 0, 1, 0},
                                   Vec{0, 0, 0, 0, 1, 0, 0, 0}, Vec{0, 0, 0, 0, 0, 1, 0, 0}};
  require(FqmSubspace::span(f, 8, perp_rows) == s.gamma_perp, "Γ^⊥ differs from its closed form");
  return s;
}

FqSubspace primal_closed_form(const FieldPtr& f) {
  return from_form(f, 4, [&](Elem x, Elem y) {
    return Vec{x, y, f->frob_q(x, 1) ^ f->frob_q(y, 3), f->frob_q(y, 1) ^ f->frob_q(x, 2)};
  });
}

FqSubspace dual_closed_form(const FieldPtr& f) {
  return from_form(f, 4, [&](Elem x, Elem y) {
    return Vec{x ^ f->frob_q(y, 3), y, f->frob_q(x, 1), f->frob_q(y, 1) ^ f->frob_q(x, 3)};
  });
}

FqSubspace dual_closed_form_zt(const FieldPtr& f) {
  return from_form(f, 4, [&](Elem z, Elem t) {
    return Vec{f->frob_q(z, 1) ^ f->frob_q(z, 3) ^ f->frob_q(t, 3), t, z, f->frob_q(t, 1) ^ f->frob_q(z, 2)};
  });
}

FqSubspace dual_arrangement(const FieldPtr& f) {
  return from_form(f, 4, [&](Elem z, Elem t) {
    return Vec{z, t, f->frob_q(z, 2) ^ f->frob_q(t, 1), f->frob_q(z, 1) ^ f->frob_q(z, 3) ^ f->frob_q(t, 3)};
  });
}

FqSubspace primal_from_scene(const DelsarteScene& s) {
  const FqSubspace meet = s.w.sum(FqSubspace::flatten(s.gamma)).intersect(FqSubspace::flatten(s.v_embed));
  const FqSubspace proj = meet.project(0, 4);
  if (proj.dim() != meet.dim() || !(proj == primal_closed_form(s.field))) {
    throw ClosedFormMismatch("⟨W, Γ⟩ ∩ V differs from (x, y, x^q + y^{q³}, y^q + x^{q²})");
  }
  return proj;
}

FqSubspace dual_from_scene(const DelsarteScene& s) {
  const FqSubspace meet = s.w.sum(FqSubspace::flatten(s.gamma_perp)).intersect(FqSubspace::flatten(s.v_embed));
  const FqSubspace proj = meet.project(0, 4);
  if (proj.dim() != meet.dim() || !(proj == dual_closed_form(s.field))) {
    throw ClosedFormMismatch("⟨W, Γ^⊥⟩ ∩ Δ differs from (x + y^{q³}, y, x^q, y^q + x^{q³})");
  }
  if (!(proj == dual_closed_form_zt(s.field))) {
    throw ClosedFormMismatch("the two closed forms of the dual disagree");
  }
  return proj;
}

MatrixFqm dual_equivalence_matrix() {
  static constexpr int rows[4][4] = {{1, 1, 1, 0}, {1, 1, 0, 1}, {1, 1, 1, 1}, {1, 0, 1, 0}};
  return zero_one(rows);
}

MatrixFqm dual_coordinate_permutation() {
  static constexpr int rows[4][4] = {{0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
  return zero_one(rows);
}

Verdict verify_dual_equivalence(const FieldPtr& f, const MatrixFqm& d) {
  Verdict v;
  v.mode = Mode::exhaustive;
  const FqSubspace u = build_Us(f, 1);
  const FqSubspace target = dual_arrangement(f);
  const MatrixFqm dt = d.transpose();
  for (const auto& b : u.basis()) {
    ++v.checked_count;
    const Vec img = vec_mul(*f, b, dt);
    if (!target.contains(img)) {
      v.ok = false;
      v.witness = Witness{"basis_vector_image_outside", {b, img}, 0};
      return v;
    }
  }
  if (row_reduce(*f, d).rank < 4) {
    v.ok = false;
    v.note = "matrix is singular";
  }
  return v;
}

}  // namespace scatter
