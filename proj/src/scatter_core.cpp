#include "scatter/scatter_core.hpp"

#include <array>
#include <stdexcept>

#include "scatter/fq_echelon.hpp"
#include "scatter/parallel.hpp"

namespace scatter {
namespace {

Vec make_vec(Elem a, Elem b, Elem c, Elem d) { return Vec{a, b, c, d}; }

/// Vector sum_j code(i, j) * u_j for row i of an F_q coefficient cursor.
void combine_row(const Field& f, const FqSubspace& u, const RrefCursor& cur, int i, Vec& out) {
  std::fill(out.begin(), out.end(), 0);
  const auto& basis = u.basis();
  for (int j = 0; j < cur.n(); ++j) {
    const auto code = static_cast<int>(cur.symbol(i, j));
    if (!code) continue;
    const Vec& b = basis[j];
    if (code == 1) {
      for (std::size_t c = 0; c < out.size(); ++c) out[c] ^= b[c];
    } else {
      const Elem x = f.fq_elem(code);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] ^= f.mul(x, b[c]);
    }
  }
}

/// Scans every item of an RREF cursor with a per-worker predicate; returns the smallest
/// index whose predicate fails, or kNoIndex.
template <class MakeCheck>
std::uint64_t first_failure(int n, int d, std::uint64_t alphabet, int workers, MakeCheck make_check) {
  FirstFailure ff;
  run_slices(workers, [&](int, Slice s) {
    auto check = make_check();
    RrefCursor cur(n, d, alphabet);
    cur.seek(s.start);
    for (; cur.valid() && !ff.beyond(cur.index()); cur.advance(s.stride)) {
      if (!check(cur)) {
        ff.report(cur.index());
        break;
      }
    }
  });
  return ff.get();
}

std::vector<Vec> cursor_fqm_rows(const RrefCursor& cur, std::span<const Elem> alphabet) {
  std::vector<Vec> rows(cur.d(), Vec(cur.n()));
  for (int i = 0; i < cur.d(); ++i) {
    for (int j = 0; j < cur.n(); ++j) {
      const auto s = cur.symbol(i, j);
      rows[i][j] = alphabet.empty() ? s : alphabet[s];
    }
  }
  return rows;
}

void check_order(int order) {
  if (order < 1) throw std::invalid_argument("scattering order must be >= 1");
}

}  // namespace

FqSubspace build_Us(const FieldPtr& f, int s) {
  if (s != 1 && s != 5) throw std::invalid_argument("s must be 1 or 5");
  auto sig = [&](Elem x, int k) { return f->frob_q(x, (s * k) % 6); };
  std::vector<Vec> gens;
  for (Elem t : f->trace_kernel_basis()) gens.push_back(make_vec(t, 0, sig(t, 2), sig(t, 1)));
  for (Elem t : f->trace_kernel_basis()) gens.push_back(make_vec(0, t, sig(t, 1), sig(t, 3)));
  return FqSubspace::span(f, 4, gens);
}

FqSubspace build_U5prime(const FieldPtr& f) {
  std::vector<Vec> gens;
  for (Elem t : f->trace_kernel_basis()) {
    gens.push_back(make_vec(t, 0, f->frob_q(t, 2), f->frob_q(t, 1) ^ f->frob_q(t, 3)));
  }
  for (Elem t : f->trace_kernel_basis()) {
    gens.push_back(make_vec(0, t, f->frob_q(t, 1) ^ f->frob_q(t, 3), f->frob_q(t, 3)));
  }
  return FqSubspace::span(f, 4, gens);
}

MatrixFqm u5prime_to_u1_matrix() {
  MatrixFqm m(4, 4);
  const int rows[4][4] = {{1, 0, 1, 1}, {0, 0, 1, 0}, {1, 1, 0, 1}, {1, 0, 0, 0}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = static_cast<Elem>(rows[i][j]);
  }
  return m;
}

DimBound max_dim_bound(int r, int n, int order) {
  DimBound b;
  b.value = r * n / (order + 1);
  b.exact = (r * n) % (order + 1) == 0;
  b.degenerate = order == 0;
  return b;
}

// ---------------------------------------------------------------- scatteredness

std::uint64_t find_low_span_subspace(const FqSubspace& u, int d, int max_span, const ScanOptions& opt) {
  const Field& f = *u.field();
  const int r = u.ambient();
  return first_failure(u.dim(), d, f.q(), opt.workers, [&] {
    return [&, vecs = std::vector<Vec>(d, Vec(r))](const RrefCursor& cur) mutable {
      for (int i = 0; i < d; ++i) combine_row(f, u, cur, i, vecs[i]);
      return fqm_span_dim(f, vecs) > max_span;
    };
  });
}

std::vector<Vec> fq_subspace_at(const FqSubspace& u, int d, std::uint64_t index) {
  RrefCursor cur(u.dim(), d, u.field()->q());
  cur.seek(index);
  std::vector<Vec> vecs(d, Vec(u.ambient()));
  for (int i = 0; i < d; ++i) combine_row(*u.field(), u, cur, i, vecs[i]);
  return vecs;
}

Verdict is_h_scattered_fast(const FqSubspace& u, int order, const ScanOptions& opt) {
  check_order(order);
  const Field& f = *u.field();
  Verdict v;
  v.mode = Mode::fast;
  const int r = u.ambient();
  const int n = u.dim();
  const int span = fqm_span_dim(f, u.basis());
  if (span < r) {
    v.ok = false;
    v.witness = Witness{"not_spanning", u.basis(), span};
    v.note = "U does not span the ambient space";
    return v;
  }
  const int d = order + 1;
  if (d > n) {
    v.degenerate = true;
    v.note = "no F_q-subspace of U has dimension order+1";
    return v;
  }
  const std::uint64_t total = gaussian_binomial(n, d, f.q());
  require_budget(total, opt, "fast scatteredness scan");
  const std::uint64_t bad = find_low_span_subspace(u, d, order, opt);
  if (bad == kNoIndex) {
    v.checked_count = total;
    return v;
  }
  const auto vecs = fq_subspace_at(u, d, bad);
  v.ok = false;
  v.checked_count = bad + 1;
  v.witness = Witness{"fq_subspace_low_span", FqSubspace::span(u.field(), r, vecs).basis(), fqm_span_dim(f, vecs)};
  return v;
}

Verdict is_h_scattered_fast_sampled(const FqSubspace& u, int order, Sampling sample) {
  check_order(order);
  const Field& f = *u.field();
  Verdict v;
  v.mode = Mode::sampled;
  v.note = "sampled evidence, not a certificate";
  const int d = order + 1;
  if (d > u.dim()) {
    v.degenerate = true;
    return v;
  }
  Rng rng(sample.seed);
  for (std::uint64_t i = 0; i < sample.count; ++i) {
    const FqSubspace s = random_fq_subspace(u, d, rng);
    const int span = fqm_span_dim(f, s.basis());
    if (span < d) {
      v.ok = false;
      v.checked_count = i + 1;
      v.witness = Witness{"fq_subspace_low_span", s.basis(), span};
      return v;
    }
  }
  v.checked_count = sample.count;
  return v;
}

Verdict is_h_scattered_oracle(const FqSubspace& u, int order, const ScanOptions& opt) {
  check_order(order);
  const Field& f = *u.field();
  const int r = u.ambient();
  Verdict v;
  v.mode = Mode::exhaustive;
  if (order >= r) {
    v.degenerate = true;
    v.checked_count = 1;
    v.note = "order >= r: the only subspace is the ambient, vacuous";
    return v;
  }
  const std::uint64_t total = gaussian_binomial(r, order, f.size());
  require_budget(total, opt, "exhaustive oracle scan");
  const WeightEvaluator ev(u);
  const std::uint64_t bad = first_failure(r, order, f.size(), opt.workers, [&] {
    return [&, rref = std::vector<Elem>(static_cast<std::size_t>(order) * r)](const RrefCursor& cur) mutable {
      for (int i = 0; i < order; ++i) {
        for (int j = 0; j < r; ++j) rref[static_cast<std::size_t>(i) * r + j] = cur.symbol(i, j);
      }
      return ev.weight(rref, cur.pivots()) <= order;
    };
  });
  if (bad == kNoIndex) {
    v.checked_count = total;
    return v;
  }
  RrefCursor cur(r, order, f.size());
  cur.seek(bad);
  const auto h = FqmSubspace::span(u.field(), r, cursor_fqm_rows(cur, {}));
  v.ok = false;
  v.checked_count = bad + 1;
  v.witness = Witness{"fqm_subspace_high_weight", h.rows(), weight(u, h)};
  return v;
}

Verdict is_h_scattered_oracle_sampled(const FqSubspace& u, int order, Sampling sample) {
  check_order(order);
  Verdict v;
  v.mode = Mode::sampled;
  v.note = "sampled evidence, not a certificate";
  if (order >= u.ambient()) {
    v.degenerate = true;
    return v;
  }
  const WeightEvaluator ev(u);
  Rng rng(sample.seed);
  for (std::uint64_t i = 0; i < sample.count; ++i) {
    const FqmSubspace h = random_fqm_subspace(u.field(), u.ambient(), order, rng);
    const int w = ev.weight(h);
    if (w > order) {
      v.ok = false;
      v.checked_count = i + 1;
      v.witness = Witness{"fqm_subspace_high_weight", h.rows(), w};
      return v;
    }
  }
  v.checked_count = sample.count;
  return v;
}

FqmSubspace fast_witness_to_subspace(const FqSubspace& u, const std::vector<Vec>& s, int order) {
  const int r = u.ambient();
  std::vector<Vec> gens = FqmSubspace::span(u.field(), r, s).rows();
  for (int i = 0; i < r && static_cast<int>(gens.size()) < order; ++i) {
    Vec e(r, 0);
    e[i] = 1;
    gens.push_back(e);
    if (fqm_span_dim(*u.field(), gens) < static_cast<int>(gens.size())) gens.pop_back();
  }
  return FqmSubspace::span(u.field(), r, gens);
}

std::vector<Vec> oracle_witness_to_fq(const FqSubspace& u, const FqmSubspace& h, int order) {
  const FqSubspace meet = u.intersect(FqSubspace::flatten(h));
  if (meet.dim() < order + 1) throw InvariantViolation("witness has weight <= order");
  return std::vector<Vec>(meet.basis().begin(), meet.basis().begin() + order + 1);
}

// ---------------------------------------------------------------- Frobenius-fixed subspaces

bool frobenius_fixed(const FqmSubspace& h) {
  // The RREF is unique, so H is fixed iff its RREF is entrywise fixed.
  const Field& f = *h.field();
  for (const auto& row : h.rows()) {
    for (Elem x : row) {
      if (!f.in_subfield(x, 2)) return false;
    }
  }
  return true;
}

bool frobenius_fixed(const FqSubspace& u) { return u.frobenius(2) == u; }

Verdict parity_check(const FqSubspace& u, const FqmSubspace& h) {
  Verdict v;
  v.checked_count = 1;
  if (!frobenius_fixed(h)) {
    v.applicable = false;
    v.note = "subspace is not fixed by the q^2-Frobenius";
    return v;
  }
  const int w = weight(u, h);
  if (w % 2 != 0) {
    v.ok = false;
    v.witness = Witness{"odd_weight_fixed_subspace", h.rows(), w};
  }
  return v;
}

FqmSubspace random_fixed_subspace(const FieldPtr& f, int r, int d, Rng& rng) {
  const auto sub = f->subfield_elements(2);
  for (;;) {
    std::vector<Vec> gens(d, Vec(r));
    for (auto& g : gens) {
      for (auto& x : g) x = sub[rng.below(sub.size())];
    }
    auto h = FqmSubspace::span(f, r, gens);
    if (h.dim() == d) return h;
  }
}

FqmSubspace random_fqm_subspace(const FieldPtr& f, int r, int d, Rng& rng) {
  for (;;) {
    std::vector<Vec> gens(d, Vec(r));
    for (auto& g : gens) {
      for (auto& x : g) x = rng() & (f->size() - 1);
    }
    auto h = FqmSubspace::span(f, r, gens);
    if (h.dim() == d) return h;
  }
}

FqSubspace random_fq_subspace(const FqSubspace& u, int d, Rng& rng) {
  const std::uint64_t q = u.field()->q();
  std::vector<int> codes(u.dim());
  for (;;) {
    std::vector<Vec> gens;
    for (int i = 0; i < d; ++i) {
      for (auto& c : codes) c = static_cast<int>(rng.below(q));
      gens.push_back(u.combine(codes));
    }
    auto s = FqSubspace::span(u.field(), u.ambient(), gens);
    if (s.dim() == d) return s;
  }
}

// ---------------------------------------------------------------- spectra

Spectrum weight_spectrum(const FqSubspace& u, int codim, Family family, const ScanOptions& opt) {
  const Field& f = *u.field();
  const int r = u.ambient();
  if (codim < 0 || codim > r) throw std::invalid_argument("codim outside [0, r]");
  const int d = r - codim;
  std::vector<Elem> alphabet;
  if (family == Family::frobenius_fixed) alphabet = f.subfield_elements(2);
  const std::uint64_t q_alpha = alphabet.empty() ? f.size() : alphabet.size();
  Spectrum out;
  out.subspace_dim = d;
  out.family = family;
  out.count = gaussian_binomial(r, d, q_alpha);
  require_budget(out.count, opt, "weight spectrum");
  const WeightEvaluator ev(u);
  const int workers = std::max(1, opt.workers);
  std::vector<std::array<std::uint64_t, kMaxPositions + 1>> hist(workers);
  for (auto& h : hist) h.fill(0);
  run_slices(workers, [&](int w, Slice s) {
    RrefCursor cur(r, d, q_alpha);
    std::vector<Elem> rref(static_cast<std::size_t>(d) * r);
    for (cur.seek(s.start); cur.valid(); cur.advance(s.stride)) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < r; ++j) {
          const auto sym = cur.symbol(i, j);
          rref[static_cast<std::size_t>(i) * r + j] = alphabet.empty() ? sym : alphabet[sym];
        }
      }
      ++hist[w][ev.weight(rref, cur.pivots())];
    }
  });
  for (const auto& h : hist) {
    for (int k = 0; k <= kMaxPositions; ++k) {
      if (h[k]) out.histogram[k] += h[k];
    }
  }
  return out;
}

Spectrum weight_spectrum_sampled(const FqSubspace& u, int codim, Family family, Sampling sample) {
  const int r = u.ambient();
  if (codim < 0 || codim > r) throw std::invalid_argument("codim outside [0, r]");
  Spectrum out;
  out.subspace_dim = r - codim;
  out.family = family;
  out.mode = Mode::sampled;
  out.count = sample.count;
  const WeightEvaluator ev(u);
  Rng rng(sample.seed);
  for (std::uint64_t i = 0; i < sample.count; ++i) {
    const FqmSubspace h = family == Family::all ? random_fqm_subspace(u.field(), r, out.subspace_dim, rng)
                                                : random_fixed_subspace(u.field(), r, out.subspace_dim, rng);
    ++out.histogram[ev.weight(h)];
  }
  return out;
}

// ---------------------------------------------------------------- semilinear system

std::string_view to_string(SystemCase c) noexcept {
  switch (c) {
    case SystemCase::alpha_only:
      return "alpha!=0,beta=0";
    case SystemCase::beta_only:
      return "alpha=0,beta!=0";
    case SystemCase::zero_gamma_zero:
      return "alpha=beta=0,gamma=0";
    case SystemCase::zero_gamma_nonzero:
      return "alpha=beta=0,gamma!=0";
    case SystemCase::both_nonzero:
      return "alpha!=0,beta!=0";
  }
  return "?";
}

Elem system_lambda(const Field& f, Elem a, Elem u) {
  const Elem u2 = f.frob_q(u, 2);
  return f.mul(a, u) ^ f.mul(f.frob_q(a, 2), u2) ^ f.mul(f.frob_q(a, 4), u ^ u2);
}

SemilinearSystem semilinear_system(const FieldPtr& fp, Elem a, Elem b, Elem c, Elem d) {
  const Field& f = *fp;
  SemilinearSystem sys;
  sys.field = fp;
  sys.a = a, sys.b = b, sys.c = c, sys.d = d;
  auto fr = [&](Elem x, int i) { return f.frob_q(x, i); };
  auto sym6 = [&](Elem x, Elem y) {
    const Elem x2 = fr(x, 2), x4 = fr(x, 4), y2 = fr(y, 2), y4 = fr(y, 4);
    return f.mul(x, y2) ^ f.mul(x, y4) ^ f.mul(x2, y) ^ f.mul(x2, y4) ^ f.mul(x4, y) ^ f.mul(x4, y2);
  };
  sys.alpha = sym6(a, c);
  sys.beta = sym6(b, d);
  sys.gamma = f.mul(fr(b, 2) ^ fr(b, 4), fr(c, 2) ^ fr(c, 4)) ^ f.mul(fr(d, 2) ^ fr(d, 4), fr(a, 2) ^ fr(a, 4));
  if (sys.alpha && !sys.beta) {
    sys.bucket = SystemCase::alpha_only;
  } else if (!sys.alpha && sys.beta) {
    sys.bucket = SystemCase::beta_only;
  } else if (!sys.alpha && !sys.beta) {
    sys.bucket = sys.gamma ? SystemCase::zero_gamma_nonzero : SystemCase::zero_gamma_zero;
  } else {
    sys.bucket = SystemCase::both_nonzero;
  }

  // F_q-linear map T x T -> F_{q^6}^2 on the basis (t_i, 0), (0, t_j).
  const auto& t = f.trace_kernel_basis();
  std::vector<std::pair<Elem, Elem>> unknowns;
  for (Elem x : t) unknowns.emplace_back(x, 0);
  for (Elem y : t) unknowns.emplace_back(0, y);
  std::vector<FqRow> images;
  for (auto [u, v] : unknowns) {
    const Elem f1 = f.mul(a, u) ^ f.mul(b, v) ^ fr(u, 2) ^ fr(v, 1);
    const Elem f2 = f.mul(c, u) ^ f.mul(d, v) ^ fr(u, 1) ^ fr(v, 3);
    FqRow row;
    f.row_put(row, 0, f1);
    f.row_put(row, 1, f2);
    images.push_back(row);
  }
  for (const auto& tag : fq_kernel(f, images)) {
    Elem u = 0, v = 0;
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      const int code = f.row_entry(tag, static_cast<int>(j));
      if (!code) continue;
      u ^= f.mul(f.fq_elem(code), unknowns[j].first);
      v ^= f.mul(f.fq_elem(code), unknowns[j].second);
    }
    sys.kernel_basis.emplace_back(u, v);
  }
  sys.kernel_dim = static_cast<int>(sys.kernel_basis.size());
  return sys;
}

std::uint64_t count_solutions(const SemilinearSystem& sys) {
  std::uint64_t n = 1;
  for (int i = 0; i < sys.kernel_dim; ++i) n *= sys.field->q();
  return n;
}

std::vector<std::pair<Elem, Elem>> system_solutions(const SemilinearSystem& sys) {
  const Field& f = *sys.field;
  const std::uint64_t total = count_solutions(sys);
  std::vector<std::pair<Elem, Elem>> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Elem u = 0, v = 0;
    std::uint64_t rest = idx;
    for (const auto& [bu, bv] : sys.kernel_basis) {
      const Elem c = f.fq_elem(static_cast<int>(rest % f.q()));
      rest /= f.q();
      u ^= f.mul(c, bu);
      v ^= f.mul(c, bv);
    }
    out.emplace_back(u, v);
  }
  return out;
}

FqmSubspace system_subspace(const SemilinearSystem& sys) {
  const std::vector<Vec> rows{Vec{1, 0, sys.a, sys.c}, Vec{0, 1, sys.b, sys.d}};
  return FqmSubspace::span(sys.field, 4, rows);
}

}  // namespace scatter
