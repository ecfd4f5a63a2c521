#include "scatter/pg_saturate.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <limits>
#include <unordered_map>

#include "scatter/parallel.hpp"
#include "scatter/rng.hpp"
#include "scatter/scatter_core.hpp"

namespace scatter {
namespace {

constexpr int kMaxK = 8;

/// Row echelon basis of at most kMaxK vectors of length k. Each stored row has pivot entry 1
/// and is reduced against the rows inserted before it.
struct SmallEchelon {
  int k = 0;
  int rank = 0;
  std::array<std::array<Elem, kMaxK>, kMaxK> rows{};
  std::array<int, kMaxK> piv{};

  bool insert(const Field& f, const Elem* v) {
    std::array<Elem, kMaxK> t{};
    std::copy(v, v + k, t.begin());
    for (int i = 0; i < rank; ++i) {
      const Elem c = t[piv[i]];
      if (!c) continue;
      for (int j = 0; j < k; ++j) t[j] ^= f.mul(c, rows[i][j]);
    }
    int p = 0;
    while (p < k && !t[p]) ++p;
    if (p == k) return false;
    const Elem s = f.inv(t[p]);
    for (int j = 0; j < k; ++j) t[j] = f.mul(s, t[j]);
    rows[rank] = t;
    piv[rank] = p;
    ++rank;
    return true;
  }

  /// Reduced row-echelon form, rows sorted by pivot.
  void rref(const Field& f, std::vector<Vec>& out, std::vector<int>& pivots) const {
    std::array<int, kMaxK> order{};
    for (int i = 0; i < rank; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + rank, [&](int a, int b) { return piv[a] < piv[b]; });
    out.assign(rank, Vec(k));
    pivots.assign(rank, 0);
    for (int i = 0; i < rank; ++i) {
      std::copy(rows[order[i]].begin(), rows[order[i]].begin() + k, out[i].begin());
      pivots[i] = piv[order[i]];
    }
    for (int i = 0; i < rank; ++i) {
      for (int j = 0; j < rank; ++j) {
        const Elem c = out[j][pivots[i]];
        if (j == i || !c) continue;
        for (int x = 0; x < k; ++x) out[j][x] ^= f.mul(c, out[i][x]);
      }
    }
  }
};

/// Normal vector of a hyperplane given in RREF: the free column gets 1.
Vec hyperplane_normal(int k, const std::vector<Vec>& rref, const std::vector<int>& pivots) {
  int free_col = 0;
  for (int p : pivots) {
    if (p == free_col) ++free_col;
  }
  Vec n(k, 0);
  n[free_col] = 1;
  for (std::size_t i = 0; i < pivots.size(); ++i) n[pivots[i]] = rref[i][free_col];
  return n;
}

/// RREF basis of the hyperplane {x : n · x = 0}.
void hyperplane_basis(const Field& f, const Vec& n, std::vector<Vec>& rref, std::vector<int>& pivots) {
  const int k = static_cast<int>(n.size());
  int lead = 0;
  while (!n[lead]) ++lead;
  const Elem s = f.inv(n[lead]);
  SmallEchelon ech;
  ech.k = k;
  for (int c = 0; c < k; ++c) {
    if (c == lead) continue;
    std::array<Elem, kMaxK> v{};
    v[c] = 1;
    v[lead] = f.mul(s, n[c]);
    ech.insert(f, v.data());
  }
  ech.rref(f, rref, pivots);
}

SaturationResult finish(const ProjectiveSpace& pg, SaturationResult res, const PointSet& marks) {
  const std::uint64_t bad = marks.first_unset();
  res.verdict.checked_count = res.ambient_points;
  if (bad != kNoIndex) {
    res.verdict.ok = false;
    res.verdict.witness = Witness{"uncovered_point", {pg.point(bad)}, static_cast<std::int64_t>(bad)};
  }
  return res;
}

}  // namespace

ProjectiveSpace::ProjectiveSpace(FieldPtr f, int k) : f_(std::move(f)), k_(k), e_(f_->degree()) {
  if (k < 1 || k > kMaxK) throw std::invalid_argument("projective dimension outside supported range");
  if (e_ * (k - 1) > 60) throw WorkLimitExceeded("projective space too large for 64-bit point ids");
  offset_.assign(k + 1, 0);
  for (int p = 0; p < k; ++p) offset_[p + 1] = offset_[p] + (std::uint64_t{1} << shift(p));
}

Vec ProjectiveSpace::normalize(const Field& f, Vec v) {
  auto it = std::find_if(v.begin(), v.end(), [](Elem x) { return x != 0; });
  if (it == v.end()) throw std::invalid_argument("the zero vector is not a point");
  const Elem s = f.inv(*it);
  for (auto& x : v) x = f.mul(s, x);
  return v;
}

std::uint64_t ProjectiveSpace::pack(std::span<const Elem> v) const noexcept {
  std::uint64_t p = 0;
  for (int c = 0; c < k_; ++c) p |= v[c] << shift(c);
  return p;
}

std::uint64_t ProjectiveSpace::id(const Vec& v) const {
  if (static_cast<int>(v.size()) != k_) throw AmbientMismatch("point length != k");
  const Vec n = normalize(*f_, v);
  int lead = 0;
  while (!n[lead]) ++lead;
  return id_packed(lead, pack(n));
}

Vec ProjectiveSpace::point(std::uint64_t id) const {
  if (id >= size()) throw std::out_of_range("point id");
  int lead = 0;
  while (id >= offset_[lead + 1]) ++lead;
  const std::uint64_t rem = id - offset_[lead];
  const Elem mask = f_->size() - 1;
  Vec v(k_, 0);
  v[lead] = 1;
  for (int c = lead + 1; c < k_; ++c) v[c] = (rem >> shift(c)) & mask;
  return v;
}

void PointSet::merge(const PointSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
}

std::uint64_t PointSet::count() const noexcept {
  std::uint64_t c = 0;
  for (auto w : words_) c += __builtin_popcountll(w);
  return c;
}

std::uint64_t PointSet::first_unset() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (~words_[w] == 0) continue;
    const std::uint64_t i = w * 64 + __builtin_ctzll(~words_[w]);
    return i < n_ ? i : kNoIndex;
  }
  return kNoIndex;
}

void mark_span(const ProjectiveSpace& pg, std::span<const Vec> rref, std::span<const int> pivots, PointSet& marks) {
  const Field& f = *pg.field();
  const int e = f.degree();
  const int d = static_cast<int>(rref.size());
  // Points with leading row i: row_i + sum_{j>i} c_j row_j, already normalized.
  std::vector<std::uint64_t> flip;
  for (int i = 0; i < d; ++i) {
    flip.clear();
    for (int j = i + 1; j < d; ++j) {
      for (int b = 0; b < e; ++b) {
        Vec t(rref[j].size());
        for (std::size_t c = 0; c < t.size(); ++c) t[c] = f.mul(Elem{1} << b, rref[j][c]);
        flip.push_back(pg.pack(t));
      }
    }
    std::uint64_t acc = pg.pack(rref[i]);
    marks.set(pg.id_packed(pivots[i], acc));
    const std::uint64_t count = std::uint64_t{1} << flip.size();
    for (std::uint64_t g = 1; g < count; ++g) {
      acc ^= flip[__builtin_ctzll(g)];
      marks.set(pg.id_packed(pivots[i], acc));
    }
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) noexcept {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::uint64_t> linear_set_ids(const ProjectiveSpace& pg, const FqSubspace& u, const ScanOptions& opt) {
  const Field& f = *u.field();
  const int bits = u.dim() * f.h_exp();
  if (bits >= 63) throw WorkLimitExceeded("linear set enumeration: q^n does not fit a 64-bit counter");
  require_budget(std::uint64_t{1} << bits, opt, "linear set enumeration");
  std::vector<Vec> gen;
  for (const auto& b : u.basis()) {
    for (int t = 0; t < f.h_exp(); ++t) {
      const Elem s = f.fq_elem(1 << t);
      Vec v(b.size());
      for (std::size_t c = 0; c < v.size(); ++c) v[c] = f.mul(s, b[c]);
      gen.push_back(std::move(v));
    }
  }
  std::vector<std::uint64_t> ids;
  ids.reserve((std::uint64_t{1} << bits) / (f.q() - 1) + 1);
  Vec cur(u.ambient(), 0);
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << bits); ++g) {
    const Vec& d = gen[__builtin_ctzll(g)];
    for (std::size_t c = 0; c < cur.size(); ++c) cur[c] ^= d[c];
    ids.push_back(pg.id(cur));
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<Vec> linear_set_points(const FqSubspace& u, const ScanOptions& opt) {
  const ProjectiveSpace pg(u.field(), u.ambient());
  std::vector<Vec> out;
  for (auto id : linear_set_ids(pg, u, opt)) out.push_back(pg.point(id));
  return out;
}

SaturationResult is_rho_saturating(const ProjectiveSpace& pg, const std::vector<Vec>& s, int rho,
                                   const ScanOptions& opt) {
  if (rho < 0) throw std::invalid_argument("rho must be >= 0");
  const Field& f = *pg.field();
  const int k = pg.k();
  const int r = rho + 1;
  const std::uint64_t n_pts = s.size();
  SaturationResult res;
  res.rho = rho;
  res.set_size = n_pts;
  res.ambient_points = pg.size();
  res.verdict.mode = Mode::exhaustive;
  require_budget(pg.size(), opt, "ambient point bitmap");

  SmallEchelon all;
  all.k = k;
  for (const auto& p : s) {
    if (static_cast<int>(p.size()) != k) throw AmbientMismatch("point length != k");
    all.insert(f, p.data());
  }
  if (r >= k && all.rank == k && n_pts >= static_cast<std::uint64_t>(r)) {
    // Some rho+1 points of S span the whole space.
    res.subsets = 1;
    res.verdict.checked_count = res.ambient_points;
    res.verdict.note = "S spans the ambient space and rho + 1 >= k";
    return res;
  }

  res.subsets = binomial(n_pts, r);
  require_budget(res.subsets, opt, "saturation subset enumeration");
  const int workers = std::max(1, opt.workers);
  std::vector<PointSet> marks(workers, PointSet(pg.size()));
  std::vector<PointSet> planes(workers, PointSet(pg.size()));

  run_slices(workers, [&](int w, Slice sl) {
    std::vector<SmallEchelon> ech(r + 1);
    ech[0].k = k;
    std::vector<Vec> rref;
    std::vector<int> piv;
    auto leaf = [&](const SmallEchelon& e) {
      e.rref(f, rref, piv);
      if (e.rank == k - 1) {
        planes[w].set(pg.id(hyperplane_normal(k, rref, piv)));
      } else {
        mark_span(pg, rref, piv, marks[w]);
      }
    };
    // depth = number of points chosen so far; next index > last.
    auto rec = [&](auto&& self, int depth, std::uint64_t last) -> void {
      if (depth == r) {
        leaf(ech[depth]);
        return;
      }
      for (std::uint64_t i = last + 1; i + (r - depth) <= n_pts; ++i) {
        ech[depth + 1] = ech[depth];
        ech[depth + 1].insert(f, s[i].data());
        self(self, depth + 1, i);
      }
    };
    for (std::uint64_t i0 = sl.start; i0 + r <= n_pts; i0 += sl.stride) {
      ech[1] = ech[0];
      ech[1].insert(f, s[i0].data());
      rec(rec, 1, i0);
    }
  });

  for (int w = 1; w < workers; ++w) planes[0].merge(planes[w]);
  res.distinct_planes = planes[0].count();
  const std::uint64_t plane_bound = std::min(binomial(n_pts, k - 1), pg.size());
  if (res.distinct_planes > plane_bound) {
    throw InvariantViolation("more distinct hyperplanes than subsets or hyperplanes of the space");
  }

  std::vector<std::uint64_t> plane_ids;
  plane_ids.reserve(res.distinct_planes);
  planes[0].for_each([&](std::uint64_t id) { plane_ids.push_back(id); });
  run_slices(workers, [&](int w, Slice sl) {
    std::vector<Vec> rref;
    std::vector<int> piv;
    for (std::uint64_t i = sl.start; i < plane_ids.size(); i += sl.stride) {
      hyperplane_basis(f, pg.point(plane_ids[i]), rref, piv);
      mark_span(pg, rref, piv, marks[w]);
    }
  });
  for (int w = 1; w < workers; ++w) marks[0].merge(marks[w]);
  return finish(pg, std::move(res), marks[0]);
}

SaturationResult is_rho_saturating(const FqSubspace& u, int rho, const ScanOptions& opt) {
  const ProjectiveSpace pg(u.field(), u.ambient());
  std::vector<Vec> pts;
  for (auto id : linear_set_ids(pg, u, opt)) pts.push_back(pg.point(id));
  return is_rho_saturating(pg, pts, rho, opt);
}

SaturationResult is_rho_saturating_sampled(const FqSubspace& u, int rho, Sampling sample, int tries,
                                           const ScanOptions& opt) {
  if (rho < 0) throw std::invalid_argument("rho must be >= 0");
  const FieldPtr& fp = u.field();
  const Field& f = *fp;
  const int k = u.ambient();
  if (k != 4) throw std::invalid_argument("sampled saturation supports k = 4 only");
  SaturationResult res;
  res.rho = rho;
  res.verdict.mode = Mode::sampled;
  res.verdict.note = "sampled evidence, not a certificate";
  const Elem mask = f.size() - 1;
  const std::uint64_t q = f.q();
  if (rho >= k - 1 && fqm_span_dim(f, u.basis()) == k) {
    res.verdict.checked_count = sample.count;
    res.verdict.note = "U spans the ambient space and rho + 1 >= k";
    return res;
  }
  const int bits = u.dim() * f.h_exp();
  if (rho >= 2) {
    if (bits >= 63) throw WorkLimitExceeded("sampled saturation: q^n does not fit a 64-bit counter");
    require_budget(std::uint64_t{1} << bits, opt, "sampled saturation quotient scan");
  }
  std::vector<Vec> gen;  // F_2-basis of U
  for (const auto& b : u.basis()) {
    for (int t = 0; t < f.h_exp(); ++t) {
      const Elem sc = f.fq_elem(1 << t);
      Vec v(k);
      for (int c = 0; c < k; ++c) v[c] = f.mul(sc, b[c]);
      gen.push_back(std::move(v));
    }
  }
  const auto covers = [&](const std::vector<Vec>& h_rows, const Vec& p) {
    const FqmSubspace h = FqmSubspace::span(fp, k, h_rows);
    const FqSubspace meet = u.intersect(FqSubspace::flatten(h));
    return FqmSubspace::span(fp, k, meet.basis()) == h && h.contains(p);
  };

  Rng rng(sample.seed);
  for (std::uint64_t si = 0; si < sample.count; ++si) {
    Vec p(k, 0);
    while (std::all_of(p.begin(), p.end(), [](Elem x) { return x == 0; })) {
      for (auto& x : p) x = rng() & mask;
    }
    p = ProjectiveSpace::normalize(f, p);
    bool covered = weight(u, FqmSubspace::span(fp, k, std::vector<Vec>{p})) > 0;
    for (int t = 0; t < tries && !covered && rho >= 1; ++t) {
      std::vector<int> codes(u.dim());
      for (auto& c : codes) c = static_cast<int>(rng.below(q));
      const Vec u1 = u.combine(codes);
      if (fqm_span_dim(f, std::vector<Vec>{p, u1}) < 2) continue;
      if (covers({p, u1}, p)) {
        covered = true;
        break;
      }
      if (rho < 2) continue;
      // Planes through ℓ = ⟨P, u1⟩ are the points of V/ℓ; count the vectors of U over each.
      const FqmSubspace ell = FqmSubspace::span(fp, k, std::vector<Vec>{p, u1});
      const int l = u.intersect(FqSubspace::flatten(ell)).dim();
      std::array<int, 2> freec{};
      for (int c = 0, j = 0; c < k; ++c) {
        if (std::find(ell.pivots().begin(), ell.pivots().end(), c) == ell.pivots().end()) freec[j++] = c;
      }
      auto image = [&](const Vec& v) {
        Vec w = v;
        for (int i = 0; i < 2; ++i) {
          const Elem c = w[ell.pivots()[i]];
          for (int x = 0; x < k; ++x) w[x] ^= f.mul(c, ell.rows()[i][x]);
        }
        return std::pair<Elem, Elem>{w[freec[0]], w[freec[1]]};
      };
      std::vector<std::pair<Elem, Elem>> gimg;
      for (const auto& g : gen) gimg.push_back(image(g));
      std::unordered_map<Elem, std::pair<std::uint64_t, std::uint64_t>> tally;  // key -> (count, gray index)
      const Elem infinity = f.size();
      Elem w0 = 0, w1 = 0;
      for (std::uint64_t g = 1; g < (std::uint64_t{1} << bits); ++g) {
        const auto& d = gimg[__builtin_ctzll(g)];
        w0 ^= d.first;
        w1 ^= d.second;
        if (!w0 && !w1) continue;
        const Elem key = w1 ? f.mul(w0, f.inv(w1)) : infinity;
        auto& slot = tally[key];
        if (slot.first++ == 0) slot.second = g ^ (g >> 1);
      }
      const std::uint64_t threshold = (q * q - 1) * (std::uint64_t{1} << (l * f.h_exp()));
      std::vector<Elem> keys;
      for (const auto& [key, val] : tally) {
        if (val.first >= threshold) keys.push_back(key);
      }
      std::sort(keys.begin(), keys.end());
      for (Elem key : keys) {
        const std::uint64_t gray = tally[key].second;
        Vec lift(k, 0);
        for (int b = 0; b < bits; ++b) {
          if ((gray >> b) & 1) {
            for (int c = 0; c < k; ++c) lift[c] ^= gen[b][c];
          }
        }
        if (covers({p, u1, lift}, p)) {
          covered = true;
          break;
        }
      }
    }
    ++res.verdict.checked_count;
    if (!covered) {
      res.verdict.ok = false;
      res.verdict.witness = Witness{"uncovered_candidate", {p}, static_cast<std::int64_t>(si)};
      res.verdict.note = "inconclusive: no covering span found within the try limit; not a proof of non-saturation";
      return res;
    }
  }
  return res;
}

}  // namespace scatter
