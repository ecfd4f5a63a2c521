#include "scatter/rank_code.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "scatter/fq_echelon.hpp"
#include "scatter/parallel.hpp"
#include "scatter/rng.hpp"
#include "scatter/scatter_core.hpp"

namespace scatter {
namespace {

void check_rho(const RankCode& c, int rho) {
  if (rho < 1 || rho > c.k) throw std::invalid_argument("rho outside [1, k]");
}

int max_weight(const Spectrum& s) { return s.histogram.empty() ? 0 : s.histogram.rbegin()->first; }

}  // namespace

RankCode code_from_system(const FqSubspace& u) {
  if (u.dim() == 0) throw DegenerateSystem("the zero subspace is not a system");
  const Field& f = *u.field();
  if (fqm_span_dim(f, u.basis()) < u.ambient()) throw DegenerateSystem("U does not span F_{q^m}^k");
  RankCode c;
  c.field = u.field();
  c.n = u.dim();
  c.k = u.ambient();
  c.m = f.m();
  c.generator = MatrixFqm(c.k, c.n);
  for (int j = 0; j < c.n; ++j) {
    for (int i = 0; i < c.k; ++i) c.generator(i, j) = u.basis()[j][i];
  }
  c.system = u;
  return c;
}

int rank_weight(const Field& f, std::span<const Elem> codeword) {
  if (f.h_exp() == 1) {
    std::array<std::uint64_t, kMaxPositions> rows{};
    const std::size_t n = std::min(codeword.size(), rows.size());
    for (std::size_t i = 0; i < n; ++i) rows[i] = f.coords(codeword[i]);
    return gf2_rank(std::span(rows.data(), n));
  }
  FqEchelon ech(f);
  for (Elem y : codeword) {
    FqRow row;
    f.row_put(row, 0, y);
    ech.insert(row);
    if (ech.rank() == f.m()) break;
  }
  return ech.rank();
}

Vec encode(const RankCode& c, const Vec& message) {
  if (static_cast<int>(message.size()) != c.k) throw AmbientMismatch("message length != k");
  return vec_mul(*c.field, message, c.generator);
}

CodewordScan codeword_scan(const RankCode& c, const ScanOptions& opt) {
  const Field& f = *c.field;
  const int e = f.degree();
  const int bits = c.k * e;
  if (bits >= 63) throw WorkLimitExceeded("codeword scan: q^{mk} does not fit a 64-bit counter");
  const std::uint64_t total = (std::uint64_t{1} << bits) - 1;
  require_budget(total, opt, "codeword scan");

  // delta[b] is the codeword of the message with only bit b set.
  std::vector<Vec> delta(bits, Vec(c.n));
  for (int b = 0; b < bits; ++b) {
    const Elem x = Elem{1} << (b % e);
    for (int j = 0; j < c.n; ++j) delta[b][j] = f.mul(x, c.generator(b / e, j));
  }

  const int workers = std::max(1, opt.workers);
  std::vector<std::array<std::uint64_t, kMaxPositions + 1>> hist(workers);
  for (auto& h : hist) h.fill(0);
  run_slices(workers, [&](int w, Slice) {
    // Contiguous block of Gray-code indices [lo, hi) within 1..total.
    const std::uint64_t lo = 1 + total / workers * w + std::min<std::uint64_t>(w, total % workers);
    const std::uint64_t hi = lo + total / workers + (static_cast<std::uint64_t>(w) < total % workers ? 1 : 0);
    if (lo >= hi) return;
    Vec word(c.n, 0);
    const std::uint64_t g = lo ^ (lo >> 1);
    for (int b = 0; b < bits; ++b) {
      if ((g >> b) & 1) {
        for (int j = 0; j < c.n; ++j) word[j] ^= delta[b][j];
      }
    }
    auto& h = hist[w];
    ++h[rank_weight(f, word)];
    for (std::uint64_t i = lo + 1; i < hi; ++i) {
      const Vec& dv = delta[__builtin_ctzll(i)];
      for (int j = 0; j < c.n; ++j) word[j] ^= dv[j];
      ++h[rank_weight(f, word)];
    }
  });

  CodewordScan out;
  out.checked = total;
  for (const auto& h : hist) {
    for (int k = 0; k <= kMaxPositions; ++k) {
      if (h[k]) out.distribution[k] += h[k];
    }
  }
  if (out.distribution.count(0)) throw InvariantViolation("nonzero message encodes to the zero codeword");
  out.d = out.distribution.empty() ? 0 : out.distribution.begin()->first;
  return out;
}

int min_distance_hyperplanes(const RankCode& c, const ScanOptions& opt) {
  return c.n - max_weight(weight_spectrum(c.system, 1, Family::all, opt));
}

std::map<int, std::uint64_t> distribution_from_hyperplanes(const RankCode& c, const ScanOptions& opt) {
  const Spectrum s = weight_spectrum(c.system, 1, Family::all, opt);
  std::map<int, std::uint64_t> out;
  for (const auto& [wt, count] : s.histogram) out[c.n - wt] += (c.field->size() - 1) * count;
  return out;
}

int generalized_weight_scan(const RankCode& c, int rho, const ScanOptions& opt) {
  check_rho(c, rho);
  return c.n - max_weight(weight_spectrum(c.system, rho, Family::all, opt));
}

int generalized_weight_fq(const RankCode& c, int rho, const ScanOptions& opt) {
  check_rho(c, rho);
  const int bound = c.k - rho;
  // Every subspace of dimension <= bound qualifies; grow while a larger one still does.
  int t = std::min(bound, c.n);
  while (t < c.n) {
    require_budget(gaussian_binomial(c.n, t + 1, c.field->q()), opt, "generalized weight search");
    if (find_low_span_subspace(c.system, t + 1, bound, opt) == kNoIndex) break;
    ++t;
  }
  return c.n - t;
}

int generalized_weight_fq_sampled(const RankCode& c, int rho, Sampling sample) {
  check_rho(c, rho);
  const int bound = c.k - rho;
  Rng rng(sample.seed);
  int t = std::min(bound, c.n);
  while (t < c.n) {
    bool found = false;
    for (std::uint64_t i = 0; i < sample.count && !found; ++i) {
      const FqSubspace s = random_fq_subspace(c.system, t + 1, rng);
      found = fqm_span_dim(*c.field, s.basis()) <= bound;
    }
    if (!found) break;
    ++t;
  }
  return std::min(c.n - t, c.n - c.k + rho);
}

WeightProfile classify(int n, int k, int m, const std::vector<int>& d_rho) {
  if (static_cast<int>(d_rho.size()) != k) throw std::invalid_argument("need d_rho for rho = 1..k");
  WeightProfile p;
  p.n = n;
  p.k = k;
  p.m = m;
  p.d = d_rho.front();
  p.d_rho = d_rho;
  const long long mk = static_cast<long long>(m) * k;
  const long long bound = std::min<long long>(static_cast<long long>(m) * (n - p.d + 1),
                                              static_cast<long long>(n) * (m - p.d + 1));
  p.singleton_ok = mk <= bound;
  p.is_mrd = mk == bound;
  p.near_mrd = p.d == n - k;
  for (int rho = 1; rho <= k; ++rho) {
    const bool flag = d_rho[rho - 1] == n - k + rho;
    p.rho_mrd.push_back(flag);
    if (rho >= 2 && !flag) p.near_mrd = false;
  }
  return p;
}

WeightProfile code_profile(const RankCode& c, const ScanOptions& opt) {
  std::vector<int> d_rho;
  for (int rho = 1; rho <= c.k; ++rho) d_rho.push_back(generalized_weight_fq(c, rho, opt));
  const int d_geo = min_distance_hyperplanes(c, opt);
  if (d_geo != d_rho.front()) {
    throw InvariantViolation("minimum distance disagrees between the F_q-side search and the hyperplane scan");
  }
  return classify(c.n, c.k, c.m, d_rho);
}

WeightProfile code_profile_sampled(const RankCode& c, Sampling sample) {
  std::vector<int> d_rho;
  for (int rho = 1; rho <= c.k; ++rho) {
    d_rho.push_back(generalized_weight_fq_sampled(c, rho, Sampling{sample.count, sample.seed + rho}));
  }
  WeightProfile p = classify(c.n, c.k, c.m, d_rho);
  p.mode = Mode::sampled;
  return p;
}

}  // namespace scatter
