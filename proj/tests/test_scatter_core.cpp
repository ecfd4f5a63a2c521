#include <gtest/gtest.h>

#include <set>

#include "scatter/scatter_core.hpp"
#include "test_util.hpp"

using namespace scatter;
using namespace testutil;

namespace {

// dim_q(U ∩ H) at q = 2 by listing U.
int brute_weight(const FqSubspace& u, const FqmSubspace& h) {
  int count = 0;
  for (const auto& v : subset_sums(u.basis(), u.ambient())) count += h.contains(v);
  int w = 0;
  while ((1 << w) < count) ++w;
  return w;
}

// Number of distinct projective points among the nonzero vectors of U (q = 2).
std::size_t brute_point_count(const Field& f, const FqSubspace& u) {
  std::set<Vec> pts;
  for (auto v : subset_sums(u.basis(), u.ambient())) {
    auto it = std::find_if(v.begin(), v.end(), [](Elem x) { return x != 0; });
    if (it == v.end()) continue;
    const Elem s = f.inv(*it);
    for (auto& x : v) x = f.mul(s, x);
    pts.insert(v);
  }
  return pts.size();
}

// U_1 with its third basis vector replaced by ω times the first (ω = the field generator).
FqSubspace planted(const FieldPtr& f) {
  auto basis = build_Us(f, 1).basis();
  for (int c = 0; c < 4; ++c) basis[2][c] = f->mul(2, basis[0][c]);
  return FqSubspace::span(f, 4, basis);
}

}  // namespace

TEST(BuildUs, MatchesDefiningFormulaAtQ2) {
  auto f = Field::tower(1);
  auto u1 = build_Us(f, 1);
  auto u5 = build_Us(f, 5);
  ASSERT_EQ(u1.dim(), 8);
  ASSERT_EQ(u5.dim(), 8);
  EXPECT_EQ(fqm_span_dim(*f, u1.basis()), 4);
  auto fr = [&](Elem x, int i) { return f->frob_q(x, i); };
  const auto t = kernel_elements(*f);
  for (Elem x : t) {
    for (Elem y : t) {
      EXPECT_TRUE(u1.contains(Vec{x, y, fr(x, 2) ^ fr(y, 1), fr(x, 1) ^ fr(y, 3)}));
      // σ = q^5: σ² = q^{10} = q^4, σ³ = q^{15} = q^3
      EXPECT_TRUE(u5.contains(Vec{x, y, fr(x, 4) ^ fr(y, 5), fr(x, 5) ^ fr(y, 3)}));
    }
  }
  EXPECT_FALSE(u1 == u5);
  EXPECT_THROW(build_Us(f, 2), std::invalid_argument);
}

TEST(BuildUs, SecondFormIsEquivalentToU1) {
  for (int h : {1, 3}) {
    auto f = Field::tower(h);
    auto u1 = build_Us(f, 1);
    auto u5p = build_U5prime(f);
    EXPECT_FALSE(u5p == u1);
    EXPECT_TRUE(apply_gl(u5prime_to_u1_matrix().transpose(), u5p) == u1) << "h=" << h;
    EXPECT_EQ(*row_reduce(*f, u5prime_to_u1_matrix()).det, 1u);
  }
}

TEST(DimBound, Values) {
  EXPECT_EQ(max_dim_bound(4, 6, 2).value, 8);
  EXPECT_TRUE(max_dim_bound(4, 6, 2).exact);
  EXPECT_EQ(max_dim_bound(4, 6, 1).value, 12);
  EXPECT_FALSE(max_dim_bound(5, 6, 3).exact);
  EXPECT_TRUE(max_dim_bound(4, 6, 0).degenerate);
}

TEST(Scattered, FastPassesOnUsAtQ2) {
  auto f = Field::tower(1);
  for (int s : {1, 5}) {
    auto u = build_Us(f, s);
    auto v2 = is_h_scattered_fast(u, 2);
    EXPECT_TRUE(v2.ok);
    EXPECT_EQ(v2.checked_count, 97155u);
    EXPECT_EQ(v2.mode, Mode::fast);
    auto v1 = is_h_scattered_fast(u, 1);
    EXPECT_TRUE(v1.ok);
    EXPECT_EQ(v1.checked_count, 10795u);
    // Scattered (order 1) iff every nonzero vector gives its own point.
    EXPECT_EQ(brute_point_count(*f, u), 255u);
  }
}

TEST(Scattered, PlantedDependenceIsFoundByBothTests) {
  auto f = Field::tower(1);
  auto u = planted(f);
  ASSERT_EQ(u.dim(), 8);
  for (int order : {1, 2}) {
    auto fast = is_h_scattered_fast(u, order);
    ASSERT_FALSE(fast.ok);
    ASSERT_TRUE(fast.witness);
    EXPECT_EQ(fast.witness->kind, "fq_subspace_low_span");
    EXPECT_EQ(static_cast<int>(fast.witness->basis.size()), order + 1);
    EXPECT_EQ(fqm_span_dim(*f, fast.witness->basis), fast.witness->value);
    EXPECT_LE(fast.witness->value, order);
    for (const auto& v : fast.witness->basis) EXPECT_TRUE(u.contains(v));
    auto h = fast_witness_to_subspace(u, fast.witness->basis, order);
    EXPECT_EQ(h.dim(), order);
    EXPECT_GE(brute_weight(u, h), order + 1);

    auto oracle = is_h_scattered_oracle(u, order);
    ASSERT_FALSE(oracle.ok);
    EXPECT_EQ(oracle.witness->kind, "fqm_subspace_high_weight");
    auto hh = FqmSubspace::span(f, 4, oracle.witness->basis);
    EXPECT_EQ(brute_weight(u, hh), oracle.witness->value);
    EXPECT_GT(oracle.witness->value, order);
    auto s = oracle_witness_to_fq(u, hh, order);
    ASSERT_EQ(static_cast<int>(s.size()), order + 1);
    EXPECT_EQ(FqSubspace::span(f, 4, s).dim(), order + 1);
    EXPECT_LE(fqm_span_dim(*f, s), order);
  }
  EXPECT_LT(brute_point_count(*f, u), 255u);
}

TEST(Scattered, FailuresAreIndependentOfWorkerCount) {
  auto f = Field::tower(1);
  auto u = planted(f);
  const auto a = is_h_scattered_oracle(u, 2, ScanOptions{1});
  const auto b = is_h_scattered_oracle(u, 2, ScanOptions{3});
  EXPECT_EQ(a.checked_count, b.checked_count);
  EXPECT_EQ(a.witness->basis, b.witness->basis);
  const auto c = is_h_scattered_fast(u, 2, ScanOptions{1});
  const auto d = is_h_scattered_fast(u, 2, ScanOptions{4});
  EXPECT_EQ(c.checked_count, d.checked_count);
  EXPECT_EQ(c.witness->basis, d.witness->basis);
}

TEST(Scattered, NonSpanningAndDegenerateCases) {
  auto f = Field::tower(1);
  std::vector<Vec> gens;
  for (Elem t : f->trace_kernel_basis()) {
    gens.push_back(Vec{t, 0, 0, 0});
    gens.push_back(Vec{0, t, 0, 0});
  }
  auto flat = FqSubspace::span(f, 4, gens);
  auto v = is_h_scattered_fast(flat, 2);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.witness->kind, "not_spanning");
  EXPECT_EQ(v.witness->value, 2);

  auto u = build_Us(f, 1);
  auto deg = is_h_scattered_oracle(u, 4);
  EXPECT_TRUE(deg.ok);
  EXPECT_TRUE(deg.degenerate);
  EXPECT_EQ(deg.checked_count, 1u);
  EXPECT_TRUE(is_h_scattered_fast(u, 8).degenerate);
  EXPECT_THROW(is_h_scattered_fast(u, 0), std::invalid_argument);
}

TEST(Scattered, FastAgreesWithOracleOnRandomSubspaces) {
  auto f = Field::tower(1);
  std::mt19937_64 rng(5);
  int agree_true = 0, agree_false = 0;
  for (int it = 0; it < 40; ++it) {
    auto u = rand_fq_subspace(f, 4, it % 2 ? 8 : 6, rng);
    auto fast = is_h_scattered_fast(u, 1);
    auto oracle = is_h_scattered_oracle(u, 1);
    if (!fast.witness || fast.witness->kind != "not_spanning") {
      ASSERT_EQ(fast.ok, oracle.ok) << "iteration " << it;
      (fast.ok ? agree_true : agree_false)++;
    }
  }
  EXPECT_GT(agree_true, 0);
}

TEST(Scattered, WorkBudgetIsEnforced) {
  auto f = Field::tower(3);
  auto u = build_Us(f, 1);
  EXPECT_THROW(is_h_scattered_oracle(u, 2), WorkLimitExceeded);
  EXPECT_THROW(is_h_scattered_fast(u, 2, ScanOptions{1, 1000}), WorkLimitExceeded);
}

TEST(Scattered, SampledModesAreSeededAndPassOnU1AtQ8) {
  auto f = Field::tower(3);
  auto u = build_Us(f, 1);
  auto a = is_h_scattered_fast_sampled(u, 2, Sampling{300, 9});
  EXPECT_TRUE(a.ok);
  EXPECT_EQ(a.mode, Mode::sampled);
  EXPECT_EQ(a.checked_count, 300u);
  EXPECT_TRUE(is_h_scattered_oracle_sampled(u, 2, Sampling{300, 9}).ok);
  auto bad = planted(Field::tower(1));
  auto x = is_h_scattered_oracle_sampled(bad, 1, Sampling{200000, 4});
  auto y = is_h_scattered_oracle_sampled(bad, 1, Sampling{200000, 4});
  EXPECT_EQ(x.ok, y.ok);
  EXPECT_EQ(x.checked_count, y.checked_count);
}

TEST(Spectrum, HyperplanesAtQ2) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  auto s = weight_spectrum(u, 1, Family::all);
  EXPECT_EQ(s.count, 266305u);
  std::uint64_t total = 0, incidences = 0;
  for (auto [w, n] : s.histogram) {
    EXPECT_GE(w, 2);
    EXPECT_LE(w, 4);
    total += n;
    incidences += n * ((1u << w) - 1);
  }
  EXPECT_EQ(total, s.count);
  EXPECT_EQ(s.histogram.rbegin()->first, 4);
  // Each of the 255 nonzero vectors of U lies in 64^2 + 64 + 1 hyperplanes.
  EXPECT_EQ(incidences, 255u * 4161u);
}

TEST(Spectrum, PointsAndFullSpace) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  auto pts = weight_spectrum(u, 3, Family::all);
  EXPECT_EQ(pts.histogram.at(1), 255u);
  EXPECT_EQ(pts.histogram.at(0), 266305u - 255u);
  auto full = weight_spectrum(u, 0, Family::all);
  EXPECT_EQ(full.count, 1u);
  EXPECT_EQ(full.histogram.at(8), 1u);
}

TEST(Spectrum, EvaluatorAgreesWithBruteForce) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  Rng rng(3);
  for (int it = 0; it < 60; ++it) {
    auto h = random_fqm_subspace(f, 4, 1 + it % 3, rng);
    EXPECT_EQ(weight(u, h), brute_weight(u, h));
  }
}

TEST(Parity, FrobeniusFixedSubspacesHaveEvenWeight) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  EXPECT_TRUE(frobenius_fixed(u));
  Rng rng(21);
  for (int it = 0; it < 300; ++it) {
    auto h = random_fixed_subspace(f, 4, 1 + it % 3, rng);
    ASSERT_TRUE(frobenius_fixed(h));
    auto v = parity_check(u, h);
    EXPECT_TRUE(v.applicable);
    EXPECT_TRUE(v.ok) << "weight " << v.witness->value;
    EXPECT_EQ(brute_weight(u, h) % 2, 0);
  }
  auto fixed = weight_spectrum(u, 1, Family::frobenius_fixed);
  EXPECT_EQ(fixed.count, gaussian_binomial(4, 3, 4));
  for (auto [w, n] : fixed.histogram) {
    EXPECT_EQ(w % 2, 0);
    EXPECT_LE(w, 4);
  }
}

TEST(Parity, NotApplicableToGenericSubspaces) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  const std::vector<Vec> rows{Vec{1, 2, 0, 0}};
  auto h = FqmSubspace::span(f, 4, rows);
  EXPECT_FALSE(frobenius_fixed(h));
  EXPECT_FALSE(parity_check(u, h).applicable);
}

TEST(GlInvariance, ScatterednessAndSpectrumSurviveChangeOfBasis) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  std::mt19937_64 rng(8);
  const auto base = weight_spectrum(u, 1, Family::all).histogram;
  for (int it = 0; it < 3; ++it) {
    auto a = rand_invertible(*f, 4, rng);
    auto ua = apply_gl(a, u);
    EXPECT_TRUE(is_h_scattered_fast(ua, 2).ok);
    EXPECT_EQ(weight_spectrum(ua, 1, Family::all).histogram, base);
  }
}

TEST(SemilinearSystem, CountMatchesBruteForceAndWeightAtQ2) {
  auto f = Field::tower(1);
  auto u = build_Us(f, 1);
  const auto t = kernel_elements(*f);
  auto fr = [&](Elem x, int i) { return f->frob_q(x, i); };
  std::mt19937_64 rng(33);
  std::set<SystemCase> seen;
  for (int it = 0; it < 400; ++it) {
    Elem a = rand_elem(*f, rng), b = rand_elem(*f, rng), c = rand_elem(*f, rng), d = rand_elem(*f, rng);
    if (it % 7 == 0) c = a, d = b;  // pushes toward the α = β = 0 buckets
    auto sys = semilinear_system(f, a, b, c, d);
    seen.insert(sys.bucket);
    std::uint64_t brute = 0;
    for (Elem x : t) {
      for (Elem y : t) {
        const Elem f1 = f->mul(a, x) ^ f->mul(b, y) ^ fr(x, 2) ^ fr(y, 1);
        const Elem f2 = f->mul(c, x) ^ f->mul(d, y) ^ fr(x, 1) ^ fr(y, 3);
        brute += (f1 == 0 && f2 == 0);
      }
    }
    ASSERT_EQ(count_solutions(sys), brute);
    EXPECT_LE(brute, 4u);
    EXPECT_EQ(weight(u, system_subspace(sys)), sys.kernel_dim);
    EXPECT_EQ(system_solutions(sys).size(), brute);
    // α and β are symmetric under x -> x^{q²}, so they lie in F_{q²}.
    EXPECT_TRUE(f->in_subfield(sys.alpha, 2));
    EXPECT_TRUE(f->in_subfield(sys.beta, 2));
    EXPECT_EQ(sys.bucket == SystemCase::alpha_only, sys.alpha && !sys.beta);
    EXPECT_EQ(sys.bucket == SystemCase::zero_gamma_zero, !sys.alpha && !sys.beta && !sys.gamma);
  }
  EXPECT_GE(seen.size(), 4u);
}

TEST(SemilinearSystem, LambdaIsTheRelativeTraceOnT) {
  for (int h : {1, 3}) {
    auto f = Field::tower(h);
    std::mt19937_64 rng(h);
    for (int it = 0; it < 200; ++it) {
      const Elem a = rand_elem(*f, rng);
      Elem u = 0;
      for (Elem t : f->trace_kernel_basis()) {
        if (rng() & 1) u ^= f->mul(f->fq_elem(static_cast<int>(rng() % f->q())), t);
      }
      const Elem l = system_lambda(*f, a, u);
      EXPECT_TRUE(f->in_subfield(l, 2));
      EXPECT_EQ(l, f->rel_trace(f->mul(a, u), 2));
    }
  }
}

TEST(SemilinearSystem, BoundAtQ8) {
  auto f = Field::tower(3);
  auto u = build_Us(f, 1);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 100; ++it) {
    auto sys = semilinear_system(f, rand_elem(*f, rng), rand_elem(*f, rng), rand_elem(*f, rng), rand_elem(*f, rng));
    EXPECT_LE(count_solutions(sys), 64u);
    EXPECT_EQ(weight(u, system_subspace(sys)), sys.kernel_dim);
    for (auto [x, y] : system_solutions(sys)) {
      EXPECT_EQ(f->rel_trace(x, 2), 0u);
      EXPECT_EQ(f->mul(sys.a, x) ^ f->mul(sys.b, y) ^ f->frob_q(x, 2) ^ f->frob_q(y, 1), 0u);
    }
  }
}
