#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "scatter/fq_linalg.hpp"

using namespace scatter;

namespace {

Elem rand_elem(const Field& f, std::mt19937_64& rng) { return rng() & (f.size() - 1); }

Vec rand_vec(const Field& f, int r, std::mt19937_64& rng) {
  Vec v(r);
  for (auto& x : v) x = rand_elem(f, rng);
  return v;
}

MatrixFqm rand_invertible(const Field& f, int n, std::mt19937_64& rng) {
  for (;;) {
    MatrixFqm a(n, n);
    for (auto& x : a.a) x = rand_elem(f, rng);
    if (row_reduce(f, a).rank == n) return a;
  }
}

// Determinant by Laplace expansion along the first row (signs vanish in characteristic 2).
Elem cofactor_det(const Field& f, const MatrixFqm& m) {
  if (m.rows == 1) return m(0, 0);
  Elem acc = 0;
  for (int c = 0; c < m.cols; ++c) {
    if (!m(0, c)) continue;
    MatrixFqm minor(m.rows - 1, m.cols - 1);
    for (int i = 1; i < m.rows; ++i) {
      for (int j = 0, jj = 0; j < m.cols; ++j) {
        if (j != c) minor(i - 1, jj++) = m(i, j);
      }
    }
    acc ^= f.mul(m(0, c), cofactor_det(f, minor));
  }
  return acc;
}

// At q = 2 an F_2-dependence among t_1..t_k is a nonempty subset summing to zero.
bool brute_dependent(std::span<const Elem> t) {
  const std::size_t n = t.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Elem s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) s ^= t[i];
    }
    if (s == 0) return true;
  }
  return false;
}

}  // namespace

TEST(RowReduce, IdentityAndRepeatedRows) {
  auto f = Field::tower(1);
  auto red = row_reduce(*f, MatrixFqm::identity(4));
  EXPECT_EQ(red.rank, 4);
  EXPECT_EQ(*red.det, 1u);
  MatrixFqm m(3, 3);
  m(0, 0) = 5, m(0, 1) = 7, m(0, 2) = 9;
  m(1, 0) = 5, m(1, 1) = 7, m(1, 2) = 9;
  m(2, 2) = 1;
  EXPECT_EQ(*row_reduce(*f, m).det, 0u);
  EXPECT_FALSE(row_reduce(*f, MatrixFqm(2, 3)).det.has_value());
}

TEST(RowReduce, DeterminantMatchesCofactorExpansion) {
  auto f = Field::tower(1);
  std::mt19937_64 rng(11);
  for (int it = 0; it < 500; ++it) {
    MatrixFqm m(4, 4);
    for (auto& x : m.a) x = rand_elem(*f, rng);
    if (it % 10 == 0) {
      for (int j = 0; j < 4; ++j) m(3, j) = m(0, j) ^ f->mul(3, m(1, j));
    }
    ASSERT_EQ(*row_reduce(*f, m).det, cofactor_det(*f, m));
  }
}

TEST(RowReduce, InverseAndNullspace) {
  auto f = Field::tower(3);
  std::mt19937_64 rng(12);
  const MatrixFqm a = rand_invertible(*f, 4, rng);
  EXPECT_EQ(mat_mul(*f, a, inverse(*f, a)), MatrixFqm::identity(4));
  MatrixFqm s(2, 4);
  for (auto& x : s.a) x = rand_elem(*f, rng);
  const auto ker = nullspace(*f, s);
  EXPECT_EQ(ker.size(), 2u);
  for (const auto& x : ker) {
    for (int i = 0; i < 2; ++i) {
      Elem acc = 0;
      for (int j = 0; j < 4; ++j) acc ^= f->mul(s(i, j), x[j]);
      EXPECT_EQ(acc, 0u);
    }
  }
  MatrixFqm sing(2, 2);
  sing(0, 0) = 1;
  EXPECT_THROW(inverse(*f, sing), SingularMatrix);
}

TEST(Moore, DeterminantVanishesExactlyOnDependence) {
  auto f = Field::tower(1);
  const auto& t = f->trace_kernel_basis();
  EXPECT_NE(*row_reduce(*f, moore_matrix(*f, t)).det, 0u);
  const Elem rep[4] = {t[0], t[0], t[2], t[3]};
  EXPECT_EQ(*row_reduce(*f, moore_matrix(*f, rep)).det, 0u);

  std::mt19937_64 rng(13);
  int dependent = 0;
  for (int it = 0; it < 1000; ++it) {
    Elem tup[4];
    for (auto& x : tup) x = rand_elem(*f, rng);
    if (it % 4 == 0) tup[3] = tup[0] ^ tup[1];  // make sure both outcomes occur
    const bool dep = brute_dependent(tup);
    dependent += dep;
    ASSERT_EQ(*row_reduce(*f, moore_matrix(*f, tup)).det == 0, dep);
  }
  EXPECT_GT(dependent, 0);
  // All 4-subsets of a fixed 5-element set.
  const Elem five[5] = {1, 2, 3, 0x10, 0x21};
  for (int skip = 0; skip < 5; ++skip) {
    std::vector<Elem> sub;
    for (int i = 0; i < 5; ++i) {
      if (i != skip) sub.push_back(five[i]);
    }
    EXPECT_EQ(*row_reduce(*f, moore_matrix(*f, sub)).det == 0, brute_dependent(sub));
  }
}

TEST(Subspaces, SpanBasics) {
  auto f = Field::tower(1);
  EXPECT_EQ(FqSubspace::span(f, 4, std::vector<Vec>{Vec(4, 0)}).dim(), 0);
  const Vec v{1, 2, 3, 4};
  Vec lv(4);
  for (int i = 0; i < 4; ++i) lv[i] = f->mul(2, v[i]);
  const std::vector<Vec> both{v, lv};
  EXPECT_EQ(FqSubspace::span(f, 4, both).dim(), 2);
  EXPECT_EQ(FqmSubspace::span(f, 4, both).dim(), 1);
  EXPECT_EQ(fqm_span_dim(*f, both), 1);
  EXPECT_EQ(fqm_span_dim(*f, std::vector<Vec>{v}), 1);

  const auto s = FqSubspace::span(f, 4, both);
  EXPECT_EQ(FqSubspace::span(f, 4, s.basis()), s);
  Vec sum(4), v4(4);
  for (int i = 0; i < 4; ++i) sum[i] = v[i] ^ lv[i], v4[i] = f->mul(4, v[i]);
  EXPECT_TRUE(s.contains(sum));
  EXPECT_FALSE(s.contains(v4));
  EXPECT_THROW(FqSubspace::span(f, 4, std::vector<Vec>{Vec(3, 0)}), AmbientMismatch);
}

TEST(Subspaces, FlattenIntersectWeight) {
  auto f = Field::tower(1);
  std::mt19937_64 rng(14);
  std::vector<Vec> gens;
  for (int i = 0; i < 8; ++i) gens.push_back(rand_vec(*f, 4, rng));
  const auto u = FqSubspace::span(f, 4, gens);
  ASSERT_EQ(u.dim(), 8);
  EXPECT_EQ(weight(u, FqmSubspace::full(f, 4)), 8);
  EXPECT_EQ(weight(u, FqmSubspace::span(f, 4, {})), 0);
  const WeightEvaluator ev(u);
  for (int it = 0; it < 200; ++it) {
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<Vec> hg;
    for (int i = 0; i < d; ++i) hg.push_back(rand_vec(*f, 4, rng));
    // plant part of U inside H sometimes
    if (it % 3 == 0) hg[0] = gens[0];
    const auto h = FqmSubspace::span(f, 4, hg);
    EXPECT_EQ(FqSubspace::flatten(h).dim(), 6 * h.dim());
    const int w = weight(u, h);
    EXPECT_LE(w, std::min(8, 6 * h.dim()));
    EXPECT_EQ(ev.weight(h), w);
  }
}

TEST(Subspaces, WeightIsGlInvariant) {
  for (int hexp : {1, 3}) {
    auto f = Field::tower(hexp);
    std::mt19937_64 rng(15);
    std::vector<Vec> gens;
    for (int i = 0; i < 8; ++i) gens.push_back(rand_vec(*f, 4, rng));
    const auto u = FqSubspace::span(f, 4, gens);
    for (int it = 0; it < 30; ++it) {
      const MatrixFqm a = rand_invertible(*f, 4, rng);
      std::vector<Vec> hg{gens[0], rand_vec(*f, 4, rng), rand_vec(*f, 4, rng)};
      const auto h = FqmSubspace::span(f, 4, hg);
      EXPECT_EQ(weight(apply_gl(a, u), apply_gl(a, h)), weight(u, h));
      EXPECT_EQ(apply_gl(a, apply_gl(inverse(*f, a), u)), u);
    }
    EXPECT_EQ(apply_gl(MatrixFqm::identity(4), u), u);
    EXPECT_THROW(apply_gl(MatrixFqm(4, 4), u), SingularMatrix);
  }
}

TEST(Enumeration, GaussianBinomials) {
  EXPECT_EQ(gaussian_binomial(4, 3, 64), 266305u);
  EXPECT_EQ(gaussian_binomial(4, 2, 64), 17047617u);
  EXPECT_EQ(gaussian_binomial(8, 3, 2), 97155u);
  EXPECT_EQ(gaussian_binomial(8, 2, 2), 10795u);
  EXPECT_EQ(gaussian_binomial(4, 4, 64), 1u);
  EXPECT_EQ(gaussian_binomial(4, 0, 64), 1u);
  // product formula
  const std::uint64_t q = 64;
  EXPECT_EQ(gaussian_binomial(4, 2, q), (q * q * q * q - 1) * (q * q * q - 1) / ((q * q - 1) * (q - 1)));
  EXPECT_EQ(gaussian_binomial(4, 3, q), (q * q * q * q - 1) / (q - 1));
  EXPECT_EQ(gaussian_binomial(8, 3, 2), 255u * 127 * 63 / (7 * 3 * 1));
}

TEST(Enumeration, CursorYieldsDistinctRrefOfRightCount) {
  // q = 3 alphabet on n=5, d=2 is small enough to store everything.
  for (auto [n, d, qq] : {std::tuple{5, 2, 3}, std::tuple{4, 3, 4}, std::tuple{4, 0, 4}, std::tuple{4, 4, 4}}) {
    RrefCursor cur(n, d, qq);
    std::set<std::vector<std::uint64_t>> seen;
    std::uint64_t count = 0;
    for (; cur.valid(); cur.next()) {
      std::vector<std::uint64_t> key;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n; ++j) key.push_back(cur.symbol(i, j));
      }
      EXPECT_TRUE(seen.insert(key).second);
      ++count;
    }
    EXPECT_EQ(count, gaussian_binomial(n, d, qq));
  }
}

TEST(Enumeration, SeekAndStrideMatchSequentialRun) {
  RrefCursor seq(6, 3, 4);
  std::vector<std::vector<std::uint64_t>> all;
  for (; seq.valid(); seq.next()) {
    std::vector<std::uint64_t> key;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 6; ++j) key.push_back(seq.symbol(i, j));
    }
    all.push_back(key);
  }
  for (std::uint64_t stride : {1u, 3u, 8u, 100u}) {
    for (std::uint64_t start = 0; start < std::min<std::uint64_t>(stride, 3); ++start) {
      RrefCursor c(6, 3, 4);
      c.seek(start);
      for (; c.valid(); c.advance(stride)) {
        std::vector<std::uint64_t> key;
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 6; ++j) key.push_back(c.symbol(i, j));
        }
        ASSERT_EQ(key, all[c.index()]);
      }
    }
  }
}

TEST(Enumeration, FqmLinesCountAtQ2) {
  auto f = Field::tower(1);
  RrefCursor c(4, 3, f->size());
  EXPECT_EQ(c.total(), 266305u);
  EXPECT_EQ(RrefCursor(4, 2, f->size()).total(), 17047617u);
}
