#include <gtest/gtest.h>

#include <random>

#include "scatter/field_tower.hpp"
#include "scatter/fq_echelon.hpp"

using namespace scatter;

namespace {

// Schoolbook product of two polynomials over GF(2), then long division by the modulus.
Elem schoolbook(Elem a, Elem b, std::uint64_t mod, int e) {
  unsigned __int128 prod = 0;
  for (int i = 0; i < e; ++i) {
    if ((b >> i) & 1) prod ^= static_cast<unsigned __int128>(a) << i;
  }
  for (int d = 2 * e - 2; d >= e; --d) {
    if ((prod >> d) & 1) prod ^= static_cast<unsigned __int128>(mod) << (d - e);
  }
  return static_cast<Elem>(prod);
}

// Irreducible iff no polynomial of degree 1..deg/2 divides it.
bool brute_irreducible(std::uint64_t f) {
  const int n = 63 - __builtin_clzll(f);
  for (std::uint64_t g = 2; g < (std::uint64_t{1} << (n / 2 + 1)); ++g) {
    std::uint64_t r = f;
    const int dg = 63 - __builtin_clzll(g);
    while (r && 63 - __builtin_clzll(r) >= dg) r ^= g << (63 - __builtin_clzll(r) - dg);
    if (r == 0) return false;
  }
  return true;
}

}  // namespace

TEST(FieldTower, DefaultModuliAreIrreducible) {
  EXPECT_TRUE(brute_irreducible(0x5b));
  EXPECT_TRUE(brute_irreducible(Field::default_modulus(18)));
  for (int d : {6, 18, 30}) EXPECT_TRUE(Field::is_irreducible(Field::default_modulus(d))) << d;
}

TEST(FieldTower, RabinMatchesBruteForceUpToDegree12) {
  for (std::uint64_t f = 4; f < (1u << 13); ++f) {
    ASSERT_EQ(Field::is_irreducible(f), brute_irreducible(f)) << std::hex << f;
  }
}

TEST(FieldTower, ConstructionErrors) {
  EXPECT_THROW(Field::make(6, 0x44, 1), ReducibleModulus);  // x^6 + x^2
  EXPECT_THROW(Field::make(12, 0x1053, 2), EvenH);
  EXPECT_THROW(Field::make(6, 0x40009, 1), DegreeMismatch);
  EXPECT_THROW(Field::make(18, 0x40009, 1), DegreeMismatch);
  EXPECT_NO_THROW(Field::make(6, 0x5b, 1));
  EXPECT_NO_THROW(Field::make(6, 0x43, 1));  // x^6 + x + 1
}

TEST(FieldTower, ReductionByModulus) {
  auto f = Field::tower(1);
  EXPECT_EQ(f->mul(Elem{1} << 5, 2), Elem{0b011011});  // x^5 * x = x^4 + x^3 + x + 1
}

class FieldByH : public ::testing::TestWithParam<int> {};

TEST_P(FieldByH, MulMatchesSchoolbook) {
  auto f = Field::tower(GetParam());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Elem a = rng() & (f->size() - 1);
    const Elem b = rng() & (f->size() - 1);
    ASSERT_EQ(f->mul(a, b), schoolbook(a, b, f->modulus(), f->degree()));
  }
}

TEST_P(FieldByH, ArithmeticAxioms) {
  auto f = Field::tower(GetParam());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Elem a = rng() & (f->size() - 1);
    const Elem b = rng() & (f->size() - 1);
    EXPECT_EQ(f->add(a, a), 0u);
    if (a) EXPECT_EQ(f->mul(a, f->inv(a)), 1u);
    EXPECT_EQ(f->pow(a, 3), f->mul(a, f->mul(a, a)));
    EXPECT_EQ(f->frob_q(a, 0), a);
    EXPECT_EQ(f->frob_q(a, 6), a);
    EXPECT_EQ(f->frob_q(a ^ b, 2), f->frob_q(a, 2) ^ f->frob_q(b, 2));
    EXPECT_EQ(f->frob_q(a, 1), f->pow(a, f->q()));
    EXPECT_EQ(f->rel_trace(a, 2), a ^ f->frob_q(a, 2) ^ f->frob_q(a, 4));
    EXPECT_TRUE(f->in_subfield(f->rel_trace(a, 2), 2));
    EXPECT_TRUE(f->in_subfield(f->rel_trace(a, 1), 1));
    EXPECT_EQ(f->rel_trace(f->frob_q(a, 2), 2), f->rel_trace(a, 2));
  }
  EXPECT_THROW(f->inv(0), ZeroInverse);
  EXPECT_THROW(f->rel_trace(1, 3), BadSubIndex);
  EXPECT_EQ(f->rel_trace(0, 2), 0u);
}

TEST_P(FieldByH, TraceKernel) {
  auto f = Field::tower(GetParam());
  const auto& t = f->trace_kernel_basis();
  ASSERT_EQ(t.size(), 4u);
  std::vector<FqRow> rows;
  for (Elem x : t) {
    EXPECT_EQ(f->rel_trace(x, 2), 0u);
    FqRow r;
    f->row_put(r, 0, x);
    rows.push_back(r);
  }
  EXPECT_EQ(fq_rank(*f, rows), 4);
  FqEchelon ech(*f);
  for (const auto& r : rows) ech.insert(r);
  FqRow one;
  f->row_put(one, 0, 1);
  EXPECT_FALSE(ech.contains(one));
  // T is closed under F_{q^2}-scalars and every Frobenius power.
  const auto fq2 = f->subfield_elements(2);
  for (Elem x : t) {
    for (int i = 0; i < 6; ++i) {
      FqRow r;
      f->row_put(r, 0, f->frob_q(x, i));
      EXPECT_TRUE(ech.contains(r));
    }
    for (std::size_t k = 0; k < std::min<std::size_t>(fq2.size(), 16); ++k) {
      FqRow r;
      f->row_put(r, 0, f->mul(fq2[k], x));
      EXPECT_TRUE(ech.contains(r));
    }
  }
}

TEST_P(FieldByH, SubfieldCoordinates) {
  auto f = Field::tower(GetParam());
  EXPECT_EQ(f->subfield_elements(1).size(), f->q());
  EXPECT_EQ(f->subfield_elements(2).size(), f->q() * f->q());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Elem a = rng() & (f->size() - 1);
    EXPECT_EQ(f->from_coords(f->coords(a)), a);
    const int c = static_cast<int>(rng() % f->q());
    const int d = static_cast<int>(rng() % f->q());
    EXPECT_EQ(f->fq_elem(f->fq_mul(c, d)), f->mul(f->fq_elem(c), f->fq_elem(d)));
    // scaling a row by an F_q code matches scaling the element
    FqRow r;
    f->row_put(r, 1, a);
    EXPECT_EQ(f->row_get(f->row_scaled(c, r), 1), f->mul(f->fq_elem(c), a));
  }
  EXPECT_EQ(f->fq_elem(1), 1u);
}

TEST_P(FieldByH, HexRoundTrip) {
  auto f = Field::tower(GetParam());
  const Elem a = 0x2b & (f->size() - 1);
  EXPECT_EQ(f->from_hex(f->to_hex(a)), a);
  EXPECT_EQ(f->to_hex(a).size(), static_cast<std::size_t>((f->degree() + 3) / 4));
  EXPECT_THROW(f->from_hex("zz"), FieldError);
}

INSTANTIATE_TEST_SUITE_P(H, FieldByH, ::testing::Values(1, 3, 5));

TEST(FieldElement, OwnershipAndOperators) {
  auto f = Field::tower(1);
  auto g = Field::make(6, 0x43, 1);
  FieldElement a(f, 5), b(f, 9);
  EXPECT_EQ((a * b).bits(), f->mul(5, 9));
  EXPECT_EQ((a / a).bits(), 1u);
  EXPECT_TRUE((a + a).is_zero());
  EXPECT_THROW(a + FieldElement(g, 1), FieldMismatch);
  EXPECT_THROW(FieldElement(f, 64), FieldError);
  EXPECT_EQ(FieldElement(f, 0x1b).hex(), "1b");
}
