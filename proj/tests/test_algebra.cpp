#include <gtest/gtest.h>

#include <random>

#include "lca/algebra.hpp"
#include "lca/automata.hpp"

using namespace lca;

namespace {

// Schoolbook product over Z_p, kept independent of the bit-packed kernel.
std::vector<std::vector<int64_t>> naive_mul(const std::vector<std::vector<int64_t>>& a,
                                            const std::vector<std::vector<int64_t>>& b, int64_t p) {
  std::vector<std::vector<int64_t>> c(a.size(), std::vector<int64_t>(b[0].size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b[0].size(); ++j)
      for (size_t k = 0; k < b.size(); ++k) c[i][j] = (c[i][j] + a[i][k] * b[k][j]) % p;
  return c;
}

std::vector<std::vector<int64_t>> random_rows(std::mt19937_64& rng, int r, int c, int64_t p) {
  std::vector<std::vector<int64_t>> m(r, std::vector<int64_t>(c));
  for (auto& row : m)
    for (auto& v : row) v = static_cast<int64_t>(rng() % p);
  return m;
}

ScalarLaurent poly(std::map<int64_t, uint32_t> c) { return ScalarLaurent(2, std::move(c)); }

}  // namespace

TEST(Fp, InverseAndPow) {
  EXPECT_EQ(fp_inv(3, 7), 5u);  // 3 * 5 = 15 = 1 mod 7
  EXPECT_EQ(fp_pow(2, 10, 1000003), 1024u);
  EXPECT_EQ(fp_neg(0, 5), 0u);
  EXPECT_EQ(fp_sub(1, 3, 5), 3u);
  EXPECT_TRUE(is_prime(2));
  EXPECT_FALSE(is_prime(9));
  EXPECT_THROW(fp_inv(0, 7), std::exception);
}

TEST(MatF, ProductMatchesSchoolbook) {
  std::mt19937_64 rng(7);
  for (int64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 30; ++trial) {
      int r = 1 + static_cast<int>(rng() % 6), k = 1 + static_cast<int>(rng() % 6), c = 1 + static_cast<int>(rng() % 6);
      auto a = random_rows(rng, r, k, p), b = random_rows(rng, k, c, p);
      auto prod = MatF::from_rows(static_cast<uint32_t>(p), a) * MatF::from_rows(static_cast<uint32_t>(p), b);
      EXPECT_EQ(prod.to_rows(), naive_mul(a, b, p));
    }
  }
}

TEST(MatF, WideGf2Rows) {
  std::mt19937_64 rng(11);
  auto a = random_rows(rng, 64, 64, 2), b = random_rows(rng, 64, 64, 2);
  EXPECT_EQ((MatF::from_rows(2, a) * MatF::from_rows(2, b)).to_rows(), naive_mul(a, b, 2));
}

TEST(MatF, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  int found = 0;
  for (int64_t p : {2, 3, 7})
    for (int trial = 0; trial < 40; ++trial) {
      auto m = MatF::from_rows(static_cast<uint32_t>(p), random_rows(rng, 4, 4, p));
      auto inv = m.inverse();
      EXPECT_EQ(inv.has_value(), m.rank() == 4);
      EXPECT_EQ(m.invertible(), m.rank() == 4);
      if (inv) {
        ++found;
        EXPECT_EQ(m * *inv, MatF::identity(static_cast<uint32_t>(p), 4));
        EXPECT_EQ(*inv * m, MatF::identity(static_cast<uint32_t>(p), 4));
      }
    }
  EXPECT_GT(found, 10);
  EXPECT_FALSE(MatF::from_rows(2, {{1, 1}, {1, 1}}).inverse().has_value());
}

TEST(MatF, BlocksAndTranspose) {
  auto m = MatF::from_rows(2, {{1, 0, 1}, {0, 1, 1}});
  EXPECT_EQ(m.transpose().to_rows(), (std::vector<std::vector<int64_t>>{{1, 0}, {0, 1}, {1, 1}}));
  MatF big(2, 4);
  big.put_block(2, 1, MatF::from_rows(2, {{1, 1}, {0, 1}}));
  EXPECT_EQ(big.get(2, 1), 1u);
  EXPECT_EQ(big.get(3, 2), 1u);
  EXPECT_EQ(big.block(2, 1, 2, 2), MatF::from_rows(2, {{1, 1}, {0, 1}}));
  EXPECT_EQ(m.rank(), 2);
}

TEST(ScalarLaurent, FrobeniusInCharacteristicTwo) {
  auto s = poly({{0, 1}, {1, 1}});
  EXPECT_EQ((s * s).coeffs, (poly({{0, 1}, {2, 1}})).coeffs);
  auto t = poly({{-3, 1}});
  EXPECT_TRUE(t.is_unit());
  EXPECT_EQ((t * t.unit_inverse()).coeffs, ScalarLaurent::constant(2, 1).coeffs);
  EXPECT_FALSE(s.is_unit());
  EXPECT_EQ(to_string(poly({{0, 1}, {2, 1}})), to_string(poly({{2, 1}, {0, 1}})));
}

// Theta times its printed inverse is the identity symbol.
TEST(Laurent, ThetaReversible) {
  auto prod = lm_mul(builtin::theta().symbol, builtin::theta_inv().symbol);
  EXPECT_EQ(prod, LaurentMat::identity(2, 2));
  EXPECT_EQ(lm_invert(builtin::theta().symbol), builtin::theta_inv().symbol);
}

// det [[0,0,1],[0,1,u],[1,u,0]] expands along the first row to -1 = 1 over Z_2.
TEST(Laurent, GammaDeterminantIsOne) {
  EXPECT_EQ(lm_det(builtin::gamma().symbol).coeffs, ScalarLaurent::constant(2, 1).coeffs);
  EXPECT_EQ(lm_invert(builtin::gamma().symbol), builtin::gamma_inv().symbol);
  EXPECT_EQ(lm_mul(builtin::gamma_inv().symbol, builtin::gamma().symbol), LaurentMat::identity(2, 3));
}

TEST(Laurent, NonUnitDeterminantIsRejected) {
  EXPECT_THROW(lm_invert(builtin::xor_ca().symbol), NotInvertible);
  EXPECT_FALSE(lm_try_invert(builtin::xor_ca().symbol).has_value());
  EXPECT_FALSE(lm_try_invert(builtin::nilpotent().symbol).has_value());
}

TEST(Laurent, PowerMatchesRepeatedProduct) {
  for (auto f : {builtin::gamma(), builtin::theta(), builtin::xor_ca()}) {
    LaurentMat acc = LaurentMat::identity(f.p(), f.d());
    for (uint64_t y = 0; y <= 37; ++y) {
      EXPECT_EQ(lm_pow(f.symbol, y), acc) << "y=" << y;
      acc = lm_mul(acc, f.symbol);
    }
  }
}

TEST(Laurent, NilpotentSquaresToZero) {
  EXPECT_TRUE(lm_pow(builtin::nilpotent().symbol, 2).is_zero());
  EXPECT_FALSE(lm_pow(builtin::nilpotent().symbol, 1).is_zero());
}

TEST(MinPoly, PublishedPolynomialsAnnihilate) {
  EXPECT_TRUE(annihilates(builtin::gamma_minpoly(), builtin::gamma().symbol));
  EXPECT_TRUE(annihilates(builtin::gamma_inv_minpoly(), builtin::gamma_inv().symbol));
  // swapping the two polynomials breaks both
  EXPECT_FALSE(annihilates(builtin::gamma_inv_minpoly(), builtin::gamma().symbol));
  EXPECT_FALSE(annihilates(builtin::gamma_minpoly(), builtin::gamma_inv().symbol));
}

// X^2 + X + 1 kills the companion matrix of X^2 + X + 1 over Z_2.
TEST(MinPoly, CompanionMatrix) {
  LaurentMat c(2, 2, {{0, MatF::from_rows(2, {{0, 1}, {1, 1}})}});
  MinPoly m(2, {ScalarLaurent::constant(2, 1), ScalarLaurent::constant(2, 1)});
  EXPECT_TRUE(annihilates(m, c));
  MinPoly wrong(2, {ScalarLaurent::constant(2, 1), ScalarLaurent(2)});
  EXPECT_FALSE(annihilates(wrong, c));
}

TEST(Laurent, MirrorAndDirectSum) {
  auto g = builtin::gamma().symbol;
  EXPECT_EQ(lm_mirror(lm_mirror(g)), g);
  EXPECT_EQ(lm_mirror(g).at(-1), g.at(1));
  auto s = lm_direct_sum(builtin::xor_ca().symbol, builtin::theta().symbol);
  EXPECT_EQ(s.d, 3);
  EXPECT_EQ(s.at(-1).get(0, 0), 1u);
  EXPECT_EQ(s.at(0).block(1, 1, 2, 2), builtin::theta().symbol.at(0));
  EXPECT_TRUE(s.at(0).block(0, 1, 1, 2).is_zero());
}

TEST(Laurent, OddCharacteristic) {
  LaurentMat f(3, 2, {{0, MatF::from_rows(3, {{1, 1}, {0, 1}})}, {1, MatF::from_rows(3, {{0, 2}, {0, 0}})}});
  auto inv = lm_invert(f);
  EXPECT_EQ(lm_mul(f, inv), LaurentMat::identity(3, 2));
  EXPECT_EQ(lm_mul(inv, f), LaurentMat::identity(3, 2));
}
