#include <gtest/gtest.h>

#include <random>

#include "lca/automata.hpp"
#include "lca/io.hpp"

using namespace lca;

namespace {

Config random_config(std::mt19937_64& rng, int d, uint32_t p, int64_t lo, int64_t hi) {
  Config c(State(d, 0));
  for (int64_t x = lo; x <= hi; ++x) {
    State s(d);
    for (auto& v : s) v = static_cast<uint32_t>(rng() % p);
    c.set(x, s);
  }
  return c;
}

Config mirror_config(const Config& c) {
  Config out(c.background);
  for (auto& [x, s] : c.cells) out.set(-x, s);
  return out;
}

std::vector<LinearCA> linear_builtins() {
  return {builtin::xor_ca(), builtin::theta(), builtin::theta_inv(), builtin::gamma(), builtin::gamma_inv(),
          builtin::shift(3), builtin::nilpotent()};
}

}  // namespace

// F(c)_x = c(x) + c(x-1) for the symbol 1 + u^-1.
TEST(Step, XorSpike) {
  auto c = step(builtin::xor_ca(), spike(builtin::xor_ca(), 0, {1}));
  EXPECT_EQ(c.cells.size(), 2u);
  EXPECT_EQ(c.at(0), State{1});
  EXPECT_EQ(c.at(1), State{1});
}

TEST(Step, ShiftMovesRight) {
  for (int64_t z : {-2, 0, 5}) {
    auto c = step(builtin::shift(z), spike(builtin::shift(z), 4, {1}));
    ASSERT_EQ(c.cells.size(), 1u);
    EXPECT_EQ(c.cells.begin()->first, 4 + z);
  }
}

TEST(Step, AndRule) {
  Config c(State{0});
  c.set(0, {1});
  c.set(1, {1});
  c.set(3, {1});
  auto out = step(builtin::and_ca(), c);
  EXPECT_EQ(out.cells.size(), 1u);
  EXPECT_EQ(out.at(0), State{1});
}

TEST(Rescale, IterationIsSymbolPower) {
  for (auto& f : linear_builtins())
    EXPECT_EQ(rescale(f, Rescaling{1, 5, 0}).symbol, lm_pow(f.symbol, 5));
}

TEST(Rescale, CommutesWithPackingAndShift) {
  std::mt19937_64 rng(5);
  for (auto& f : linear_builtins())
    for (int64_t m : {1, 2, 3})
      for (int64_t t : {1, 2})
        for (int64_t z : {-1, 0, 2}) {
          auto g = rescale(f, Rescaling{m, t, z});
          auto c = random_config(rng, f.d(), f.p(), -7, 9);
          auto lhs = step(g, pack_config(c, m));
          auto rhs = pack_config(shift_config(iterate(f, c, t), z), m);
          EXPECT_EQ(lhs, rhs) << "m=" << m << " t=" << t << " z=" << z;
        }
}

TEST(Product, ActsComponentwise) {
  std::mt19937_64 rng(9);
  auto a = builtin::xor_ca(), b = builtin::theta();
  auto ab = product(a, b);
  auto ca = random_config(rng, 1, 2, -4, 4), cb = random_config(rng, 2, 2, -4, 4);
  Config joint(State(3, 0));
  for (int64_t x = -4; x <= 4; ++x) {
    State s = ca.at(x);
    s.insert(s.end(), cb.at(x).begin(), cb.at(x).end());
    joint.set(x, s);
  }
  auto out = step(ab, joint);
  auto oa = step(a, ca), ob = step(b, cb);
  for (int64_t x = -8; x <= 8; ++x) {
    State s = oa.at(x);
    s.insert(s.end(), ob.at(x).begin(), ob.at(x).end());
    EXPECT_EQ(out.at(x), s);
  }
}

TEST(Product, GeneralTables) {
  auto p = product(builtin::and_ca(), to_general(builtin::xor_ca()));
  EXPECT_EQ(p.q, 4u);
  std::mt19937_64 rng(2);
  Config c(State{0});
  for (int64_t x = -3; x <= 3; ++x) c.set(x, {static_cast<uint32_t>(rng() % 4)});
  auto out = step(p, c);
  Config a(State{0}), b(State{0});
  for (auto& [x, s] : c.cells) {
    a.set(x, {s[0] % 2});
    b.set(x, {s[0] / 2});
  }
  auto oa = step(builtin::and_ca(), a), ob = step(to_general(builtin::xor_ca()), b);
  for (int64_t x = -6; x <= 6; ++x) EXPECT_EQ(out.at(x)[0], oa.at(x)[0] + 2 * ob.at(x)[0]);
}

TEST(Mirror, ConjugatesByReflection) {
  std::mt19937_64 rng(4);
  for (auto& f : linear_builtins()) {
    auto c = random_config(rng, f.d(), f.p(), -5, 6);
    EXPECT_EQ(step(mirror(f), mirror_config(c)), mirror_config(step(f, c)));
  }
  auto g = builtin::and_ca();
  Config c(State{0});
  for (int64_t x = -3; x <= 4; ++x) c.set(x, {static_cast<uint32_t>(rng() % 2)});
  EXPECT_EQ(step(mirror(g), mirror_config(c)), mirror_config(step(g, c)));
}

TEST(Inverse, UndoesStep) {
  std::mt19937_64 rng(8);
  for (auto& f : {builtin::theta(), builtin::gamma(), builtin::gamma_inv(), builtin::shift(-2)}) {
    auto c = random_config(rng, f.d(), f.p(), -6, 6);
    EXPECT_EQ(step(inverse(f), step(f, c)), c);
  }
  EXPECT_THROW(inverse(builtin::xor_ca()), NotInvertible);
}

// The dual is mir o F^-1 o mir.
TEST(Dual, IsMirroredInverse) {
  std::mt19937_64 rng(12);
  auto f = builtin::gamma();
  auto c = random_config(rng, 3, 2, -5, 5);
  EXPECT_EQ(step(dual(f), c), mirror_config(step(inverse(f), mirror_config(c))));
  EXPECT_EQ(dual(dual(f)), f);
}

// Swapping the two coordinates embeds Theta^-1 into Theta.
TEST(Embedding, ThetaInverseInTheta) {
  auto swap = MatF::from_rows(2, {{0, 1}, {1, 0}});
  EXPECT_TRUE(verify_linear_embedding(builtin::theta_inv(), builtin::theta(), swap));
  EXPECT_FALSE(verify_linear_embedding(builtin::theta_inv(), builtin::theta(), MatF::identity(2, 2)));
  EXPECT_THROW(verify_linear_embedding(builtin::theta_inv(), builtin::theta(), MatF::from_rows(2, {{1, 1}, {1, 1}})),
               AlgebraError);
}

TEST(Embedding, DiagonalIntoSquare) {
  auto phi = MatF::from_rows(2, {{1}, {1}});
  EXPECT_TRUE(verify_linear_embedding(builtin::xor_ca(), product(builtin::xor_ca(), builtin::xor_ca()), phi));
}

TEST(General, TableMatchesLinear) {
  std::mt19937_64 rng(6);
  for (auto& f : {builtin::xor_ca(), builtin::theta(), builtin::shift(-1)}) {
    auto g = to_general(f);
    auto c = random_config(rng, f.d(), f.p(), -4, 4);
    Config cg(State{0});
    for (auto& [x, s] : c.cells) cg.set(x, {encode_state(s, f.p())});
    auto lin = step(f, c), gen = step(g, cg);
    for (int64_t x = -8; x <= 8; ++x) EXPECT_EQ(encode_state(lin.at(x), f.p()), gen.at(x)[0]);
  }
}

TEST(General, RejectsBadTables) {
  EXPECT_THROW(GeneralCA(2, {0, 1}, {0, 1}), AlgebraError);
  EXPECT_THROW(GeneralCA(2, {1, 0}, {0, 0, 0, 1}), AlgebraError);
  EXPECT_THROW(GeneralCA(2, {0}, {0, 2}), AlgebraError);
}

TEST(Registry, NamesResolve) {
  EXPECT_EQ(builtin::linear_by_name("identity(3)").d(), 3);
  EXPECT_EQ(builtin::linear_by_name("shift(-4)").symbol.at(4), MatF::identity(2, 1));
  EXPECT_TRUE(std::holds_alternative<GeneralCA>(builtin::by_name("and")));
  EXPECT_THROW(builtin::by_name("rule110"), std::invalid_argument);
  EXPECT_THROW(builtin::linear_by_name("and"), std::invalid_argument);
}

// The serialized Gamma document is the symbol printed for it.
TEST(Serialization, GammaDocument) {
  auto j = nlohmann::json::parse(R"({"p":2, "d":3, "symbol":[{"exp":0, "matrix":[[0,0,1],[0,1,0],[1,0,0]]},
                                      {"exp":1, "matrix":[[0,0,0],[0,0,1],[0,1,0]]}]})");
  EXPECT_EQ(symbol_from_json(j), builtin::gamma().symbol);
  EXPECT_EQ(symbol_from_json(symbol_json(builtin::gamma_inv().symbol)), builtin::gamma_inv().symbol);
  auto dup = nlohmann::json::parse(R"({"p":2, "d":1, "symbol":[{"exp":0, "matrix":[[1]]},{"exp":0, "matrix":[[1]]}]})");
  EXPECT_THROW(symbol_from_json(dup), FormatError);
  auto a = automaton_from_json(automaton_json(builtin::and_ca()));
  EXPECT_EQ(std::get<GeneralCA>(a), builtin::and_ca());
}
