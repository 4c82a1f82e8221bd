#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "lca/subst.hpp"

using namespace lca;

namespace {

const SubstSystem& gamma_sys() {
  static const SubstSystem s = builtin_system("gamma");
  return s;
}

const SubstSystem& omega_sys() {
  static const SubstSystem s = builtin_system("omega");
  return s;
}

// One-letter system X -> (X 0 / 0 0) that keeps X only in the lower-left quadrant.
SubstSystem one_letter() {
  return subst_from_json(nlohmann::json::parse(R"({"name":"x", "letters":["x"],
    "quadrants":{"00":{"x":["x"]}, "10":{}, "01":{}, "11":{}},
    "init":[{"x":0, "state":["x"]}], "projection":[[["x"]]], "mirror":false})"));
}

}  // namespace

TEST(Tables, LoadAndRoundTrip) {
  for (auto* s : {&gamma_sys(), &omega_sys()}) {
    auto back = subst_from_json(subst_to_json(*s));
    EXPECT_EQ(back.letters, s->letters);
    EXPECT_EQ(back.quad, s->quad);
    EXPECT_EQ(back.init, s->init);
    EXPECT_EQ(back.projection, s->projection);
  }
  EXPECT_EQ(gamma_sys().letters, (std::vector<std::string>{"b", "c", "d", "f", "g"}));
  EXPECT_EQ(omega_sys().letters, (std::vector<std::string>{"d", "e", "h", "i", "k", "l"}));
}

TEST(Tables, RejectMalformed) {
  EXPECT_THROW(subst_from_json(nlohmann::json::parse(R"({"letters":["a","a"], "quadrants":{}, "init":[], "projection":[]})")),
               SubstError);
  EXPECT_THROW(subst_from_json(nlohmann::json::parse(R"({"letters":["a"], "quadrants":{"00":{"a":["z"]},"01":{},"10":{},"11":{}},
                                                        "init":[], "projection":[[["a"]]]})")),
               SubstError);
}

// Letters the text calls equivalent have identical images and projections.
TEST(Tables, PublishedEquivalences) {
  auto g = gamma_full_system();
  EXPECT_TRUE(letters_equivalent(g, "a", "e"));
  EXPECT_TRUE(letters_equivalent(g, "a", "h"));
  EXPECT_FALSE(letters_equivalent(g, "a", "b"));
  auto o = omega_full_system();
  EXPECT_TRUE(letters_equivalent(o, "a", "g"));
  EXPECT_TRUE(letters_equivalent(o, "b", "h"));
  EXPECT_TRUE(letters_equivalent(o, "f", "l"));
  EXPECT_FALSE(letters_equivalent(o, "a", "b"));
}

// The quoted quadrant images used by assertion (ii), as (top-left top-right / bottom-left bottom-right).
TEST(Tables, QuotedQuadrantImages) {
  auto& s = gamma_sys();
  auto S = [&](const char* n) { return s.parse_state(n); };
  EXPECT_EQ(s.apply(0, 1, S("G")), S("G"));
  EXPECT_EQ(s.apply(1, 1, S("G")), S("CF"));
  EXPECT_EQ(s.apply(0, 0, S("G")), S("D"));
  EXPECT_EQ(s.apply(1, 0, S("G")), S("C"));
  EXPECT_EQ(s.apply(0, 0, S("BD")), S("BD"));
  EXPECT_EQ(s.apply(0, 1, S("BD")), 0u);
  EXPECT_EQ(s.apply(1, 1, S("BD")), 0u);
  EXPECT_EQ(s.apply(1, 0, S("BD")), 0u);
}

TEST(Expand, DepthZeroIsTheInitRow) {
  auto g = expand(gamma_sys(), 0);
  EXPECT_EQ(g.height, 1);
  EXPECT_EQ(gamma_sys().state_name(g.at(0, 0)), "D");
  auto o = expand(omega_sys(), 0);
  EXPECT_EQ(omega_sys().state_name(o.at(0, 0)), "L");
  EXPECT_EQ(omega_sys().state_name(o.at(1, 0)), "K");
}

// Every cell printed in the depth-5 figure, and nothing else.
TEST(Expand, FigureThree) {
  std::ifstream is(std::string(LCA_GOLDEN_DIR) + "/figure3.txt");
  ASSERT_TRUE(is.good());
  std::map<std::pair<int64_t, int64_t>, std::string> want;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int64_t x, y;
    std::string st;
    ls >> x >> y >> st;
    want[{x, y}] = st;
  }
  ASSERT_EQ(want.size(), 316u);
  auto g = expand(gamma_sys(), 5);
  std::map<std::pair<int64_t, int64_t>, std::string> got;
  for (int64_t y = 0; y < g.height; ++y)
    for (int64_t x = g.x0; x < g.x0 + g.width; ++x)
      if (g.at(x, y)) got[{x, y}] = gamma_sys().state_name(g.at(x, y));
  EXPECT_EQ(got, want);
}

TEST(Cell, MatchesExpansion) {
  for (auto* s : {&gamma_sys(), &omega_sys()})
    for (int depth = 0; depth <= 8; ++depth) {
      auto g = expand(*s, depth);
      for (int64_t y = 0; y < g.height; ++y)
        for (int64_t x = g.x0 - 1; x <= g.x0 + g.width; ++x) ASSERT_EQ(cell(*s, x, y, depth), g.at(x, y));
    }
  EXPECT_THROW(cell(gamma_sys(), 0, 32, 5), std::out_of_range);
}

TEST(Cell, AxisAndDiagonal) {
  auto& s = gamma_sys();
  for (int64_t n = 0; n < 200; ++n) {
    EXPECT_EQ(s.state_name(cell(s, 0, n, 10)), n % 2 ? "G" : "D");
    if (n >= 1) {
      EXPECT_EQ(s.state_name(cell(s, n, n, 10)), n % 2 ? "F" : "B");
    }
  }
}

TEST(Linearity, QuadrantMapsAndProjection) {
  std::mt19937_64 rng(21);
  for (auto& s : {gamma_sys(), omega_sys(), gamma_full_system(), omega_full_system()}) {
    const SState all = (SState{1} << s.size()) - 1;
    for (int t = 0; t < 200; ++t) {
      SState a = rng() & all, b = rng() & all;
      for (int q = 0; q < 4; ++q) EXPECT_EQ(s.apply(q, a ^ b), s.apply(q, a) ^ s.apply(q, b));
      EXPECT_EQ(s.project(a ^ b), s.project(a) + s.project(b));
    }
  }
}

TEST(Verify, DepthSixBothSystems) {
  auto g = verify_against_green(gamma_sys(), builtin::gamma(), 6);
  EXPECT_TRUE(g.ok);
  EXPECT_GE(g.compared, 4096);
  auto o = verify_against_green(omega_sys(), builtin::gamma_inv(), 6);
  EXPECT_TRUE(o.ok);
  EXPECT_GE(o.compared, 4096);
  EXPECT_TRUE(verify_against_green(gamma_full_system(), builtin::gamma(), 6).ok);
  EXPECT_TRUE(verify_against_green(omega_full_system(), builtin::gamma_inv(), 6).ok);
}

TEST(Verify, ReportsFirstMismatch) {
  auto rep = verify_against_green(gamma_sys(), builtin::gamma_inv(), 3);
  EXPECT_FALSE(rep.ok);
  ASSERT_TRUE(rep.first_mismatch.has_value());
  EXPECT_EQ(rep.first_mismatch->second, 1);
  auto shifted = omega_full_system();
  shifted.init = {{-1, shifted.init[0].second}, {0, shifted.init[1].second}};
  EXPECT_FALSE(verify_against_green(shifted, builtin::gamma_inv(), 4).ok);
}

TEST(Verify, ChecksumGuardsTables) {
  EXPECT_THROW(load_checked(tables::gamma_full_json(), tables::omega_full_checksum), SubstError);
  EXPECT_THROW(builtin_system("delta"), std::invalid_argument);
}

TEST(Graph, GammaComponents) {
  auto& s = gamma_sys();
  auto g = transition_graph(s);
  EXPECT_EQ(g.vertices.size() + 1, 11u);  // plus the zero state
  EXPECT_TRUE(g.reaches_zero);
  auto comps = scc(g);
  ASSERT_EQ(comps.size(), 2u);
  const SState BD = s.parse_state("BD"), D = s.parse_state("D");
  bool bd_alone = false;
  for (auto& c : comps) bd_alone = bd_alone || (c.size() == 1 && c[0] == BD);
  EXPECT_TRUE(bd_alone);
  for (auto v : g.vertices) {
    EXPECT_EQ(reaches(g, v, D), v != BD) << s.state_name(v);
  }
}

TEST(Graph, OneLetterSystem) {
  auto s = one_letter();
  auto comps = scc(transition_graph(s));
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0], std::vector<SState>{1});
}

TEST(Assertions, One) {
  auto rep = check_assertion_i_report(gamma_sys(), 64);
  EXPECT_TRUE(rep.ok) << (rep.failures.empty() ? "" : rep.failures[0]);
  EXPECT_FALSE(check_assertion_i(one_letter(), 64));
}

TEST(Assertions, Two) {
  auto rep = check_assertion_ii_report(gamma_sys(), 20);
  EXPECT_TRUE(rep.ok) << (rep.failures.empty() ? "" : rep.failures[0]);
  EXPECT_GT(rep.stats["replayed_cells"], 1000000);
}

// Chain cells project onto Green cells; its upper endpoint (0, 2^8) passes B with margin 2^6.
TEST(Assertions, TwoSpotCheck) {
  auto p = gamma_segment_pattern(gamma_sys(), 8);
  const SState G = gamma_sys().parse_state("G");
  int checked = 0;
  for (auto& [k, v] : p) {
    if (v != G || k.x % 8 != 0) continue;
    // grid x is the negated Green abscissa
    EXPECT_EQ(gamma_sys().project(v), green_row(builtin::gamma(), k.y).at(-k.x));
    ++checked;
  }
  EXPECT_GT(checked, 3);
  EXPECT_TRUE(check_b(builtin::gamma(), {0, 256, 64, 64}));
}

TEST(Assertions, Three) {
  auto rep = check_assertion_iii_report(omega_sys(), 12, builtin::gamma_inv());
  EXPECT_TRUE(rep.ok) << (rep.failures.empty() ? "" : rep.failures[0]);
  EXPECT_EQ(rep.stats["interior_hits"], 0);
  EXPECT_GT(rep.stats["interior_points"], 0);
  EXPECT_TRUE(check_assertion_iii(one_letter(), 12));
}

TEST(Assertions, TriangleHalfScaleAgrees) {
  auto big = omega_triangle(true).scaled(Rational(256));
  auto half = omega_triangle(true).scaled(Rational(128));
  EXPECT_TRUE(triangle_b_points(builtin::gamma_inv(), big, 64).empty());
  EXPECT_TRUE(triangle_b_points(builtin::gamma_inv(), half, 64).empty());
  const RatPoint centroid{Rational(4, 9), Rational(8, 9)};
  EXPECT_TRUE(omega_triangle(false).strictly_inside(centroid));
  EXPECT_FALSE(omega_triangle(true).strictly_inside(centroid));
  // (1/3, 2/3) lies on the edge from (0, 1) to (2/3, 1/3)
  EXPECT_FALSE(omega_triangle(false).strictly_inside({Rational(1, 3), Rational(2, 3)}));
}
