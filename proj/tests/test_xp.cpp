#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lca/automata.hpp"
#include "lca/io.hpp"
#include "lca/xp.hpp"

using namespace lca;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<LinearCA> differential_set() {
  return {builtin::xor_ca(), builtin::theta(), builtin::gamma(), builtin::gamma_inv()};
}

}  // namespace

// The xor sample is the Lucas set with isolation 2^(n-k).
TEST(Sample, SierpinskiMatchesLucas) {
  const int n = 8, k = 1;
  const int64_t margin = 128, y_max = 512;
  std::set<LatticePoint> want;
  for (int64_t b = 0; b <= y_max; ++b) {
    std::vector<int64_t> row;
    for (int64_t a = 0; a <= b; ++a)
      if ((a & b) == a) row.push_back(a);
    for (size_t i = 0; i < row.size(); ++i) {
      bool left = i == 0 || row[i] - row[i - 1] > margin;
      bool right = i + 1 == row.size() || row[i + 1] - row[i] > margin;
      if (left && right) want.insert({row[i], b});
    }
  }
  auto s = sample_xp(builtin::xor_ca(), 2, n, k);
  EXPECT_EQ(s.y_max, y_max);
  EXPECT_EQ(s.points, want);
  EXPECT_TRUE(s.contains(0, 256));
  EXPECT_TRUE(s.contains(256, 256));
}

TEST(Sample, Parameters) {
  EXPECT_THROW(sample_xp(builtin::xor_ca(), 2, 4, 5), std::invalid_argument);
  EXPECT_THROW(sample_xp(builtin::xor_ca(), 2, 4, 0), std::invalid_argument);
  EXPECT_THROW(sample_xp(builtin::xor_ca(), 1, 4, 2), std::invalid_argument);
}

TEST(Sample, IdentityIsTheVerticalAxis) {
  auto s = sample_xp(builtin::identity(), 2, 4, 2);
  EXPECT_EQ(s.points.size(), static_cast<size_t>(s.y_max + 1));
  for (auto [a, b] : s.points) EXPECT_EQ(a, 0);
}

// Nilpotent symbols vanish after one step; only the origin remains.
TEST(Sample, NilpotentIsTheOrigin) {
  auto s = sample_xp(builtin::nilpotent(), 2, 5, 2);
  EXPECT_EQ(s.points, (std::set<LatticePoint>{{0, 0}}));
}

TEST(Laws, ShiftLaw) {
  for (auto& f : differential_set())
    for (int64_t z : {-2, -1, 1, 2}) EXPECT_TRUE(shift_law_check(f, z, 2, 6, 2)) << z;
}

// Literal biconditional at k = 2 plus the sandwich in general.
TEST(Laws, PackLaw) {
  struct Case {
    LinearCA f;
    int64_t m;
  };
  for (auto& c : {Case{builtin::xor_ca(), 3}, Case{builtin::theta(), 2}, Case{builtin::gamma(), 2}}) {
    auto rep = lattice_pack_law_report(c.f, c.m, 2, 6, 2);
    EXPECT_GT(rep.candidates, 0);
    EXPECT_EQ(rep.literal_mismatches, 0);
    EXPECT_TRUE(rep.sandwich_ok());
  }
  for (int k : {3, 4, 5}) {
    auto rep = lattice_pack_law_report(builtin::xor_ca(), 3, 2, 6, k);
    EXPECT_EQ(rep.g_to_a_failures, 0) << k;
    EXPECT_EQ(rep.widened_a_to_g_failures, 0) << k;
  }
}

TEST(Laws, ProductIsIntersection) {
  EXPECT_TRUE(product_intersection_check(builtin::xor_ca(), builtin::theta(), 2, 6, 2));
  EXPECT_TRUE(product_intersection_check(builtin::gamma(), builtin::gamma_inv(), 2, 6, 2));
  EXPECT_TRUE(product_intersection_check(builtin::xor_ca(), builtin::shift(1), 2, 6, 2));
  EXPECT_TRUE(product_intersection_check(builtin::theta(), builtin::theta_inv(), 2, 6, 3));
}

TEST(Laws, SubAutomatonInclusion) {
  EXPECT_TRUE(subautomaton_inclusion_check(builtin::theta(), builtin::theta_inv(),
                                           MatF::from_rows(2, {{0, 1}, {1, 0}}), 2, 6, 2));
  EXPECT_TRUE(subautomaton_inclusion_check(product(builtin::xor_ca(), builtin::xor_ca()), builtin::xor_ca(),
                                           MatF::from_rows(2, {{1}, {1}}), 2, 6, 2));
  MatF phi(2, 5, 3);
  phi.put_block(0, 0, MatF::identity(2, 3));
  EXPECT_TRUE(subautomaton_inclusion_check(product(builtin::gamma(), builtin::theta()), builtin::gamma(), phi, 2, 6, 2));
  EXPECT_THROW(subautomaton_inclusion_check(builtin::theta(), builtin::theta_inv(), MatF::identity(2, 2), 2, 6, 2),
               std::invalid_argument);
}

TEST(Laws, Iteration) {
  for (int64_t t : {2, 3}) {
    EXPECT_TRUE(iteration_law_check(builtin::xor_ca(), t, 2, 6, 2)) << t;
    EXPECT_TRUE(iteration_law_check(builtin::gamma(), t, 2, 6, 2)) << t;
  }
}

// In characteristic 2 a scalar symbol satisfies S(u)^2 = S(u^2), so rows double exactly.
TEST(Laws, DoublingForScalarSymbols) {
  EXPECT_TRUE(doubling_failures(builtin::xor_ca(), 2, 6, 2, 128).empty());
  EXPECT_TRUE(doubling_failures(builtin::shift(1), 2, 6, 2, 128).empty());
}

TEST(Image, IdentityIsOneColumn) {
  auto img = spacetime_image(builtin::identity(), 16);
  EXPECT_EQ(img.width, 1);
  EXPECT_EQ(img.height, 16);
  for (auto px : img.pixels) EXPECT_EQ(px, 0);
  EXPECT_EQ(img.pgm().substr(0, 12), "P5\n1 16\n255\n");
}

TEST(Image, PixelsAreGreenCells) {
  auto f = builtin::theta();
  auto img = spacetime_image(f, 64);
  for (int64_t y = 0; y < 64; ++y) {
    auto row = green_row(f, y);
    for (int64_t col = 0; col < img.width; ++col) {
      bool black = img.pixels[static_cast<size_t>((63 - y) * img.width + col)] == 0;
      EXPECT_EQ(black, row.cells.count(img.x0 + col) == 1) << y << "," << col;
    }
  }
}

TEST(Image, MirrorFlipsColumns) {
  auto a = spacetime_image(builtin::xor_ca(), 8), b = spacetime_image(builtin::xor_ca(), 8, true);
  for (int64_t r = 0; r < 8; ++r)
    for (int64_t c = 0; c < a.width; ++c)
      EXPECT_EQ(a.pixels[r * a.width + c], b.pixels[r * a.width + (a.width - 1 - c)]);
}

// Frozen after the pixel test above: regressions only.
TEST(Image, ThetaGolden) {
  EXPECT_EQ(spacetime_image(builtin::theta(), 256).pgm(), slurp(std::string(LCA_GOLDEN_DIR) + "/theta_256.pgm"));
  EXPECT_EQ(fnv1a(spacetime_image(builtin::theta(), 1024).pgm()), 0xb5ab53d62625cd5eull);
}

TEST(Export, CsvAndJson) {
  auto s = sample_xp(builtin::xor_ca(), 2, 3, 1);
  auto csv = sample_csv(s);
  EXPECT_EQ(csv.substr(0, 4), "x,y\n");
  EXPECT_NE(csv.find("0/8,8/8\n"), std::string::npos);
  EXPECT_EQ(sample_from_json(sample_json(s)), s);
  auto img = sample_image(s);
  EXPECT_EQ(img.height, s.y_max + 1);
}
