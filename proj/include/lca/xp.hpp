#ifndef LCA_XP_HPP
#define LCA_XP_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lca/automata.hpp"
#include "lca/green.hpp"
#include "lca/propb.hpp"

namespace lca {

using LatticePoint = std::pair<int64_t, int64_t>;

// Lattice points (a, b) with B(a, b, p^{n-k}, p^{n-k}); normalized coordinates are (a/p^n, b/p^n).
struct XpSample {
  uint32_t p = 2;
  int n = 0;
  int k = 0;
  int64_t y_max = 0;
  std::set<LatticePoint> points;

  int64_t scale() const { return ipow(p, n); }
  int64_t margin() const { return ipow(p, n - k); }
  bool contains(int64_t a, int64_t b) const { return points.count({a, b}) != 0; }

  static int64_t ipow(int64_t base, int e) {
    int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  }
  friend bool operator==(const XpSample&, const XpSample&) = default;
};

inline void check_xp_params(uint32_t p, int n, int k) {
  if (p < 2) throw std::invalid_argument("p must be at least 2");
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
}

// Scans one Green row for isolated bijective cells.
inline void scan_row(const GreenRow& row, int64_t margin, std::set<LatticePoint>& out) {
  for (auto it = row.cells.begin(); it != row.cells.end(); ++it) {
    if (it != row.cells.begin() && it->first - std::prev(it)->first <= margin) continue;
    if (std::next(it) != row.cells.end() && std::next(it)->first - it->first <= margin) continue;
    if (it->second.invertible()) out.insert({it->first, row.y});
  }
}

inline XpSample sample_xp(const LinearCA& f, uint32_t p, int n, int k, int64_t y_max = -1) {
  check_xp_params(p, n, k);
  XpSample s{p, n, k, y_max, {}};
  if (s.y_max < 0) s.y_max = 2 * s.scale();
  GreenStream gs(f);
  for (int64_t b = 0; b <= s.y_max; ++b, gs.advance()) scan_row(gs.row(), s.margin(), s.points);
  return s;
}

// Shift law at lattice level: (a, b) -> (a + z b, b).
inline XpSample apply_lattice_shift_law(const XpSample& s, int64_t z) {
  XpSample out = s;
  out.points.clear();
  for (auto [a, b] : s.points) out.points.insert({a + z * b, b});
  return out;
}

// sigma_z o F
inline LinearCA compose_shift(const LinearCA& f, int64_t z) { return rescale(f, Rescaling{1, 1, z}); }

inline bool shift_law_check(const LinearCA& f, int64_t z, uint32_t p, int n, int k, int64_t y_max = -1) {
  return sample_xp(compose_shift(f, z), p, n, k, y_max) == apply_lattice_shift_law(sample_xp(f, p, n, k, y_max), z);
}

struct PackLawReport {
  int64_t candidates = 0;
  int64_t literal_mismatches = 0;     // A has B(mx,y,ml,mr) xor G has B(x,y,l,r)
  int64_t g_to_a_failures = 0;        // G has B(x,y,l,r) but A lacks B(mx,y,ml,mr)
  int64_t widened_a_to_g_failures = 0;  // A has B(mx,y,ml+m-1,mr+m-1) but G lacks B(x,y,l,r)
  bool literal_ok() const { return literal_mismatches == 0; }
  bool sandwich_ok() const { return g_to_a_failures == 0 && widened_a_to_g_failures == 0; }
};

// Compares F against its m-packing G on every lattice point where either side may hold.
inline PackLawReport lattice_pack_law_report(const LinearCA& f, int64_t m, uint32_t p, int n, int k, int64_t y_max = -1) {
  check_xp_params(p, n, k);
  if (m < 1) throw std::invalid_argument("m must be positive");
  const int64_t M = XpSample::ipow(p, n - k);
  if (y_max < 0) y_max = 2 * XpSample::ipow(p, n);
  LinearCA g = rescale(f, Rescaling{m, 1, 0});
  GreenStream ga(f), gg(g);
  PackLawReport rep;
  for (int64_t y = 0; y <= y_max; ++y, ga.advance(), gg.advance()) {
    GreenRow ra = ga.row(), rg = gg.row();
    std::set<int64_t> xs;
    for (auto& [x, mat] : rg.cells) xs.insert(x);
    for (auto& [x, mat] : ra.cells) xs.insert(floor_div(x, m));
    for (auto X : xs) {
      ++rep.candidates;
      bool gb = check_b_row(rg, {X, y, M, M});
      bool ab = check_b_row(ra, {m * X, y, m * M, m * M});
      bool wide = check_b_row(ra, {m * X, y, m * M + m - 1, m * M + m - 1});
      if (gb != ab) ++rep.literal_mismatches;
      if (gb && !ab) ++rep.g_to_a_failures;
      if (wide && !gb) ++rep.widened_a_to_g_failures;
    }
  }
  return rep;
}

inline bool lattice_pack_law_check(const LinearCA& f, int64_t m, uint32_t p, int n, int k, int64_t y_max = -1) {
  return lattice_pack_law_report(f, m, p, n, k, y_max).literal_ok();
}

inline XpSample intersect(const XpSample& a, const XpSample& b) {
  XpSample out = a;
  out.points.clear();
  std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                        std::inserter(out.points, out.points.end()));
  return out;
}

inline bool product_intersection_check(const LinearCA& f, const LinearCA& g, uint32_t p, int n, int k, int64_t y_max = -1) {
  return sample_xp(product(f, g), p, n, k, y_max) == intersect(sample_xp(f, p, n, k, y_max), sample_xp(g, p, n, k, y_max));
}

// G embeds in A through phi (shape d_a x d_g); then sample(A) is inside sample(G).
inline bool subautomaton_inclusion_check(const LinearCA& a, const LinearCA& g, const MatF& phi, uint32_t p, int n, int k,
                                         int64_t y_max = -1) {
  if (!verify_linear_embedding(g, a, phi)) throw std::invalid_argument("phi is not an embedding of g into a");
  auto sa = sample_xp(a, p, n, k, y_max), sg = sample_xp(g, p, n, k, y_max);
  return std::includes(sg.points.begin(), sg.points.end(), sa.points.begin(), sa.points.end());
}

// B for F^t at (a, b) equals B for F at (a, t b).
inline bool iteration_law_check(const LinearCA& f, int64_t t, uint32_t p, int n, int k, int64_t y_max = -1) {
  check_xp_params(p, n, k);
  if (y_max < 0) y_max = 2 * XpSample::ipow(p, n);
  auto base = sample_xp(f, p, n, k, y_max);
  auto iter = sample_xp(rescale(f, Rescaling{1, t, 0}), p, n, k, y_max / t);
  std::set<LatticePoint> expect;
  for (auto [a, b] : base.points)
    if (b % t == 0) expect.insert({a, b / t});
  return iter.points == expect;
}

// (a, b) at scale n gives (p a, p b) at scale n + 1, for every point of the first sample.
inline std::vector<LatticePoint> doubling_failures(const LinearCA& f, uint32_t p, int n, int k, int64_t y_max) {
  auto lo = sample_xp(f, p, n, k, y_max), hi = sample_xp(f, p, n + 1, k, y_max * p);
  std::vector<LatticePoint> bad;
  for (auto [a, b] : lo.points)
    if (!hi.contains(p * a, p * b)) bad.push_back({a, b});
  return bad;
}

// Grey image, row 0 at the top.
struct Image {
  int64_t width = 0, height = 0;
  int64_t x0 = 0;  // lattice abscissa of column 0 (before mirroring)
  std::vector<uint8_t> pixels;

  std::string pgm() const {
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(pixels.begin(), pixels.end());
    return out;
  }
};

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace detail {

inline Image paint(const std::vector<std::pair<int64_t, std::vector<int64_t>>>& rows, int64_t height, bool mirror) {
  int64_t lo = 0, hi = 0;
  bool any = false;
  for (auto& [y, xs] : rows)
    for (auto x : xs) {
      lo = any ? std::min(lo, x) : x;
      hi = any ? std::max(hi, x) : x;
      any = true;
    }
  Image img;
  img.x0 = lo;
  img.width = any ? hi - lo + 1 : 1;
  img.height = height;
  img.pixels.assign(static_cast<size_t>(img.width * img.height), 255);
  for (auto& [y, xs] : rows)
    for (auto x : xs) {
      int64_t col = mirror ? hi - x : x - lo;
      int64_t row = height - 1 - y;
      img.pixels[static_cast<size_t>(row * img.width + col)] = 0;
    }
  return img;
}

}  // namespace detail

// Nonzero Green cells from a single spike; time runs bottom to top.
inline Image spacetime_image(const LinearCA& f, int64_t rows, bool mirror = false) {
  if (rows < 1) throw std::invalid_argument("rows must be at least 1");
  std::vector<std::pair<int64_t, std::vector<int64_t>>> data;
  GreenStream gs(f);
  for (int64_t y = 0; y < rows; ++y, gs.advance()) {
    std::vector<int64_t> xs;
    for (auto& [e, m] : gs.power().coeffs) xs.push_back(-e);
    data.push_back({y, std::move(xs)});
  }
  return detail::paint(data, rows, mirror);
}

inline Image sample_image(const XpSample& s, bool mirror = false) {
  std::map<int64_t, std::vector<int64_t>> by_row;
  for (auto [a, b] : s.points) by_row[b].push_back(a);
  std::vector<std::pair<int64_t, std::vector<int64_t>>> data(by_row.begin(), by_row.end());
  return detail::paint(data, s.y_max + 1, mirror);
}

inline void render_spacetime(const LinearCA& f, int64_t rows, const std::string& path, bool mirror = false) {
  write_file(path, spacetime_image(f, rows, mirror).pgm());
}

inline void render_sample(const XpSample& s, const std::string& path, bool mirror = false) {
  write_file(path, sample_image(s, mirror).pgm());
}

// One line per point: "a/p^n,b/p^n".
inline std::string sample_csv(const XpSample& s) {
  const std::string den = std::to_string(s.scale());
  std::string out = "x,y\n";
  for (auto [a, b] : s.points) out += std::to_string(a) + "/" + den + "," + std::to_string(b) + "/" + den + "\n";
  return out;
}

// 64-bit FNV-1a, used to freeze golden outputs.
inline uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lca

#endif
