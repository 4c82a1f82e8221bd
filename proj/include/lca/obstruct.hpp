#ifndef LCA_OBSTRUCT_HPP
#define LCA_OBSTRUCT_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "lca/geom.hpp"
#include "lca/subst.hpp"
#include "lca/xp.hpp"

namespace lca {

// (x, y) -> (alpha x + beta y, gamma y)
struct PiMap {
  Rational alpha{1}, beta{0}, gamma{1};

  PiMap() = default;
  PiMap(Rational a, Rational b, Rational c) : alpha(a), beta(b), gamma(c) {
    if (alpha <= Rational(0) || gamma <= Rational(0)) throw std::invalid_argument("alpha and gamma must be positive");
  }
  RatPoint operator()(const RatPoint& q) const { return {alpha * q.x + beta * q.y, gamma * q.y}; }
  friend bool operator==(const PiMap&, const PiMap&) = default;
};

inline std::string to_string(const PiMap& m) {
  return "(" + to_string(m.alpha) + ", " + to_string(m.beta) + ", " + to_string(m.gamma) + ")";
}

inline std::vector<RatPoint> normalized_points(const XpSample& s) {
  std::vector<RatPoint> out;
  out.reserve(s.points.size());
  const int64_t S = s.scale();
  for (auto [a, b] : s.points) out.push_back({Rational(a, S), Rational(b, S)});
  return out;
}

inline std::vector<RatPoint> pi_apply(const PiMap& m, const XpSample& s) {
  auto pts = normalized_points(s);
  for (auto& q : pts) q = m(q);
  return pts;
}

namespace detail {

struct PointHash {
  size_t operator()(const LatticePoint& q) const {
    return std::hash<int64_t>()(q.first * 1000003 + q.second);
  }
};

inline int64_t floor_rat(const Rational& r) { return floor_div(r.numerator(), r.denominator()); }
inline int64_t ceil_rat(const Rational& r) { return -floor_div(-r.numerator(), r.denominator()); }

// Target lattice with O(1) lookups.
struct TargetIndex {
  const XpSample* s;
  std::unordered_set<LatticePoint, PointHash> pts;

  explicit TargetIndex(const XpSample& target) : s(&target), pts(target.points.begin(), target.points.end()) {}

  // Some target point within Chebyshev distance tol (lattice cells) of q, folding q down by p
  // while it lies above the sampled window.
  bool near(RatPoint q, int64_t tol) const {
    const int64_t S = s->scale();
    const Rational ymax(s->y_max, S), p(static_cast<int64_t>(s->p));
    while (q.y > ymax) q = {q.x / p, q.y / p};
    const Rational qx = q.x * Rational(S), qy = q.y * Rational(S);
    const Rational t(tol);
    for (int64_t b = std::max<int64_t>(0, ceil_rat(qy - t)); b <= std::min(s->y_max, floor_rat(qy + t)); ++b)
      for (int64_t a = ceil_rat(qx - t); a <= floor_rat(qx + t); ++a)
        if (pts.count({a, b})) return true;
    return false;
  }
};

}  // namespace detail

inline bool contained_within(const std::vector<RatPoint>& pts, const XpSample& target, int64_t tol = 2) {
  if (tol < 0) throw std::invalid_argument("tol must be nonnegative");
  detail::TargetIndex idx(target);
  return std::all_of(pts.begin(), pts.end(), [&](const RatPoint& q) { return idx.near(q, tol); });
}

// Positive rationals with numerator and denominator at most `bound`, increasing.
inline std::vector<Rational> small_rationals(int64_t bound) {
  if (bound < 1) throw std::invalid_argument("denom_bound must be at least 1");
  std::set<Rational> out;
  for (int64_t a = 1; a <= bound; ++a)
    for (int64_t b = 1; b <= bound; ++b) out.insert(Rational(a, b));
  return {out.begin(), out.end()};
}

struct SearchOptions {
  int64_t denom_bound = 8;
  int64_t tol = 2;
  uint64_t seed = 20240611;
  size_t max_results = SIZE_MAX;
};

// Every map over the small-rational grid that sends sF into sG up to tol.
inline std::vector<PiMap> search_pi(const XpSample& sF, const XpSample& sG, const SearchOptions& opt = {}) {
  const auto pos = small_rationals(opt.denom_bound);
  std::vector<Rational> betas{Rational(0)};
  for (auto& r : pos) {
    betas.push_back(r);
    betas.push_back(-r);
  }
  std::sort(betas.begin(), betas.end());
  auto pts = normalized_points(sF);
  // a fixed shuffle makes failing maps exit early without depending on scan order
  std::mt19937_64 rng(opt.seed);
  std::shuffle(pts.begin(), pts.end(), rng);
  detail::TargetIndex idx(sG);
  std::vector<PiMap> out;
  for (auto& a : pos)
    for (auto& b : betas)
      for (auto& c : pos) {
        PiMap m(a, b, c);
        bool ok = true;
        for (auto& q : pts)
          if (!idx.near(m(q), opt.tol)) {
            ok = false;
            break;
          }
        if (ok) {
          out.push_back(m);
          if (out.size() >= opt.max_results) return out;
        }
      }
  return out;
}

// ---------------------------------------------------------------------------
// directions of half-lines through the origin

struct Direction {
  int64_t dx = 0, dy = 1;
  int64_t support = 0;  // distinct rows with a supporting point
  int64_t max_gap = 0;
  friend bool operator==(const Direction& a, const Direction& b) { return a.dx == b.dx && a.dy == b.dy; }
  Rational slope() const { return Rational(dx, dy); }
};

struct DirectionOptions {
  int64_t max_dy = 4;
  int64_t tube = 4;           // Chebyshev radius around the ray, in lattice cells
  int64_t start_divisor = 8;  // rows below y_max / start_divisor are ignored
  int64_t gap_divisor = 16;   // largest allowed gap between supporting rows is y_max / gap_divisor
  int64_t min_support = -1;   // defaults to n
};

// Some t >= 0 with |a - t dx| <= r and |b - t dy| <= r.
inline bool near_ray(int64_t a, int64_t b, int64_t dx, int64_t dy, int64_t r) {
  Rational lo(0), hi(-1);
  bool bounded = false;
  auto clip = [&](int64_t c, int64_t d) {
    if (d == 0) return std::abs(c) <= r;
    Rational u(c - r, d), v(c + r, d);
    if (u > v) std::swap(u, v);
    if (!bounded) {
      lo = std::max(Rational(0), u);
      hi = v;
      bounded = true;
    } else {
      lo = std::max(lo, u);
      hi = std::min(hi, v);
    }
    return true;
  };
  if (!clip(a, dx) || !clip(b, dy)) return false;
  return !bounded || lo <= hi;
}

// Candidate primitive directions (dx, dy), 1 <= dy <= max_dy, |dx| <= max_dy * dy, kept when the
// supporting rows reach from y_max / 8 to y_max without large gaps.
inline std::vector<Direction> extract_directions(const XpSample& s, const DirectionOptions& opt = {}) {
  const int64_t start = s.y_max / opt.start_divisor, max_gap = s.y_max / opt.gap_divisor;
  const int64_t min_support = opt.min_support < 0 ? s.n : opt.min_support;
  std::vector<LatticePoint> far;
  for (auto& q : s.points)
    if (q.second >= start) far.push_back(q);
  std::vector<Direction> out;
  for (int64_t dy = 1; dy <= opt.max_dy; ++dy)
    for (int64_t dx = -opt.max_dy * dy; dx <= opt.max_dy * dy; ++dx) {
      if (std::gcd(dx, dy) != 1) continue;
      std::set<int64_t> rows;
      for (auto [a, b] : far)
        if (near_ray(a, b, dx, dy, opt.tube)) rows.insert(b);
      if (rows.empty()) continue;
      int64_t gap = *rows.begin() - start, prev = *rows.begin();
      for (auto b : rows) {
        gap = std::max(gap, b - prev);
        prev = b;
      }
      gap = std::max(gap, s.y_max - prev);
      if (static_cast<int64_t>(rows.size()) >= min_support && gap <= max_gap)
        out.push_back({dx, dy, static_cast<int64_t>(rows.size()), gap});
    }
  return out;
}

// ---------------------------------------------------------------------------
// final argument

struct InductionEvidence {
  bool assertion_i = false, assertion_ii = false, assertion_iii = false;
  bool ok() const { return assertion_i && assertion_ii && assertion_iii; }
};

// Assertions (i) and (ii) on the Gamma system, (iii) with its direct triangle check on Omega.
inline InductionEvidence gamma_pair_evidence(int n_i = 64, int n_ii = 20, int n_iii = 12) {
  InductionEvidence e;
  auto g = builtin_system("gamma");
  auto o = builtin_system("omega");
  e.assertion_i = check_assertion_i(g, n_i);
  e.assertion_ii = check_assertion_ii(g, n_ii);
  e.assertion_iii = check_assertion_iii(o, n_iii);
  return e;
}

struct ForcedMap {
  Rational alpha_over_gamma, beta_over_gamma;
  std::optional<Rational> gamma;  // first gamma passing containment, if any
};

struct ReplayOptions {
  std::string f_name = "f", g_name = "g";
  bool mirror = false;  // the pair's figures are drawn mirrored
  int64_t denom_bound = 8;
  int64_t tol = 2;
  DirectionOptions directions;
  const InductionEvidence* evidence = nullptr;
};

struct ReplayVerdict {
  std::vector<Direction> f_dirs, g_dirs;
  std::vector<ForcedMap> forced;
  bool directions_ok = false;
  bool containment = false;
  bool obstruction = false;
  bool induction_backed = false;
  std::string error;
  nlohmann::json json;
};

inline nlohmann::json direction_json(const std::vector<Direction>& ds, bool mirror) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& d : ds) arr.push_back({mirror ? -d.dx : d.dx, d.dy});
  return arr;
}

// Lines through the origin of X(F) must land on lines of X(G). With two lines on each side this
// pins alpha / gamma and beta / gamma; the forced maps are then tested for containment.
inline ReplayVerdict replay_final_argument(const XpSample& sF, const XpSample& sG, const ReplayOptions& opt = {}) {
  if (sF.p != sG.p || sF.n != sG.n || sF.k != sG.k) throw std::invalid_argument("samples must share p, n, k");
  ReplayVerdict v;
  v.f_dirs = extract_directions(sF, opt.directions);
  v.g_dirs = extract_directions(sG, opt.directions);
  nlohmann::json j;
  j["pair"] = {opt.f_name, opt.g_name};
  j["mirror"] = opt.mirror;
  j["directions"] = {{"f", direction_json(v.f_dirs, false)}, {"g", direction_json(v.g_dirs, false)}};
  if (opt.mirror)
    j["figure_directions"] = {{"f", direction_json(v.f_dirs, true)}, {"g", direction_json(v.g_dirs, true)}};
  if (v.f_dirs.size() != 2 || v.g_dirs.size() < 2) {
    v.error = "need two directions in f and at least two in g; found " + std::to_string(v.f_dirs.size()) + " and " +
              std::to_string(v.g_dirs.size());
    j["error"] = v.error;
    j["obstruction"] = false;
    j["induction_backed"] = false;
    j["mode"] = "undetermined";
    v.json = j;
    return v;
  }
  v.directions_ok = true;
  // slope s = dx / dy maps to alpha/gamma s + beta/gamma
  const Rational s1 = v.f_dirs[0].slope(), s2 = v.f_dirs[1].slope();
  for (auto& t1d : v.g_dirs)
    for (auto& t2d : v.g_dirs) {
      if (t1d == t2d) continue;
      const Rational a = (t1d.slope() - t2d.slope()) / (s1 - s2);
      if (a <= Rational(0)) continue;
      v.forced.push_back({a, t1d.slope() - a * s1, std::nullopt});
    }
  const auto gammas = small_rationals(opt.denom_bound);
  for (auto& fm : v.forced)
    for (auto& c : gammas) {
      PiMap m(fm.alpha_over_gamma * c, fm.beta_over_gamma * c, c);
      if (contained_within(pi_apply(m, sF), sG, opt.tol)) {
        fm.gamma = c;
        v.containment = true;
        break;
      }
    }
  v.obstruction = !v.containment;
  v.induction_backed = v.obstruction && opt.evidence && opt.evidence->ok();
  nlohmann::json forced = nlohmann::json::array();
  for (auto& fm : v.forced) {
    nlohmann::json f;
    f["beta"] = fm.beta_over_gamma == Rational(0) ? std::string("0") : to_string(fm.beta_over_gamma) + "*gamma";
    f["beta_over_gamma"] = to_string(fm.beta_over_gamma);
    f["alpha_over_gamma"] = to_string(fm.alpha_over_gamma);
    f["containment"] = fm.gamma.has_value();
    if (fm.gamma) f["gamma"] = to_string(*fm.gamma);
    forced.push_back(f);
  }
  if (v.forced.size() == 1) j["forced"] = forced[0];
  j["candidates"] = forced;
  j["containment"] = v.containment;
  j["obstruction"] = v.obstruction;
  if (opt.evidence)
    j["evidence"] = {{"assertion_i", opt.evidence->assertion_i},
                     {"assertion_ii", opt.evidence->assertion_ii},
                     {"assertion_iii", opt.evidence->assertion_iii}};
  j["induction_backed"] = v.induction_backed;
  j["mode"] = v.obstruction ? (v.induction_backed ? "induction-backed" : "heuristic") : "none";
  v.json = j;
  return v;
}

// Sampling parameters used by the replay: margin one cell, two scales of height.
inline XpSample replay_sample(const LinearCA& f, int n) { return sample_xp(f, 2, n, n, 2 * (int64_t{1} << n)); }

}  // namespace lca

#endif
