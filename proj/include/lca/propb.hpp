#ifndef LCA_PROPB_HPP
#define LCA_PROPB_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "lca/automata.hpp"
#include "lca/green.hpp"

namespace lca {

struct BSpec {
  int64_t x = 0;
  int64_t y = 0;
  int64_t l = 0;
  int64_t r = 0;
  friend bool operator==(const BSpec&, const BSpec&) = default;
  friend auto operator<=>(const BSpec&, const BSpec&) = default;
};

inline void check_spec(const BSpec& s) {
  if (s.y < 0 || s.l < 0 || s.r < 0) throw std::invalid_argument("y, l, r must be nonnegative");
}

// B(x, y, l, r) read off a precomputed Green row.
inline bool check_b_row(const GreenRow& row, const BSpec& s) {
  check_spec(s);
  auto it = row.cells.find(s.x);
  if (it == row.cells.end() || !it->second.invertible()) return false;
  auto lo = row.cells.lower_bound(s.x - s.l);
  auto hi = row.cells.upper_bound(s.x + s.r);
  // the only nonzero cell in the window must be x itself
  return std::distance(lo, hi) == 1;
}

inline bool check_b(const LinearCA& a, const BSpec& s) { return check_b_row(green_row(a, s.y), s); }

inline bool check_b(const GeneralCA& a, const BSpec& s, uint64_t budget = uint64_t{1} << 24) {
  check_spec(s);
  if (general_green_oracle(a, s.x, s.y, budget).kind != OracleClass::Bijective) return false;
  for (int64_t z = s.x - s.l; z <= s.x + s.r; ++z) {
    if (z == s.x) continue;
    if (general_green_oracle(a, z, s.y, budget).kind != OracleClass::Constant) return false;
  }
  return true;
}

inline bool check_b(const AutomatonDef& a, const BSpec& s) {
  return std::visit([&](const auto& ca) { return check_b(ca, s); }, a);
}

// Largest margins at (x, y); nullopt on a side means unbounded (no other nonzero cell).
struct Margins {
  std::optional<int64_t> l, r;
};

inline std::optional<Margins> max_margins_row(const GreenRow& row, int64_t x) {
  auto it = row.cells.find(x);
  if (it == row.cells.end() || !it->second.invertible()) return std::nullopt;
  Margins m;
  if (it != row.cells.begin()) m.l = x - std::prev(it)->first - 1;
  if (std::next(it) != row.cells.end()) m.r = std::next(it)->first - x - 1;
  return m;
}

inline std::optional<Margins> max_margins(const LinearCA& a, int64_t x, int64_t y) {
  return max_margins_row(green_row(a, y), x);
}

// Offsets e such that F^y(c)_x depends on c(x+e).
inline std::set<int64_t> neighbourhood(const LinearCA& a, int64_t y) {
  std::set<int64_t> out;
  for (auto& [e, m] : lm_pow(a.symbol, static_cast<uint64_t>(y)).coeffs) out.insert(e);
  return out;
}

inline std::set<int64_t> neighbourhood(const GeneralCA& a, int64_t y) {
  std::set<int64_t> cur{0};
  for (int64_t t = 0; t < y; ++t) {
    std::set<int64_t> next;
    for (auto c : cur)
      for (auto o : a.offsets) next.insert(c + o);
    cur = std::move(next);
  }
  return cur;
}

inline std::set<int64_t> neighbourhood(const AutomatonDef& a, int64_t y) {
  return std::visit([&](const auto& ca) { return neighbourhood(ca, y); }, a);
}

// Composition of two B-specs; nullopt when the window condition fails.
inline std::optional<BSpec> compose_b(const AutomatonDef& a, const BSpec& s1, const BSpec& s2) {
  check_spec(s1);
  check_spec(s2);
  auto nb = neighbourhood(a, s2.y);
  if (nb.empty()) return BSpec{s1.x + s2.x, s1.y + s2.y, s2.l, s2.r};
  const int64_t lo = s2.x - s2.l + *nb.begin(), hi = s2.x + s2.r + *nb.rbegin();
  if (lo < -s1.l || hi > s1.r) return std::nullopt;
  return BSpec{s1.x + s2.x, s1.y + s2.y, s2.l, s2.r};
}

namespace detail {

inline uint64_t alphabet_size(const AutomatonDef& a) {
  if (auto* g = std::get_if<GeneralCA>(&a)) return g->q;
  const auto& l = std::get<LinearCA>(a);
  uint64_t q = 1;
  for (int i = 0; i < l.d(); ++i) q *= l.p();
  return q;
}

inline State decode(const AutomatonDef& a, uint64_t code) {
  if (std::holds_alternative<GeneralCA>(a)) return State{static_cast<uint32_t>(code)};
  const auto& l = std::get<LinearCA>(a);
  State v(l.d());
  for (int i = 0; i < l.d(); ++i) {
    v[i] = static_cast<uint32_t>(code % l.p());
    code /= l.p();
  }
  return v;
}

inline Config background_of(const AutomatonDef& a) {
  if (std::holds_alternative<GeneralCA>(a)) return Config(State{0});
  return zero_config(std::get<LinearCA>(a));
}

}  // namespace detail

struct CoverageReport {
  bool all_realized = true;
  uint64_t words_tried = 0;
  uint64_t realized = 0;
};

// Realizes target words of length max(l, r) + 1 in the image of F^y, fixing one
// cell at a time as in the constructive proof, then re-checks by direct evolution.
inline CoverageReport word_coverage_report(const AutomatonDef& a, const BSpec& s, uint64_t trials, uint64_t seed = 1) {
  if (!check_b(a, s)) throw std::invalid_argument("word_coverage requires B(x, y, l, r) to hold");
  const uint64_t q = detail::alphabet_size(a);
  const int64_t w = std::max(s.l, s.r) + 1;
  const bool right_to_left = s.l <= s.r;
  uint64_t total = 1;
  bool enumerate = true;
  for (int64_t i = 0; i < w && enumerate; ++i) {
    if (total > trials) enumerate = false;
    else total *= q;
  }
  if (total > trials) enumerate = false;
  const uint64_t count = enumerate ? total : trials;
  std::mt19937_64 rng(seed);
  auto nb = neighbourhood(a, s.y);
  const int64_t nlo = nb.empty() ? 0 : *nb.begin(), nhi = nb.empty() ? 0 : *nb.rbegin();
  CoverageReport rep;
  std::vector<uint64_t> target(w);
  for (uint64_t t = 0; t < count; ++t) {
    if (enumerate) {
      uint64_t rest = t;
      for (int64_t i = 0; i < w; ++i) {
        target[i] = rest % q;
        rest /= q;
      }
    } else {
      for (auto& v : target) v = rng() % q;
    }
    // arbitrary starting configuration on the relevant window
    Config c = detail::background_of(a);
    for (int64_t z = nlo - 1; z <= w + nhi + 1; ++z) c.set(z, detail::decode(a, rng() % q));
    auto image_at = [&](int64_t i) { return iterate(a, c, s.y).at(i); };
    for (int64_t step = 0; step < w; ++step) {
      const int64_t i = right_to_left ? w - 1 - step : step;
      const State want = detail::decode(a, target[i]);
      bool done = image_at(i) == want;
      for (uint64_t v = 0; v < q && !done; ++v) {
        c.set(i - s.x, detail::decode(a, v));
        done = image_at(i) == want;
      }
      if (!done) break;
    }
    Config img = iterate(a, c, s.y);
    bool ok = true;
    for (int64_t i = 0; i < w; ++i) ok = ok && img.at(i) == detail::decode(a, target[i]);
    ++rep.words_tried;
    if (ok) ++rep.realized;
    else rep.all_realized = false;
  }
  return rep;
}

inline bool word_coverage(const AutomatonDef& a, const BSpec& s, uint64_t trials, uint64_t seed = 1) {
  return word_coverage_report(a, s, trials, seed).all_realized;
}

// Every spec B(x, y, l, r) with y <= y_max and margins capped at cap, at the maximal margins.
inline std::vector<BSpec> find_specs(const LinearCA& a, int64_t y_max, int64_t cap) {
  std::vector<BSpec> out;
  GreenStream gs(a);
  for (int64_t y = 0; y <= y_max; ++y, gs.advance()) {
    GreenRow row = gs.row();
    for (auto& [x, m] : row.cells) {
      auto mm = max_margins_row(row, x);
      if (!mm) continue;
      out.push_back({x, y, std::min(mm->l.value_or(cap), cap), std::min(mm->r.value_or(cap), cap)});
    }
  }
  return out;
}

}  // namespace lca

#endif
