#ifndef LCA_GREEN_HPP
#define LCA_GREEN_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "lca/algebra.hpp"
#include "lca/automata.hpp"

namespace lca {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x -> F^y_x. Absent cells are the zero matrix.
struct GreenRow {
  int64_t y = 0;
  uint32_t p = 2;
  int d = 1;
  std::map<int64_t, MatF> cells;

  MatF at(int64_t x) const {
    auto it = cells.find(x);
    return it == cells.end() ? MatF(p, d) : it->second;
  }
  friend bool operator==(const GreenRow&, const GreenRow&) = default;
};

enum class CellClass { Constant, Bijective, Other };

inline const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::Constant: return "constant";
    case CellClass::Bijective: return "bijective";
    default: return "other";
  }
}

inline CellClass classify(const MatF& m) {
  if (m.is_zero()) return CellClass::Constant;
  if (m.invertible()) return CellClass::Bijective;
  return CellClass::Other;
}

// The dependence of F^y(c)_x on c(0) sits at exponent -x of the symbol power.
inline GreenRow green_from_power(const LaurentMat& power, int64_t y) {
  GreenRow row{y, power.p, power.d, {}};
  for (auto& [e, m] : power.coeffs) row.cells.emplace(-e, m);
  return row;
}

inline GreenRow green_row(const LinearCA& f, int64_t y) {
  if (y < 0) throw std::invalid_argument("y must be nonnegative");
  return green_from_power(lm_pow(f.symbol, static_cast<uint64_t>(y)), y);
}

// Rows y = 0, 1, 2, ... by repeated multiplication with the symbol.
class GreenStream {
public:
  explicit GreenStream(const LinearCA& f) : f_(f), power_(LaurentMat::identity(f.p(), f.d())) {}
  int64_t y() const { return y_; }
  const LaurentMat& power() const { return power_; }
  GreenRow row() const { return green_from_power(power_, y_); }
  void advance() {
    power_ = lm_mul(power_, f_.symbol);
    ++y_;
  }

private:
  LinearCA f_;
  LaurentMat power_;
  int64_t y_ = 0;
};

namespace detail {

// Polynomials in X of degree < D over Z_p[u,u^-1], reduced modulo a monic minpoly.
using QuotientElem = std::vector<ScalarLaurent>;

inline QuotientElem quotient_mul(const QuotientElem& a, const QuotientElem& b, const MinPoly& m) {
  const int D = m.degree();
  std::vector<ScalarLaurent> prod(2 * D - 1, ScalarLaurent(m.p));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (!a[i].is_zero() && !b[j].is_zero()) prod[i + j] += a[i] * b[j];
  // X^D = -sum c_j X^j
  for (int k = 2 * D - 2; k >= D; --k) {
    if (prod[k].is_zero()) continue;
    ScalarLaurent lead = prod[k];
    prod[k] = ScalarLaurent(m.p);
    for (int j = 0; j < D; ++j) prod[k - D + j] += -(lead * m.c[j]);
  }
  prod.resize(D);
  return prod;
}

}  // namespace detail

inline GreenRow green_via_minpoly(const LinearCA& f, const MinPoly& m, int64_t y) {
  if (y < 0) throw std::invalid_argument("y must be nonnegative");
  if (!annihilates(m, f.symbol)) throw std::invalid_argument("polynomial does not annihilate the symbol");
  const int D = m.degree();
  detail::QuotientElem result(D, ScalarLaurent(m.p)), base(D, ScalarLaurent(m.p));
  result[0] = ScalarLaurent::constant(m.p, 1);
  if (D == 1) base[0] = -m.c[0];
  else base[1] = ScalarLaurent::constant(m.p, 1);
  for (uint64_t e = static_cast<uint64_t>(y); e; e >>= 1) {
    if (e & 1) result = detail::quotient_mul(result, base, m);
    if (e > 1) base = detail::quotient_mul(base, base, m);
  }
  LaurentMat acc = LaurentMat::zero(f.p(), f.d()), power = LaurentMat::identity(f.p(), f.d());
  for (int j = 0; j < D; ++j) {
    if (!result[j].is_zero()) acc = lm_add(acc, lm_scale(result[j], power));
    if (j + 1 < D) power = lm_mul(power, f.symbol);
  }
  return green_from_power(acc, y);
}

enum class OracleClass { Constant, Bijective, Other, Mixed };

inline const char* to_string(OracleClass c) {
  switch (c) {
    case OracleClass::Constant: return "constant";
    case OracleClass::Bijective: return "bijective";
    case OracleClass::Other: return "other";
    default: return "mixed";
  }
}

struct OracleResult {
  OracleClass kind = OracleClass::Constant;
  uint64_t contexts = 0;
  uint64_t constant = 0, bijective = 0, other = 0;
};

// Enumerates every context of the window that F^y(.)_x can see, outside cell 0.
inline OracleResult general_green_oracle(const GeneralCA& a, int64_t x, int64_t y,
                                         uint64_t budget = uint64_t{1} << 24) {
  if (y < 0) throw std::invalid_argument("y must be nonnegative");
  OracleResult res;
  const int64_t lo = x + y * a.min_offset(), hi = x + y * a.max_offset();
  if (y > 0 && a.offsets.empty()) {
    res.contexts = 1;
    res.constant = 1;
    return res;
  }
  if (0 < lo || 0 > hi) {
    res.contexts = 1;
    res.constant = 1;
    return res;
  }
  const int64_t width = hi - lo + 1;
  uint64_t contexts = 1;
  for (int64_t i = 0; i < width - 1; ++i) {
    contexts *= a.q;
    if (contexts * a.q > budget) throw BudgetExceeded("dependency window too large for enumeration");
  }
  res.contexts = contexts;
  std::vector<uint32_t> cur(width), next(width), word(a.offsets.size());
  std::vector<uint32_t> images(a.q);
  const int64_t zero_at = -lo;
  for (uint64_t ctx = 0; ctx < contexts; ++ctx) {
    for (uint32_t q0 = 0; q0 < a.q; ++q0) {
      uint64_t rest = ctx;
      for (int64_t i = 0; i < width; ++i) {
        if (i == zero_at) {
          cur[i] = q0;
        } else {
          cur[i] = static_cast<uint32_t>(rest % a.q);
          rest /= a.q;
        }
      }
      // cur[i] is the cell at lo' + i; each step shrinks the known range.
      int64_t lo_cur = lo, hi_cur = hi;
      for (int64_t t = 0; t < y; ++t) {
        int64_t lo_n = lo_cur - a.min_offset(), hi_n = hi_cur - a.max_offset();
        for (int64_t z = lo_n; z <= hi_n; ++z) {
          for (size_t k = 0; k < a.offsets.size(); ++k) word[k] = cur[z + a.offsets[k] - lo_cur];
          next[z - lo_n] = a.apply(word);
        }
        std::swap(cur, next);
        lo_cur = lo_n;
        hi_cur = hi_n;
      }
      images[q0] = cur[x - lo_cur];
    }
    std::set<uint32_t> distinct(images.begin(), images.end());
    if (distinct.size() == 1) ++res.constant;
    else if (distinct.size() == a.q) ++res.bijective;
    else ++res.other;
  }
  if (res.constant == contexts) res.kind = OracleClass::Constant;
  else if (res.bijective == contexts) res.kind = OracleClass::Bijective;
  else if (res.other == contexts) res.kind = OracleClass::Other;
  else res.kind = OracleClass::Mixed;
  return res;
}

// One term F^{a 2^n + y}_{x + s 2^{n+1}} of a dyadic recurrence, s in {0, 1}.
struct RecTerm {
  int64_t time_mult;
  int64_t shifted;
};

struct Recurrence {
  int64_t lhs_mult = 3;
  std::vector<RecTerm> rhs;
};

inline Recurrence gamma_recurrence() { return {3, {{2, 0}, {1, 0}, {1, 1}, {0, 0}}}; }
inline Recurrence gamma_inv_recurrence() { return {3, {{2, 0}, {2, 1}, {1, 0}, {0, 0}}}; }

// Counts cells where the recurrence fails at level n, for all y < 3 * 2^n.
inline int64_t recurrence_mismatches(const LinearCA& f, const Recurrence& rec, int n, int sign) {
  const int64_t N = int64_t{1} << n;
  const int64_t limit = rec.lhs_mult * N + 3 * N;
  std::vector<GreenRow> rows;
  GreenStream gs(f);
  for (int64_t y = 0; y < limit; ++y, gs.advance()) rows.push_back(gs.row());
  int64_t bad = 0;
  for (int64_t y = 0; y < 3 * N; ++y) {
    const GreenRow& lhs = rows[rec.lhs_mult * N + y];
    std::set<int64_t> xs;
    for (auto& [x, m] : lhs.cells) xs.insert(x);
    for (auto& t : rec.rhs)
      for (auto& [x, m] : rows[t.time_mult * N + y].cells) xs.insert(t.shifted ? x - sign * 2 * N : x);
    for (auto x : xs) {
      MatF acc(f.p(), f.d());
      for (auto& t : rec.rhs) acc += rows[t.time_mult * N + y].at(t.shifted ? x + sign * 2 * N : x);
      if (!(acc == lhs.at(x))) ++bad;
    }
  }
  return bad;
}

// Picks the index-shift sign for which the recurrence holds at n = 0; 0 if neither or both.
inline int audit_recurrence_sign(const LinearCA& f, const Recurrence& rec) {
  bool plus = recurrence_mismatches(f, rec, 0, +1) == 0;
  bool minus = recurrence_mismatches(f, rec, 0, -1) == 0;
  if (plus == minus) return 0;
  return plus ? +1 : -1;
}

}  // namespace lca

#endif
