#ifndef LCA_ALGEBRA_HPP
#define LCA_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lca {

struct AlgebraError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInvertible : std::domain_error {
  using std::domain_error::domain_error;
};

inline bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// Residue arithmetic in Z_p.
inline uint32_t fp_add(uint32_t a, uint32_t b, uint32_t p) { return static_cast<uint32_t>((uint64_t{a} + b) % p); }
inline uint32_t fp_sub(uint32_t a, uint32_t b, uint32_t p) { return static_cast<uint32_t>((uint64_t{a} + p - b) % p); }
inline uint32_t fp_mul(uint32_t a, uint32_t b, uint32_t p) { return static_cast<uint32_t>(uint64_t{a} * b % p); }
inline uint32_t fp_neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }

inline uint32_t fp_pow(uint32_t a, uint64_t e, uint32_t p) {
  uint64_t r = 1 % p, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<uint32_t>(r);
}

inline uint32_t fp_inv(uint32_t a, uint32_t p) {
  if (a % p == 0) throw NotInvertible("zero has no inverse in Z_p");
  return fp_pow(a, p - 2, p);
}

// Scalar of Z_p carrying its modulus.
struct Fp {
  uint32_t value = 0;
  uint32_t p = 2;

  Fp() = default;
  Fp(int64_t v, uint32_t mod) : p(mod) {
    if (!is_prime(mod)) throw AlgebraError("modulus must be prime");
    int64_t r = v % static_cast<int64_t>(mod);
    value = static_cast<uint32_t>(r < 0 ? r + mod : r);
  }
  friend bool operator==(const Fp&, const Fp&) = default;
};

// Rectangular matrix over Z_p. For p = 2 rows are packed into one word each.
class MatF {
public:
  MatF() = default;
  MatF(uint32_t p, int rows, int cols) : p_(p), r_(rows), c_(cols) {
    if (rows < 0 || cols < 0) throw AlgebraError("negative matrix shape");
    if (p == 2) {
      if (cols > 64) throw AlgebraError("GF(2) rows are limited to 64 columns");
      bits_.assign(rows, 0);
    } else {
      vals_.assign(static_cast<size_t>(rows) * cols, 0);
    }
  }
  MatF(uint32_t p, int d) : MatF(p, d, d) {}

  static MatF identity(uint32_t p, int d) {
    MatF m(p, d);
    for (int i = 0; i < d; ++i) m.set(i, i, 1);
    return m;
  }

  static MatF from_rows(uint32_t p, const std::vector<std::vector<int64_t>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    MatF m(p, r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c) throw AlgebraError("ragged matrix rows");
      for (int j = 0; j < c; ++j) {
        int64_t v = rows[i][j] % static_cast<int64_t>(p);
        m.set(i, j, static_cast<uint32_t>(v < 0 ? v + p : v));
      }
    }
    return m;
  }

  uint32_t p() const { return p_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  bool square() const { return r_ == c_; }

  uint32_t get(int i, int j) const {
    if (p_ == 2) return static_cast<uint32_t>((bits_[i] >> j) & 1u);
    return vals_[static_cast<size_t>(i) * c_ + j];
  }
  void set(int i, int j, uint32_t v) {
    v %= p_;
    if (p_ == 2) {
      if (v) bits_[i] |= (uint64_t{1} << j);
      else bits_[i] &= ~(uint64_t{1} << j);
    } else {
      vals_[static_cast<size_t>(i) * c_ + j] = v;
    }
  }
  uint64_t row_bits(int i) const { return bits_[i]; }

  bool is_zero() const {
    if (p_ == 2) {
      for (auto w : bits_) if (w) return false;
      return true;
    }
    for (auto v : vals_) if (v) return false;
    return true;
  }

  MatF& operator+=(const MatF& o) {
    check_same_shape(o);
    if (p_ == 2) {
      for (int i = 0; i < r_; ++i) bits_[i] ^= o.bits_[i];
    } else {
      for (size_t k = 0; k < vals_.size(); ++k) vals_[k] = fp_add(vals_[k], o.vals_[k], p_);
    }
    return *this;
  }
  friend MatF operator+(MatF a, const MatF& b) { return a += b; }

  MatF operator-() const {
    MatF m = *this;
    if (p_ != 2)
      for (auto& v : m.vals_) v = fp_neg(v, p_);
    return m;
  }
  friend MatF operator-(const MatF& a, const MatF& b) { return a + (-b); }

  MatF scaled(uint32_t s) const {
    MatF m(p_, r_, c_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m.set(i, j, fp_mul(get(i, j), s % p_, p_));
    return m;
  }

  friend MatF operator*(const MatF& a, const MatF& b) {
    if (a.p_ != b.p_) throw AlgebraError("modulus mismatch");
    if (a.c_ != b.r_) throw AlgebraError("shape mismatch in product");
    MatF m(a.p_, a.r_, b.c_);
    if (a.p_ == 2) {
      for (int i = 0; i < a.r_; ++i) {
        uint64_t acc = 0, row = a.bits_[i];
        while (row) {
          int j = __builtin_ctzll(row);
          acc ^= b.bits_[j];
          row &= row - 1;
        }
        m.bits_[i] = acc;
      }
      return m;
    }
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        uint32_t aik = a.get(i, k);
        if (!aik) continue;
        for (int j = 0; j < b.c_; ++j)
          m.vals_[static_cast<size_t>(i) * m.c_ + j] =
              fp_add(m.vals_[static_cast<size_t>(i) * m.c_ + j], fp_mul(aik, b.get(k, j), a.p_), a.p_);
      }
    return m;
  }

  friend bool operator==(const MatF& a, const MatF& b) {
    return a.p_ == b.p_ && a.r_ == b.r_ && a.c_ == b.c_ && a.bits_ == b.bits_ && a.vals_ == b.vals_;
  }

  MatF transpose() const {
    MatF m(p_, c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m.set(j, i, get(i, j));
    return m;
  }

  int rank() const {
    MatF m = *this;
    int rank = 0;
    for (int col = 0; col < c_ && rank < r_; ++col) {
      int piv = -1;
      for (int i = rank; i < r_; ++i)
        if (m.get(i, col)) { piv = i; break; }
      if (piv < 0) continue;
      m.swap_rows(rank, piv);
      uint32_t inv = fp_inv(m.get(rank, col), p_);
      for (int i = 0; i < r_; ++i) {
        if (i == rank || !m.get(i, col)) continue;
        m.add_row_multiple(i, rank, fp_neg(fp_mul(m.get(i, col), inv, p_), p_));
      }
      ++rank;
    }
    return rank;
  }

  bool invertible() const { return square() && rank() == r_; }

  std::optional<MatF> inverse() const {
    if (!square()) return std::nullopt;
    MatF a = *this, inv = identity(p_, r_);
    for (int col = 0; col < r_; ++col) {
      int piv = -1;
      for (int i = col; i < r_; ++i)
        if (a.get(i, col)) { piv = i; break; }
      if (piv < 0) return std::nullopt;
      a.swap_rows(col, piv);
      inv.swap_rows(col, piv);
      uint32_t s = fp_inv(a.get(col, col), p_);
      a.scale_row(col, s);
      inv.scale_row(col, s);
      for (int i = 0; i < r_; ++i) {
        if (i == col || !a.get(i, col)) continue;
        uint32_t f = fp_neg(a.get(i, col), p_);
        a.add_row_multiple(i, col, f);
        inv.add_row_multiple(i, col, f);
      }
    }
    return inv;
  }

  // Places `block` with its top-left corner at (r0, c0).
  void put_block(int r0, int c0, const MatF& block) {
    for (int i = 0; i < block.rows(); ++i)
      for (int j = 0; j < block.cols(); ++j) set(r0 + i, c0 + j, block.get(i, j));
  }
  MatF block(int r0, int c0, int rows, int cols) const {
    MatF m(p_, rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.set(i, j, get(r0 + i, c0 + j));
    return m;
  }

  std::vector<std::vector<int64_t>> to_rows() const {
    std::vector<std::vector<int64_t>> out(r_, std::vector<int64_t>(c_));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) out[i][j] = get(i, j);
    return out;
  }

private:
  void check_same_shape(const MatF& o) const {
    if (p_ != o.p_) throw AlgebraError("modulus mismatch");
    if (r_ != o.r_ || c_ != o.c_) throw AlgebraError("shape mismatch");
  }
  void swap_rows(int a, int b) {
    if (a == b) return;
    if (p_ == 2) std::swap(bits_[a], bits_[b]);
    else
      for (int j = 0; j < c_; ++j) std::swap(vals_[static_cast<size_t>(a) * c_ + j], vals_[static_cast<size_t>(b) * c_ + j]);
  }
  void scale_row(int i, uint32_t s) {
    if (p_ == 2) return;  // s is necessarily 1
    for (int j = 0; j < c_; ++j) set(i, j, fp_mul(get(i, j), s, p_));
  }
  // row[dst] += f * row[src]
  void add_row_multiple(int dst, int src, uint32_t f) {
    if (p_ == 2) {
      if (f) bits_[dst] ^= bits_[src];
      return;
    }
    for (int j = 0; j < c_; ++j) set(dst, j, fp_add(get(dst, j), fp_mul(f, get(src, j), p_), p_));
  }

  uint32_t p_ = 2;
  int r_ = 0, c_ = 0;
  std::vector<uint64_t> bits_;
  std::vector<uint32_t> vals_;
};

// Element of Z_p[u, u^-1].
struct ScalarLaurent {
  uint32_t p = 2;
  std::map<int64_t, uint32_t> coeffs;

  ScalarLaurent() = default;
  explicit ScalarLaurent(uint32_t mod) : p(mod) {}
  ScalarLaurent(uint32_t mod, std::map<int64_t, uint32_t> c) : p(mod), coeffs(std::move(c)) { normalize(); }

  static ScalarLaurent constant(uint32_t mod, uint32_t v) { return ScalarLaurent(mod, {{0, v % mod}}); }
  static ScalarLaurent monomial(uint32_t mod, int64_t e, uint32_t v = 1) { return ScalarLaurent(mod, {{e, v % mod}}); }

  void normalize() {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
      it->second %= p;
      if (it->second == 0) it = coeffs.erase(it);
      else ++it;
    }
  }
  bool is_zero() const { return coeffs.empty(); }

  ScalarLaurent& operator+=(const ScalarLaurent& o) {
    if (o.p != p) throw AlgebraError("modulus mismatch");
    for (auto [e, v] : o.coeffs) {
      uint32_t s = fp_add(coeffs[e], v, p);
      if (s) coeffs[e] = s;
      else coeffs.erase(e);
    }
    return *this;
  }
  friend ScalarLaurent operator+(ScalarLaurent a, const ScalarLaurent& b) { return a += b; }
  ScalarLaurent operator-() const {
    ScalarLaurent r = *this;
    for (auto& [e, v] : r.coeffs) v = fp_neg(v, p);
    return r;
  }
  friend ScalarLaurent operator-(const ScalarLaurent& a, const ScalarLaurent& b) { return a + (-b); }
  friend ScalarLaurent operator*(const ScalarLaurent& a, const ScalarLaurent& b) {
    if (a.p != b.p) throw AlgebraError("modulus mismatch");
    ScalarLaurent r(a.p);
    for (auto [ea, va] : a.coeffs)
      for (auto [eb, vb] : b.coeffs) r.coeffs[ea + eb] = fp_add(r.coeffs[ea + eb], fp_mul(va, vb, a.p), a.p);
    r.normalize();
    return r;
  }
  friend bool operator==(const ScalarLaurent&, const ScalarLaurent&) = default;

  // A unit of Z_p[u,u^-1] is a single monomial with a nonzero coefficient.
  bool is_unit() const { return coeffs.size() == 1; }
  ScalarLaurent unit_inverse() const {
    if (!is_unit()) throw NotInvertible("not a unit monomial");
    auto [e, v] = *coeffs.begin();
    return monomial(p, -e, fp_inv(v, p));
  }
};

// d x d matrix with entries in Z_p[u, u^-1], stored by exponent.
struct LaurentMat {
  uint32_t p = 2;
  int d = 0;
  std::map<int64_t, MatF> coeffs;

  LaurentMat() = default;
  LaurentMat(uint32_t mod, int dim) : p(mod), d(dim) {
    if (!is_prime(mod)) throw AlgebraError("modulus must be prime");
    if (dim <= 0) throw AlgebraError("dimension must be positive");
  }
  LaurentMat(uint32_t mod, int dim, std::map<int64_t, MatF> c) : LaurentMat(mod, dim) {
    for (auto& [e, m] : c) {
      if (m.p() != mod || m.rows() != dim || m.cols() != dim) throw AlgebraError("coefficient shape or modulus mismatch");
      if (!m.is_zero()) coeffs.emplace(e, std::move(m));
    }
  }

  static LaurentMat identity(uint32_t mod, int dim) { return LaurentMat(mod, dim, {{0, MatF::identity(mod, dim)}}); }
  static LaurentMat zero(uint32_t mod, int dim) { return LaurentMat(mod, dim); }

  bool is_zero() const { return coeffs.empty(); }
  int64_t min_exp() const { return coeffs.empty() ? 0 : coeffs.begin()->first; }
  int64_t max_exp() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }

  MatF at(int64_t e) const {
    auto it = coeffs.find(e);
    return it == coeffs.end() ? MatF(p, d) : it->second;
  }

  void add_term(int64_t e, const MatF& m) {
    auto it = coeffs.find(e);
    if (it == coeffs.end()) {
      if (!m.is_zero()) coeffs.emplace(e, m);
      return;
    }
    it->second += m;
    if (it->second.is_zero()) coeffs.erase(it);
  }

  // Entry (i,j) as a scalar Laurent polynomial.
  ScalarLaurent entry(int i, int j) const {
    ScalarLaurent s(p);
    for (auto& [e, m] : coeffs)
      if (uint32_t v = m.get(i, j)) s.coeffs[e] = v;
    return s;
  }

  friend bool operator==(const LaurentMat& a, const LaurentMat& b) {
    return a.p == b.p && a.d == b.d && a.coeffs == b.coeffs;
  }
};

inline void check_compatible(const LaurentMat& a, const LaurentMat& b) {
  if (a.p != b.p) throw AlgebraError("modulus mismatch");
  if (a.d != b.d) throw AlgebraError("dimension mismatch");
}

inline LaurentMat lm_add(const LaurentMat& a, const LaurentMat& b) {
  check_compatible(a, b);
  LaurentMat r = a;
  for (auto& [e, m] : b.coeffs) r.add_term(e, m);
  return r;
}

inline LaurentMat lm_mul(const LaurentMat& a, const LaurentMat& b) {
  check_compatible(a, b);
  LaurentMat r(a.p, a.d);
  for (auto& [ea, ma] : a.coeffs)
    for (auto& [eb, mb] : b.coeffs) r.add_term(ea + eb, ma * mb);
  return r;
}

inline LaurentMat lm_scale(const ScalarLaurent& s, const LaurentMat& f) {
  if (s.p != f.p) throw AlgebraError("modulus mismatch");
  LaurentMat r(f.p, f.d);
  for (auto [es, v] : s.coeffs)
    for (auto& [e, m] : f.coeffs) r.add_term(es + e, m.scaled(v));
  return r;
}

inline LaurentMat lm_pow(const LaurentMat& f, uint64_t y) {
  LaurentMat result = LaurentMat::identity(f.p, f.d), base = f;
  while (y) {
    if (y & 1) result = lm_mul(result, base);
    y >>= 1;
    if (y) base = lm_mul(base, base);
  }
  return result;
}

namespace detail {

using PolyMatrix = std::vector<std::vector<ScalarLaurent>>;

inline PolyMatrix to_poly_matrix(const LaurentMat& f) {
  PolyMatrix m(f.d, std::vector<ScalarLaurent>(f.d, ScalarLaurent(f.p)));
  for (int i = 0; i < f.d; ++i)
    for (int j = 0; j < f.d; ++j) m[i][j] = f.entry(i, j);
  return m;
}

// Laplace expansion along the first remaining row; cols is a bitmask of usable columns.
inline ScalarLaurent det_rec(const PolyMatrix& m, const std::vector<int>& rows, size_t ri, uint32_t cols,
                             std::map<std::pair<size_t, uint32_t>, ScalarLaurent>& memo, uint32_t p) {
  if (ri == rows.size()) return ScalarLaurent::constant(p, 1);
  auto key = std::make_pair(ri, cols);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  ScalarLaurent acc(p);
  int sign_pos = 0;
  for (int c = 0; c < 32; ++c) {
    if (!(cols & (1u << c))) continue;
    const ScalarLaurent& a = m[rows[ri]][c];
    if (!a.is_zero()) {
      ScalarLaurent term = a * det_rec(m, rows, ri + 1, cols & ~(1u << c), memo, p);
      acc += (sign_pos % 2 == 0) ? term : -term;
    }
    ++sign_pos;
  }
  memo.emplace(key, acc);
  return acc;
}

inline ScalarLaurent minor_det(const PolyMatrix& m, int skip_row, int skip_col, uint32_t p) {
  int d = static_cast<int>(m.size());
  std::vector<int> rows;
  for (int i = 0; i < d; ++i)
    if (i != skip_row) rows.push_back(i);
  uint32_t cols = 0;
  for (int j = 0; j < d; ++j)
    if (j != skip_col) cols |= 1u << j;
  std::map<std::pair<size_t, uint32_t>, ScalarLaurent> memo;
  return det_rec(m, rows, 0, cols, memo, p);
}

}  // namespace detail

inline ScalarLaurent lm_det(const LaurentMat& f) {
  if (f.d > 31) throw AlgebraError("determinant limited to d <= 31");
  return detail::minor_det(detail::to_poly_matrix(f), -1, -1, f.p);
}

inline LaurentMat lm_invert(const LaurentMat& f) {
  ScalarLaurent det = lm_det(f);
  if (!det.is_unit()) throw NotInvertible("determinant is not a unit monomial");
  ScalarLaurent dinv = det.unit_inverse();
  auto m = detail::to_poly_matrix(f);
  LaurentMat r(f.p, f.d);
  for (int i = 0; i < f.d; ++i)
    for (int j = 0; j < f.d; ++j) {
      // adj(f)_{ij} = (-1)^{i+j} det(minor without row j and column i)
      ScalarLaurent c = detail::minor_det(m, j, i, f.p);
      if ((i + j) % 2) c = -c;
      c = c * dinv;
      for (auto [e, v] : c.coeffs) {
        MatF unit(f.p, f.d);
        unit.set(i, j, v);
        r.add_term(e, unit);
      }
    }
  return r;
}

inline std::optional<LaurentMat> lm_try_invert(const LaurentMat& f) {
  try {
    return lm_invert(f);
  } catch (const NotInvertible&) {
    return std::nullopt;
  }
}

// Monic polynomial X^D + c_{D-1} X^{D-1} + ... + c_0 with Laurent coefficients.
struct MinPoly {
  uint32_t p = 2;
  std::vector<ScalarLaurent> c;  // c_0 .. c_{D-1}

  MinPoly() = default;
  MinPoly(uint32_t mod, std::vector<ScalarLaurent> lower) : p(mod), c(std::move(lower)) {
    if (c.empty()) throw AlgebraError("minimal polynomial must have degree >= 1");
    for (auto& s : c)
      if (s.p != p) throw AlgebraError("modulus mismatch");
  }
  int degree() const { return static_cast<int>(c.size()); }
};

inline bool annihilates(const MinPoly& m, const LaurentMat& f) {
  if (m.p != f.p) throw AlgebraError("modulus mismatch");
  LaurentMat acc = LaurentMat::zero(f.p, f.d), power = LaurentMat::identity(f.p, f.d);
  for (int j = 0; j < m.degree(); ++j) {
    acc = lm_add(acc, lm_scale(m.c[j], power));
    power = lm_mul(power, f);
  }
  return lm_add(acc, power).is_zero();
}

inline LaurentMat lm_mirror(const LaurentMat& f) {
  LaurentMat r(f.p, f.d);
  for (auto& [e, m] : f.coeffs) r.coeffs.emplace(-e, m);
  return r;
}

// Block-diagonal sum.
inline LaurentMat lm_direct_sum(const LaurentMat& a, const LaurentMat& b) {
  if (a.p != b.p) throw AlgebraError("modulus mismatch");
  LaurentMat r(a.p, a.d + b.d);
  for (auto& [e, m] : a.coeffs) {
    MatF big(a.p, r.d);
    big.put_block(0, 0, m);
    r.add_term(e, big);
  }
  for (auto& [e, m] : b.coeffs) {
    MatF big(a.p, r.d);
    big.put_block(a.d, a.d, m);
    r.add_term(e, big);
  }
  return r;
}

inline std::string to_string(const ScalarLaurent& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (auto [e, v] : s.coeffs) {
    if (!out.empty()) out += "+";
    std::string mono = e == 0 ? "" : (e == 1 ? "u" : "u^" + std::to_string(e));
    if (v != 1 || mono.empty()) out += std::to_string(v) + (mono.empty() ? "" : "*");
    out += mono;
  }
  return out;
}

}  // namespace lca

#endif
