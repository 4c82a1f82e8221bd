#ifndef LCA_AUTOMATA_HPP
#define LCA_AUTOMATA_HPP

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <regex>
#include <string>
#include <variant>
#include <vector>

#include "lca/algebra.hpp"

namespace lca {

// Linear CA given by its symbol. F(c)_x = sum_e M_e c(x+e).
struct LinearCA {
  LaurentMat symbol;
  uint32_t p() const { return symbol.p; }
  int d() const { return symbol.d; }
  friend bool operator==(const LinearCA&, const LinearCA&) = default;
};

// Table CA: out(x) = table[word(c(x+o_0), ..., c(x+o_{k-1}))], word index = sum s_i q^i.
struct GeneralCA {
  uint32_t q = 2;
  std::vector<int64_t> offsets;
  std::vector<uint32_t> table;

  GeneralCA() = default;
  GeneralCA(uint32_t alphabet, std::vector<int64_t> offs, std::vector<uint32_t> tab)
      : q(alphabet), offsets(std::move(offs)), table(std::move(tab)) {
    if (q < 1) throw AlgebraError("alphabet must be nonempty");
    if (!std::is_sorted(offsets.begin(), offsets.end()) ||
        std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
      throw AlgebraError("offsets must be sorted and distinct");
    uint64_t expect = 1;
    for (size_t i = 0; i < offsets.size(); ++i) expect *= q;
    if (table.size() != expect) throw AlgebraError("rule table is not total");
    for (auto v : table)
      if (v >= q) throw AlgebraError("rule table state out of range");
  }

  int64_t min_offset() const { return offsets.empty() ? 0 : offsets.front(); }
  int64_t max_offset() const { return offsets.empty() ? 0 : offsets.back(); }

  uint32_t apply(const std::vector<uint32_t>& word) const {
    uint64_t idx = 0, mul = 1;
    for (auto s : word) {
      idx += s * mul;
      mul *= q;
    }
    return table[idx];
  }
  friend bool operator==(const GeneralCA&, const GeneralCA&) = default;
};

using AutomatonDef = std::variant<LinearCA, GeneralCA>;

using State = std::vector<uint32_t>;

// Finitely supported configuration over a quiescent background.
struct Config {
  State background;
  std::map<int64_t, State> cells;

  Config() = default;
  explicit Config(State bg) : background(std::move(bg)) {}

  const State& at(int64_t x) const {
    auto it = cells.find(x);
    return it == cells.end() ? background : it->second;
  }
  void set(int64_t x, State s) {
    if (s == background) cells.erase(x);
    else cells[x] = std::move(s);
  }
  friend bool operator==(const Config&, const Config&) = default;
};

struct Rescaling {
  int64_t m = 1;
  int64_t t = 1;
  int64_t z = 0;
};

inline Config zero_config(const LinearCA& a) { return Config(State(a.d(), 0)); }

inline Config spike(const LinearCA& a, int64_t x, const State& v) {
  Config c = zero_config(a);
  c.set(x, v);
  return c;
}

inline State apply_matrix(const MatF& m, const State& v) {
  State out(m.rows(), 0);
  for (int i = 0; i < m.rows(); ++i) {
    uint64_t acc = 0;
    for (int j = 0; j < m.cols(); ++j) acc += uint64_t{m.get(i, j)} * v[j];
    out[i] = static_cast<uint32_t>(acc % m.p());
  }
  return out;
}

inline Config step(const LinearCA& a, const Config& c) {
  for (auto v : c.background)
    if (v) throw AlgebraError("linear CA needs the zero background");
  const uint32_t p = a.p();
  std::map<int64_t, State> acc;
  for (auto& [s, v] : c.cells)
    for (auto& [e, m] : a.symbol.coeffs) {
      State w = apply_matrix(m, v);
      auto [it, fresh] = acc.try_emplace(s - e, State(a.d(), 0));
      for (int i = 0; i < a.d(); ++i) it->second[i] = fp_add(it->second[i], w[i], p);
    }
  Config out = zero_config(a);
  for (auto& [x, v] : acc) out.set(x, v);
  return out;
}

inline Config step(const GeneralCA& a, const Config& c) {
  if (c.background.size() != 1) throw AlgebraError("table CA states are scalars");
  uint32_t bg = c.background[0];
  std::vector<uint32_t> word(a.offsets.size(), bg);
  if (a.apply(word) != bg) throw AlgebraError("background is not quiescent");
  for (auto& [x, s] : c.cells)
    if (s.size() != 1 || s[0] >= a.q) throw AlgebraError("state out of range");
  Config out(c.background);
  if (c.cells.empty()) return out;
  int64_t lo = c.cells.begin()->first - a.max_offset();
  int64_t hi = c.cells.rbegin()->first - a.min_offset();
  for (int64_t x = lo; x <= hi; ++x) {
    for (size_t i = 0; i < a.offsets.size(); ++i) word[i] = c.at(x + a.offsets[i])[0];
    out.set(x, State{a.apply(word)});
  }
  return out;
}

inline Config step(const AutomatonDef& a, const Config& c) {
  return std::visit([&](const auto& ca) { return step(ca, c); }, a);
}

inline Config iterate(const AutomatonDef& a, Config c, int64_t t) {
  for (int64_t i = 0; i < t; ++i) c = step(a, c);
  return c;
}

// sigma_z(c)_x = c_{x-z}
inline Config shift_config(const Config& c, int64_t z) {
  Config out(c.background);
  for (auto& [x, s] : c.cells) out.set(x + z, s);
  return out;
}

inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline int64_t floor_mod(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

// b_m: block X gathers c(mX), ..., c(mX+m-1).
inline Config pack_config(const Config& c, int64_t m) {
  const size_t d = c.background.size();
  State bg;
  for (int64_t i = 0; i < m; ++i) bg.insert(bg.end(), c.background.begin(), c.background.end());
  std::map<int64_t, State> blocks;
  for (auto& [x, s] : c.cells) {
    int64_t X = floor_div(x, m), i = floor_mod(x, m);
    auto [it, fresh] = blocks.try_emplace(X, bg);
    std::copy(s.begin(), s.end(), it->second.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  Config out(bg);
  for (auto& [X, s] : blocks) out.set(X, s);
  return out;
}

inline LinearCA rescale(const LinearCA& a, const Rescaling& r) {
  if (r.m < 1 || r.t < 1) throw AlgebraError("rescaling needs m >= 1 and t >= 1");
  // sigma_z has symbol u^{-z}; sigma_z commutes with every linear CA.
  LaurentMat h(a.p(), a.d());
  for (auto& [e, mat] : lm_pow(a.symbol, static_cast<uint64_t>(r.t)).coeffs) h.add_term(e - r.z, mat);
  if (r.m == 1) return LinearCA{h};
  const int d = a.d();
  const int64_t m = r.m;
  LaurentMat packed(a.p(), static_cast<int>(d * m));
  for (auto& [e, mat] : h.coeffs)
    for (int64_t i = 0; i < m; ++i)
      for (int64_t j = 0; j < m; ++j) {
        // out block i reads c(mX+i+e) = C(X+E)_j with e = mE + j - i
        int64_t num = e + i - j;
        if (floor_mod(num, m) != 0) continue;
        MatF big(a.p(), static_cast<int>(d * m));
        big.put_block(static_cast<int>(i * d), static_cast<int>(j * d), mat);
        packed.add_term(num / m, big);
      }
  return LinearCA{packed};
}

inline LinearCA product(const LinearCA& a, const LinearCA& b) { return LinearCA{lm_direct_sum(a.symbol, b.symbol)}; }

inline GeneralCA product(const GeneralCA& a, const GeneralCA& b) {
  std::vector<int64_t> offs;
  std::set_union(a.offsets.begin(), a.offsets.end(), b.offsets.begin(), b.offsets.end(), std::back_inserter(offs));
  const uint32_t q = a.q * b.q;
  uint64_t size = 1;
  for (size_t i = 0; i < offs.size(); ++i) size *= q;
  std::vector<uint32_t> table(size);
  std::vector<uint32_t> wa(a.offsets.size()), wb(b.offsets.size());
  for (uint64_t idx = 0; idx < size; ++idx) {
    std::map<int64_t, uint32_t> at;
    uint64_t rest = idx;
    for (auto o : offs) {
      at[o] = static_cast<uint32_t>(rest % q);
      rest /= q;
    }
    for (size_t i = 0; i < a.offsets.size(); ++i) wa[i] = at[a.offsets[i]] % a.q;
    for (size_t i = 0; i < b.offsets.size(); ++i) wb[i] = at[b.offsets[i]] / a.q;
    table[idx] = a.apply(wa) + a.q * b.apply(wb);
  }
  return GeneralCA(q, offs, table);
}

inline LinearCA mirror(const LinearCA& a) { return LinearCA{lm_mirror(a.symbol)}; }

inline GeneralCA mirror(const GeneralCA& a) {
  std::vector<int64_t> offs;
  for (auto it = a.offsets.rbegin(); it != a.offsets.rend(); ++it) offs.push_back(-*it);
  std::vector<uint32_t> table(a.table.size());
  const size_t k = offs.size();
  for (uint64_t idx = 0; idx < table.size(); ++idx) {
    // new word position i holds old position k-1-i
    std::vector<uint32_t> w(k);
    uint64_t rest = idx;
    for (size_t i = 0; i < k; ++i) {
      w[k - 1 - i] = static_cast<uint32_t>(rest % a.q);
      rest /= a.q;
    }
    table[idx] = a.apply(w);
  }
  return GeneralCA(a.q, offs, table);
}

inline AutomatonDef product(const AutomatonDef& a, const AutomatonDef& b) {
  if (a.index() != b.index()) throw AlgebraError("product of a linear and a table CA is not supported");
  if (a.index() == 0) return product(std::get<LinearCA>(a), std::get<LinearCA>(b));
  return product(std::get<GeneralCA>(a), std::get<GeneralCA>(b));
}

inline AutomatonDef mirror(const AutomatonDef& a) {
  return std::visit([](const auto& ca) -> AutomatonDef { return mirror(ca); }, a);
}

inline LinearCA inverse(const LinearCA& a) { return LinearCA{lm_invert(a.symbol)}; }

// mir o F^-1 o mir; mirror() already conjugates by mir.
inline LinearCA dual(const LinearCA& a) { return mirror(inverse(a)); }

// True iff phi . A(u) = G(u) . phi, phi injective of shape d_g x d_a.
inline bool verify_linear_embedding(const LinearCA& a, const LinearCA& g, const MatF& phi) {
  if (phi.rows() != g.d() || phi.cols() != a.d()) throw AlgebraError("phi must have shape d_g x d_a");
  if (phi.p() != a.p() || a.p() != g.p()) throw AlgebraError("modulus mismatch");
  if (phi.rank() != a.d()) throw AlgebraError("phi is not injective");
  std::vector<int64_t> exps;
  for (auto& [e, m] : a.symbol.coeffs) exps.push_back(e);
  for (auto& [e, m] : g.symbol.coeffs) exps.push_back(e);
  for (auto e : exps)
    if (!(phi * a.symbol.at(e) == g.symbol.at(e) * phi)) return false;
  return true;
}

// Table CA on the alphabet (Z_p)^d with contiguous neighbourhood [min_exp, max_exp].
inline GeneralCA to_general(const LinearCA& a, uint64_t max_table = uint64_t{1} << 24) {
  const uint32_t p = a.p();
  const int d = a.d();
  uint64_t q64 = 1;
  for (int i = 0; i < d; ++i) q64 *= p;
  std::vector<int64_t> offs;
  int64_t lo = a.symbol.min_exp(), hi = a.symbol.max_exp();
  for (int64_t e = lo; e <= hi; ++e) offs.push_back(e);
  uint64_t size = 1;
  for (size_t i = 0; i < offs.size(); ++i) {
    size *= q64;
    if (size > max_table) throw AlgebraError("induced rule table too large");
  }
  const auto q = static_cast<uint32_t>(q64);
  auto decode = [&](uint32_t s) {
    State v(d);
    for (int i = 0; i < d; ++i) {
      v[i] = s % p;
      s /= p;
    }
    return v;
  };
  std::vector<uint32_t> table(size);
  for (uint64_t idx = 0; idx < size; ++idx) {
    State acc(d, 0);
    uint64_t rest = idx;
    for (auto e : offs) {
      State w = apply_matrix(a.symbol.at(e), decode(static_cast<uint32_t>(rest % q)));
      rest /= q;
      for (int i = 0; i < d; ++i) acc[i] = fp_add(acc[i], w[i], p);
    }
    uint32_t code = 0;
    for (int i = d - 1; i >= 0; --i) code = code * p + acc[i];
    table[idx] = code;
  }
  return GeneralCA(q, offs, table);
}

// Integer code of a state vector of (Z_p)^d, matching to_general.
inline uint32_t encode_state(const State& v, uint32_t p) {
  uint32_t code = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) code = code * p + *it;
  return code;
}

namespace builtin {

inline MatF mat(uint32_t p, std::vector<std::vector<int64_t>> rows) { return MatF::from_rows(p, rows); }

inline LinearCA xor_ca() {
  return LinearCA{LaurentMat(2, 1, {{0, mat(2, {{1}})}, {-1, mat(2, {{1}})}})};
}

inline LinearCA identity(int d = 1, uint32_t p = 2) { return LinearCA{LaurentMat::identity(p, d)}; }

inline LinearCA shift(int64_t z, int d = 1, uint32_t p = 2) {
  return LinearCA{LaurentMat(p, d, {{-z, MatF::identity(p, d)}})};
}

inline LinearCA theta() {
  return LinearCA{LaurentMat(2, 2, {{-1, mat(2, {{0, 0}, {0, 1}})}, {0, mat(2, {{0, 1}, {1, 1}})}, {1, mat(2, {{0, 0}, {0, 1}})}})};
}

inline LinearCA theta_inv() {
  return LinearCA{LaurentMat(2, 2, {{-1, mat(2, {{1, 0}, {0, 0}})}, {0, mat(2, {{1, 1}, {1, 0}})}, {1, mat(2, {{1, 0}, {0, 0}})}})};
}

inline LinearCA gamma() {
  return LinearCA{LaurentMat(2, 3, {{0, mat(2, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})},
                                    {1, mat(2, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}})}})};
}

inline LinearCA gamma_inv() {
  return LinearCA{LaurentMat(2, 3, {{0, mat(2, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})},
                                    {1, mat(2, {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}})},
                                    {2, mat(2, {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}})}})};
}

inline LinearCA nilpotent() { return LinearCA{LaurentMat(2, 2, {{1, mat(2, {{0, 1}, {0, 0}})}})}; }

// f(a, b) = a AND b on offsets {0, 1}.
inline GeneralCA and_ca() { return GeneralCA(2, {0, 1}, {0, 0, 0, 1}); }

inline MinPoly gamma_minpoly() {
  // X^3 + X^2 + (1+u^2) X + 1
  return MinPoly(2, {ScalarLaurent::constant(2, 1), ScalarLaurent(2, {{0, 1}, {2, 1}}), ScalarLaurent::constant(2, 1)});
}

inline MinPoly gamma_inv_minpoly() {
  // X^3 + (1+u^2) X^2 + X + 1
  return MinPoly(2, {ScalarLaurent::constant(2, 1), ScalarLaurent::constant(2, 1), ScalarLaurent(2, {{0, 1}, {2, 1}})});
}

// Names: theta, theta_inv, gamma, gamma_inv, gamma_dual, xor, nilpotent, and,
// identity, identity(d), shift(z).
inline AutomatonDef by_name(const std::string& name) {
  static const std::regex ident_re(R"(identity(?:\((\d+)\))?)"), shift_re(R"(shift\((-?\d+)\))");
  std::smatch m;
  if (name == "theta") return theta();
  if (name == "theta_inv") return theta_inv();
  if (name == "gamma") return gamma();
  if (name == "gamma_inv") return gamma_inv();
  if (name == "gamma_dual") return dual(gamma());
  if (name == "xor") return xor_ca();
  if (name == "nilpotent") return nilpotent();
  if (name == "and") return and_ca();
  if (std::regex_match(name, m, ident_re)) return identity(m[1].matched ? std::stoi(m[1]) : 1);
  if (std::regex_match(name, m, shift_re)) return shift(std::stoll(m[1]));
  throw std::invalid_argument("unknown builtin automaton: " + name);
}

inline LinearCA linear_by_name(const std::string& name) {
  auto a = by_name(name);
  if (!std::holds_alternative<LinearCA>(a)) throw std::invalid_argument(name + " is not linear");
  return std::get<LinearCA>(a);
}

}  // namespace builtin

}  // namespace lca

#endif
