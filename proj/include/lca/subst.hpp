#ifndef LCA_SUBST_HPP
#define LCA_SUBST_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "lca/automata.hpp"
#include "lca/geom.hpp"
#include "lca/green.hpp"
#include "lca/propb.hpp"
#include "lca/xp.hpp"

namespace lca {

struct SubstError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state is a bit-vector over the letters (bit i = letter i).
using SState = uint64_t;

inline int quadrant_index(int i, int j) { return i + 2 * j; }

// Table-driven 2x2 substitution: the state at (2x+i, 2y+j) is Q_ij(state at (x, y)).
struct SubstSystem {
  std::string name;
  std::vector<std::string> letters;
  std::array<std::vector<SState>, 4> quad;  // quad[q][out letter] = mask of input letters XORed
  std::vector<std::pair<int64_t, SState>> init;
  int d = 0;
  std::vector<std::vector<SState>> projection;  // d x d masks
  bool mirror = false;

  int size() const { return static_cast<int>(letters.size()); }

  SState apply(int q, SState s) const {
    SState out = 0;
    for (int l = 0; l < size(); ++l)
      if (__builtin_parityll(s & quad[q][l])) out |= SState{1} << l;
    return out;
  }
  SState apply(int i, int j, SState s) const { return apply(quadrant_index(i, j), s); }

  MatF project(SState s) const {
    MatF m(2, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m.set(r, c, __builtin_parityll(s & projection[r][c]));
    return m;
  }

  int letter_index(const std::string& l) const {
    for (int i = 0; i < size(); ++i)
      if (letters[i] == l) return i;
    throw SubstError("unknown letter '" + l + "' in system " + name);
  }

  // "BDG" style name, "0" for the zero state.
  std::string state_name(SState s) const {
    if (!s) return "0";
    std::string out;
    for (int l = 0; l < size(); ++l)
      if (s & (SState{1} << l))
        for (char ch : letters[l]) out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
  }

  // Inverse of state_name for single-character letters.
  SState parse_state(const std::string& text) const {
    if (text == "0") return 0;
    SState s = 0;
    for (char ch : text) s |= SState{1} << letter_index(std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(ch)))));
    return s;
  }

  SState init_at(int64_t x) const {
    for (auto& [px, s] : init)
      if (px == x) return s;
    return 0;
  }
};

// ---------------------------------------------------------------------------
// file format

inline SubstSystem subst_from_json(const nlohmann::json& j) {
  SubstSystem s;
  s.name = j.value("name", std::string("custom"));
  s.letters = j.at("letters").get<std::vector<std::string>>();
  if (s.letters.empty() || s.letters.size() > 64) throw SubstError("between 1 and 64 letters required");
  std::set<std::string> uniq(s.letters.begin(), s.letters.end());
  if (uniq.size() != s.letters.size()) throw SubstError("duplicate letters");
  auto mask_of = [&](const nlohmann::json& arr) {
    SState m = 0;
    for (auto& l : arr) {
      SState bit = SState{1} << s.letter_index(l.get<std::string>());
      if (m & bit) throw SubstError("letter repeated in an XOR list");
      m |= bit;
    }
    return m;
  };
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj) {
      std::string key = std::to_string(i) + std::to_string(jj);
      auto& q = s.quad[quadrant_index(i, jj)];
      q.assign(s.size(), 0);
      const auto& qj = j.at("quadrants").at(key);
      for (auto& [out, ins] : qj.items()) q[s.letter_index(out)] = mask_of(ins);
    }
  for (auto& cell : j.at("init")) {
    int64_t x = cell.at("x").get<int64_t>();
    for (auto& [px, st] : s.init)
      if (px == x) throw SubstError("duplicate init position");
    s.init.push_back({x, mask_of(cell.at("state"))});
  }
  std::sort(s.init.begin(), s.init.end());
  const auto& proj = j.at("projection");
  s.d = static_cast<int>(proj.size());
  for (auto& row : proj) {
    if (static_cast<int>(row.size()) != s.d) throw SubstError("projection must be square");
    std::vector<SState> r;
    for (auto& entry : row) r.push_back(mask_of(entry));
    s.projection.push_back(r);
  }
  s.mirror = j.value("mirror", false);
  return s;
}

inline nlohmann::json subst_to_json(const SubstSystem& s) {
  auto list = [&](SState m) {
    nlohmann::json arr = nlohmann::json::array();
    for (int l = 0; l < s.size(); ++l)
      if (m & (SState{1} << l)) arr.push_back(s.letters[l]);
    return arr;
  };
  nlohmann::json j;
  j["name"] = s.name;
  j["letters"] = s.letters;
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj) {
      nlohmann::json q = nlohmann::json::object();
      for (int l = 0; l < s.size(); ++l)
        if (s.quad[quadrant_index(i, jj)][l]) q[s.letters[l]] = list(s.quad[quadrant_index(i, jj)][l]);
      j["quadrants"][std::to_string(i) + std::to_string(jj)] = q;
    }
  j["init"] = nlohmann::json::array();
  for (auto& [x, st] : s.init) j["init"].push_back({{"x", x}, {"state", list(st)}});
  j["projection"] = nlohmann::json::array();
  for (auto& row : s.projection) {
    nlohmann::json r = nlohmann::json::array();
    for (auto m : row) r.push_back(list(m));
    j["projection"].push_back(r);
  }
  j["mirror"] = s.mirror;
  return j;
}

// ---------------------------------------------------------------------------
// quotients

// Maps each letter of `full` to a set of letters of the reduced system. The reduced
// letters must be letters of `full`; their images define the reduced tables.
inline SubstSystem quotient(const SubstSystem& full, const std::vector<std::string>& reduced_letters,
                            const std::map<std::string, std::vector<std::string>>& qmap, const std::string& name) {
  SubstSystem r;
  r.name = name;
  r.letters = reduced_letters;
  r.d = full.d;
  r.mirror = full.mirror;
  auto image_of_letter = [&](int l) {
    const std::string& ln = full.letters[l];
    auto it = qmap.find(ln);
    SState m = 0;
    if (it == qmap.end()) {
      m = SState{1} << r.letter_index(ln);
    } else {
      for (auto& t : it->second) m ^= SState{1} << r.letter_index(t);
    }
    return m;
  };
  std::vector<SState> pi(full.size());
  for (int l = 0; l < full.size(); ++l) pi[l] = image_of_letter(l);
  auto push = [&](SState s) {
    SState out = 0;
    for (int l = 0; l < full.size(); ++l)
      if (s & (SState{1} << l)) out ^= pi[l];
    return out;
  };
  std::vector<int> lift(r.size());
  for (int k = 0; k < r.size(); ++k) {
    lift[k] = full.letter_index(r.letters[k]);
    if (pi[lift[k]] != (SState{1} << k)) throw SubstError("reduced letter " + r.letters[k] + " is not fixed by the quotient");
  }
  // reduced quadrant maps: out letter k = parity(state & mask) where the image of letter m is push(Q(e_m))
  for (int q = 0; q < 4; ++q) {
    r.quad[q].assign(r.size(), 0);
    for (int m = 0; m < r.size(); ++m) {
      SState img = push(full.apply(q, SState{1} << lift[m]));
      for (int k = 0; k < r.size(); ++k)
        if (img & (SState{1} << k)) r.quad[q][k] |= SState{1} << m;
    }
  }
  r.projection.assign(full.d, std::vector<SState>(full.d, 0));
  for (int a = 0; a < full.d; ++a)
    for (int b = 0; b < full.d; ++b)
      for (int m = 0; m < r.size(); ++m)
        if (full.projection[a][b] & (SState{1} << lift[m])) r.projection[a][b] |= SState{1} << m;
  for (auto& [x, st] : full.init) r.init.push_back({x, push(st)});
  // the quotient must commute with every quadrant map and the projection
  for (int l = 0; l < full.size(); ++l) {
    SState e = SState{1} << l;
    for (int q = 0; q < 4; ++q)
      if (push(full.apply(q, e)) != r.apply(q, pi[l]))
        throw SubstError("quotient is not compatible with quadrant maps at letter " + full.letters[l]);
    if (!(full.project(e) == r.project(pi[l])))
      throw SubstError("quotient is not compatible with the projection at letter " + full.letters[l]);
  }
  return r;
}

// Two letters act identically: same quadrant images and same projection.
inline bool letters_equivalent(const SubstSystem& s, const std::string& a, const std::string& b) {
  SState ea = SState{1} << s.letter_index(a), eb = SState{1} << s.letter_index(b);
  for (int q = 0; q < 4; ++q)
    if (s.apply(q, ea) != s.apply(q, eb)) return false;
  return s.project(ea) == s.project(eb);
}

// ---------------------------------------------------------------------------
// expansion and cell access

struct SubstGrid {
  int depth = 0;
  int64_t x0 = 0;
  int64_t width = 0;
  int64_t height = 0;
  std::vector<SState> data;

  SState at(int64_t x, int64_t y) const {
    if (y < 0 || y >= height || x < x0 || x >= x0 + width) return 0;
    return data[static_cast<size_t>(y * width + (x - x0))];
  }
};

inline SubstGrid expand(const SubstSystem& s, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (depth > 14) throw std::invalid_argument("expand is limited to depth 14; use cell()");
  SubstGrid g;
  int64_t lo = 0, hi = 0;
  if (!s.init.empty()) {
    lo = s.init.front().first;
    hi = s.init.back().first;
  }
  g.x0 = lo;
  g.width = hi - lo + 1;
  g.height = 1;
  g.data.assign(static_cast<size_t>(g.width), 0);
  for (auto& [x, st] : s.init) g.data[static_cast<size_t>(x - lo)] = st;
  for (int level = 0; level < depth; ++level) {
    SubstGrid n;
    n.depth = level + 1;
    n.x0 = 2 * g.x0;
    n.width = 2 * g.width;
    n.height = 2 * g.height;
    n.data.assign(static_cast<size_t>(n.width * n.height), 0);
    for (int64_t y = 0; y < g.height; ++y)
      for (int64_t x = 0; x < g.width; ++x) {
        SState st = g.data[static_cast<size_t>(y * g.width + x)];
        if (!st) continue;
        for (int j = 0; j < 2; ++j)
          for (int i = 0; i < 2; ++i)
            n.data[static_cast<size_t>((2 * y + j) * n.width + 2 * x + i)] = s.apply(i, j, st);
      }
    g = std::move(n);
  }
  g.depth = depth;
  return g;
}

// State at (x, y) following the binary digits of x and y from the init row.
inline SState cell(const SubstSystem& s, int64_t x, int64_t y, int depth) {
  if (depth < 0 || depth > 62) throw std::out_of_range("depth must be in [0, 62]");
  if (y < 0 || y >= (int64_t{1} << depth)) throw std::out_of_range("y outside the expanded grid");
  SState st = s.init_at(x >> depth);
  for (int level = depth - 1; level >= 0 && st; --level)
    st = s.apply(static_cast<int>((x >> level) & 1), static_cast<int>((y >> level) & 1), st);
  return st;
}

struct VerifyReport {
  bool ok = true;
  int64_t compared = 0;
  std::optional<std::pair<int64_t, int64_t>> first_mismatch;  // (x, y) in Green coordinates
};

// projection(cell) = F^y_x with x = -(grid x) when the system is mirrored.
inline VerifyReport verify_against_green(const SubstSystem& s, const LinearCA& f, int depth) {
  if (f.p() != 2 || f.d() != s.d) throw std::invalid_argument("system and automaton dimensions differ");
  SubstGrid g = expand(s, depth);
  VerifyReport rep;
  GreenStream gs(f);
  for (int64_t y = 0; y < g.height; ++y, gs.advance()) {
    GreenRow row = gs.row();
    std::set<int64_t> xs;
    for (int64_t gx = g.x0; gx < g.x0 + g.width; ++gx) xs.insert(s.mirror ? -gx : gx);
    for (auto& [x, m] : row.cells) xs.insert(x);
    for (auto x : xs) {
      ++rep.compared;
      if (!(s.project(g.at(s.mirror ? -x : x, y)) == row.at(x))) {
        rep.ok = false;
        if (!rep.first_mismatch) rep.first_mismatch = {x, y};
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// transition graph

struct TransitionGraph {
  std::vector<SState> vertices;  // reachable nonzero states, sorted
  std::map<SState, std::vector<SState>> edges;  // one substitution step, nonzero targets
  bool reaches_zero = false;

  int index_of(SState s) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), s);
    return (it != vertices.end() && *it == s) ? static_cast<int>(it - vertices.begin()) : -1;
  }
};

inline TransitionGraph transition_graph(const SubstSystem& s) {
  TransitionGraph g;
  std::set<SState> seen;
  std::vector<SState> todo;
  for (auto& [x, st] : s.init)
    if (st && seen.insert(st).second) todo.push_back(st);
  while (!todo.empty()) {
    SState cur = todo.back();
    todo.pop_back();
    std::set<SState> targets;
    for (int q = 0; q < 4; ++q) {
      SState t = s.apply(q, cur);
      if (!t) {
        g.reaches_zero = true;
        continue;
      }
      targets.insert(t);
      if (seen.insert(t).second) todo.push_back(t);
    }
    g.edges[cur] = std::vector<SState>(targets.begin(), targets.end());
  }
  g.vertices.assign(seen.begin(), seen.end());
  return g;
}

// Tarjan's algorithm; components listed in reverse topological order.
inline std::vector<std::vector<SState>> scc(const TransitionGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<SState>> out;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (SState t : g.edges.at(g.vertices[v])) {
      int w = g.index_of(t);
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<SState> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(g.vertices[w]);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(comp);
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return out;
}

// Reachability in zero or more substitution steps.
inline bool reaches(const TransitionGraph& g, SState from, SState to) {
  std::set<SState> seen{from};
  std::vector<SState> todo{from};
  while (!todo.empty()) {
    SState cur = todo.back();
    todo.pop_back();
    if (cur == to) return true;
    auto it = g.edges.find(cur);
    if (it == g.edges.end()) continue;
    for (SState t : it->second)
      if (seen.insert(t).second) todo.push_back(t);
  }
  return false;
}

// ---------------------------------------------------------------------------
// builtin systems

namespace tables {

inline const char* gamma_full_json() {
  return R"({
  "name": "gamma_full",
  "letters": ["a","b","c","d","e","f","g","h","i"],
  "quadrants": {
    "01": {"b":["f"], "d":["g"], "e":["a","b","c","e","f","h"], "g":["b","c","d","f","g","i"], "i":["c","g"]},
    "11": {"a":["f"], "c":["g"], "f":["b","c","d","f","g","i"], "h":["c","g"]},
    "00": {"b":["b","f"], "d":["c","g"], "e":["b"], "g":["c"], "i":["d","i"]},
    "10": {"a":["b","f"], "c":["c","g"], "f":["c"], "h":["d","i"]}
  },
  "init": [{"x":0, "state":["d"]}],
  "projection": [
    [["d","i"], ["c"], ["g"]],
    [["c"], ["b","d","i","g"], ["c","f"]],
    [["g"], ["c","f"], ["b","d","i"]]
  ],
  "mirror": true
})";
}

inline const char* omega_full_json() {
  return R"({
  "name": "omega_full",
  "letters": ["a","b","c","d","e","f","g","h","i","j","k","l"],
  "quadrants": {
    "01": {"b":["a","b","c","g","h"], "d":["b","c","d","h","i"], "f":["c","d","e","i","j"],
           "h":["c","d","e","i","k"], "j":["d","e","f","j","l"], "l":["d","j"]},
    "11": {"a":["a","b","c","g","h"], "c":["b","c","d","h","i"], "e":["c","d","e","i","j"],
           "g":["c","d","e","i","k"], "i":["d","e","f","j","l"], "k":["d","j"]},
    "00": {"b":["b","h"], "d":["c","i"], "f":["d","j"], "h":["d"], "j":["e"], "l":["e","f","l"]},
    "10": {"a":["b","h"], "c":["c","i"], "e":["d","j"], "g":["d"], "i":["e"], "k":["e","f","l"]}
  },
  "init": [{"x":0, "state":["l"]}, {"x":1, "state":["k"]}],
  "projection": [
    [["l","h","f","d","b"], ["i","e","c"], ["j","d"]],
    [["i","e","c"], ["l","j","f","d"], ["e"]],
    [["j","d"], ["e"], ["l","f"]]
  ],
  "mirror": true
})";
}

inline constexpr uint64_t gamma_full_checksum = 0x76b7e57730dd2278ull;
inline constexpr uint64_t omega_full_checksum = 0x0fa9a4aa5438494bull;

}  // namespace tables

inline SubstSystem load_checked(const char* text, uint64_t checksum) {
  if (fnv1a(text) != checksum) throw SubstError("embedded table checksum mismatch");
  return subst_from_json(nlohmann::json::parse(text));
}

inline SubstSystem gamma_full_system() { return load_checked(tables::gamma_full_json(), tables::gamma_full_checksum); }
inline SubstSystem omega_full_system() { return load_checked(tables::omega_full_json(), tables::omega_full_checksum); }

// A, E, H collapse to 0 and I is identified with D.
inline SubstSystem gamma_system() {
  return quotient(gamma_full_system(), {"b", "c", "d", "f", "g"},
                  {{"a", {}}, {"e", {}}, {"h", {}}, {"i", {"d"}}}, "gamma");
}

// A, G -> K; B -> H; F -> L; C -> I + K; J -> D + H.
inline SubstSystem omega_system() {
  return quotient(omega_full_system(), {"d", "e", "h", "i", "k", "l"},
                  {{"a", {"k"}}, {"g", {"k"}}, {"b", {"h"}}, {"f", {"l"}}, {"c", {"i", "k"}}, {"j", {"d", "h"}}},
                  "omega");
}

inline void require_verified(const SubstSystem& s, const LinearCA& f, int depth = 4) {
  auto rep = verify_against_green(s, f, depth);
  if (!rep.ok)
    throw SubstError("system " + s.name + " disagrees with its automaton at (" + std::to_string(rep.first_mismatch->first) +
                     ", " + std::to_string(rep.first_mismatch->second) + ")");
}

// Loads a builtin system and checks it against its automaton at depth 4.
inline SubstSystem builtin_system(const std::string& name) {
  SubstSystem s;
  LinearCA f;
  if (name == "gamma") s = gamma_system(), f = builtin::gamma();
  else if (name == "gamma_full") s = gamma_full_system(), f = builtin::gamma();
  else if (name == "omega" || name == "gamma_inv") s = omega_system(), f = builtin::gamma_inv();
  else if (name == "omega_full") s = omega_full_system(), f = builtin::gamma_inv();
  else throw std::invalid_argument("unknown substitution system: " + name);
  require_verified(s, f);
  return s;
}

// ---------------------------------------------------------------------------
// finite patterns and induction replay

struct PatternKey {
  int64_t x, y;
  friend bool operator==(const PatternKey&, const PatternKey&) = default;
  friend auto operator<=>(const PatternKey&, const PatternKey&) = default;
};

// Cells with prescribed states (zeros included) at a given depth.
using Pattern = std::map<PatternKey, SState>;

// Children of every pattern cell one level deeper.
inline Pattern substitute(const SubstSystem& s, const Pattern& p) {
  Pattern out;
  for (auto& [k, st] : p)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) out[{2 * k.x + i, 2 * k.y + j}] = s.apply(i, j, st);
  return out;
}

struct InductionStep {
  int64_t underivable = 0;  // cells of the next pattern with no parent in the current one
  int64_t mismatches = 0;   // derived cells disagreeing with the next pattern
  std::vector<PatternKey> underivable_cells;
};

inline InductionStep compare_derived(const SubstSystem& s, const Pattern& cur, const Pattern& next) {
  InductionStep st;
  for (auto& [k, v] : next) {
    auto it = cur.find({floor_div(k.x, 2), floor_div(k.y, 2)});
    if (it == cur.end()) {
      ++st.underivable;
      st.underivable_cells.push_back(k);
    } else if (s.apply(static_cast<int>(floor_mod(k.x, 2)), static_cast<int>(floor_mod(k.y, 2)), it->second) != v) {
      ++st.mismatches;
    }
  }
  return st;
}

inline int64_t pattern_mismatches_direct(const SubstSystem& s, const Pattern& p, int depth) {
  int64_t bad = 0;
  for (auto& [k, v] : p)
    if (cell(s, k.x, k.y, depth) != v) ++bad;
  return bad;
}

// Rows r = 0 .. R-1 of the slope -1/2 chain X CF BD below the top-left corner,
// X = G on even rows and BDG on odd rows; R = (2^d - 4) / 3 - 1.
inline int64_t gamma_segment_rows(int d) { return ((int64_t{1} << d) - 4) / 3 - 1; }

inline Pattern gamma_segment_pattern(const SubstSystem& s, int d) {
  const int64_t N = int64_t{1} << d;
  const SState G = s.parse_state("G"), BDG = s.parse_state("BDG"), CF = s.parse_state("CF"), BD = s.parse_state("BD");
  Pattern p;
  for (int64_t r = 0; r < gamma_segment_rows(d); ++r) {
    const int64_t y = N - 1 - r;
    p[{2 * r, y}] = (r % 2 == 0) ? G : BDG;
    p[{2 * r + 1, y}] = CF;
    p[{2 * r + 2, y}] = BD;
  }
  return p;
}

// Triangle of the Omega system below the anchor (0, 2^{d-1}), in grid coordinates.
inline Pattern omega_triangle_pattern(const SubstSystem& s, int d) {
  if (d < 3) throw std::invalid_argument("triangle pattern needs depth >= 3");
  auto S = [&](const char* n) { return s.parse_state(n); };
  const int64_t N = int64_t{1} << d, h = N / 2, c = N / 3;
  Pattern p;
  for (int64_t x = 1; x <= c - 1; ++x)
    for (int64_t y = h - x + 1; y <= h + x / 2 - 1; ++y) p[{x, y}] = 0;
  p[{0, h}] = S("L");
  p[{1, h}] = S("K");
  const std::array<std::pair<const char*, const char*>, 4> pat = {
      {{"DH", "EIK"}, {"E", "HL"}, {"DL", "EIK"}, {"IK", "HL"}}};
  auto lower = [&](int64_t r, bool last_even) {
    p[{r, h - 1 - r}] = S(pat[r % 4].first);
    p[{r + 1, h - 1 - r}] = last_even ? S("I") : S(pat[r % 4].second);
  };
  if (d % 2 == 1) {
    for (int64_t r = 0; r <= c - 2; ++r) lower(r, false);
    p[{c - 1, h - c}] = S("E");
    p[{c, h - c}] = S("D");
    p[{c, h - c - 1}] = S("H");
    const int64_t J = (c - 2) / 2;
    for (int64_t j = 1; j <= J; ++j) {
      p[{2 * j, h + j}] = S("H");
      p[{2 * j + 1, h + j}] = S("K");
    }
    for (int64_t y = h - c + 1; y <= h + J; ++y) p[{c, y}] = S("DHL");
    p[{c, h + J + 1}] = S("DL");
  } else {
    for (int64_t r = 0; r <= c - 1; ++r) lower(r, r == c - 1);
    p[{c, h - c - 1}] = S("K");
    const int64_t J = (c - 1) / 2;
    for (int64_t j = 1; j <= J - 1; ++j) {
      p[{2 * j, h + j}] = S("H");
      p[{2 * j + 1, h + j}] = S("K");
    }
    p[{c - 1, h + J}] = S("H");
    p[{c, h + J}] = S("E");
    for (int64_t y = h - c + 1; y <= h + J - 1; ++y) p[{c, y}] = S("EK");
  }
  return p;
}

// ---------------------------------------------------------------------------
// assertions

struct AssertionReport {
  bool ok = false;
  std::vector<std::string> failures;
  std::map<std::string, int64_t> stats;

  void fail(const std::string& why) {
    ok = false;
    failures.push_back(why);
  }
};

inline bool has_letters(const SubstSystem& s, const std::vector<std::string>& need) {
  for (auto& l : need)
    if (std::find(s.letters.begin(), s.letters.end(), l) == s.letters.end()) return false;
  return true;
}

// Vertical axis alternates D/G and the diagonal alternates B/F at every scale;
// every reachable nonzero state other than BD reaches D.
inline AssertionReport check_assertion_i_report(const SubstSystem& s, int N) {
  AssertionReport rep;
  if (!has_letters(s, {"b", "d", "f", "g"})) {
    rep.fail("system lacks the letters B, D, F, G");
    return rep;
  }
  rep.ok = true;
  const SState D = s.parse_state("D"), G = s.parse_state("G"), B = s.parse_state("B"), F = s.parse_state("F"),
               BD = s.parse_state("BD");
  // recurrence: axis (0, 2m+j) is Q_{0j} of (0, m); diagonal (2m+i, 2m+i) is Q_{ii} of (m, m)
  if (s.init_at(0) != D) rep.fail("origin is not D");
  for (SState v : {D, G}) {
    if (s.apply(0, 0, v) != D) rep.fail("Q00 of " + s.state_name(v) + " is not D");
    if (s.apply(0, 1, v) != G) rep.fail("Q01 of " + s.state_name(v) + " is not G");
  }
  if (s.apply(1, 1, D) != F) rep.fail("Q11(D) is not F");
  for (SState v : {B, F}) {
    if (s.apply(0, 0, v) != B) rep.fail("Q00 of " + s.state_name(v) + " is not B");
    if (s.apply(1, 1, v) != F) rep.fail("Q11 of " + s.state_name(v) + " is not F");
  }
  // direct digit-path checks on every n below 2^12 and on n = 2^j - 1, 2^j, 2^j + 1
  const int depth = std::min(N, 62);
  std::set<int64_t> ns;
  for (int64_t n = 0; n < (int64_t{1} << std::min(depth, 12)); ++n) ns.insert(n);
  for (int j = 1; j < depth; ++j)
    for (int64_t dn : {-1, 0, 1}) ns.insert((int64_t{1} << j) + dn);
  int64_t checked = 0;
  for (int64_t n : ns) {
    if (n >= (int64_t{1} << depth)) continue;
    SState axis = cell(s, 0, n, depth), diag = cell(s, n, n, depth);
    SState want_axis = (n % 2 == 0) ? D : G;
    SState want_diag = n == 0 ? D : ((n % 2 == 0) ? B : F);
    if (axis != want_axis) rep.fail("axis cell (0, " + std::to_string(n) + ") is " + s.state_name(axis));
    if (diag != want_diag) rep.fail("diagonal cell (" + std::to_string(n) + ", " + std::to_string(n) + ") is " + s.state_name(diag));
    ++checked;
  }
  rep.stats["direct_cells"] = 2 * checked;
  TransitionGraph g = transition_graph(s);
  for (SState v : g.vertices) {
    if (v == BD) continue;
    if (!reaches(g, v, D)) rep.fail("D is not reachable from " + s.state_name(v));
  }
  rep.stats["states"] = static_cast<int64_t>(g.vertices.size());
  return rep;
}

inline bool check_assertion_i(const SubstSystem& s, int N) { return check_assertion_i_report(s, N).ok; }

// The X CF BD chain of slope -1/2 from the top-left corner: quadrant images as displayed,
// presence at depth 5, induction replay up to depth N, and direct presence at each depth.
inline AssertionReport check_assertion_ii_report(const SubstSystem& s, int N) {
  AssertionReport rep;
  if (!has_letters(s, {"b", "c", "d", "f", "g"})) {
    rep.fail("system lacks the letters B, C, D, F, G");
    return rep;
  }
  if (N < 5 || N > 40) {
    rep.fail("N must lie in [5, 40]");
    return rep;
  }
  rep.ok = true;
  auto S = [&](const char* n) { return s.parse_state(n); };
  // images shown as (top-left top-right / bottom-left bottom-right); top is j = 1
  struct Img {
    const char* from;
    const char *tl, *tr, *bl, *br;
  };
  for (auto& im : {Img{"BD", "0", "0", "BD", "0"}, Img{"CF", "BD", "0", "BDG", "CF"}, Img{"BDG", "G", "CF", "B", "C"},
                   Img{"G", "G", "CF", "D", "C"}}) {
    SState v = S(im.from);
    if (s.apply(0, 1, v) != S(im.tl) || s.apply(1, 1, v) != S(im.tr) || s.apply(0, 0, v) != S(im.bl) ||
        s.apply(1, 0, v) != S(im.br))
      rep.fail(std::string("quadrant image of ") + im.from + " differs from the displayed one");
  }
  Pattern base = gamma_segment_pattern(s, 5);
  SubstGrid g5 = expand(s, 5);
  for (auto& [k, v] : base)
    if (g5.at(k.x, k.y) != v) rep.fail("chain cell missing at depth 5");
  int64_t replayed = 0, boundary = 0, direct = 0;
  for (int d = 5; d < N; ++d) {
    Pattern cur = gamma_segment_pattern(s, d), next = gamma_segment_pattern(s, d + 1);
    InductionStep st = compare_derived(s, cur, next);
    if (st.mismatches) rep.fail("induction step " + std::to_string(d) + " has mismatches");
    // cells not derived from the chain itself must sit in the last three rows
    const int64_t Nn = int64_t{1} << (d + 1), R = gamma_segment_rows(d + 1);
    for (auto& k : st.underivable_cells) {
      int64_t r = Nn - 1 - k.y;
      if (r < R - 3) rep.fail("underivable chain cell far from the end at depth " + std::to_string(d + 1));
      if (cell(s, k.x, k.y, d + 1) != next.at(k)) rep.fail("chain end cell wrong at depth " + std::to_string(d + 1));
      ++boundary;
    }
    if (gamma_segment_rows(d + 1) < 2 * gamma_segment_rows(d)) rep.fail("chain does not double in length");
    replayed += static_cast<int64_t>(next.size());
  }
  for (int d = 5; d <= N; ++d) {
    Pattern p = gamma_segment_pattern(s, d);
    if (pattern_mismatches_direct(s, p, d)) rep.fail("chain absent at depth " + std::to_string(d));
    direct += static_cast<int64_t>(p.size());
  }
  rep.stats["replayed_cells"] = replayed;
  rep.stats["boundary_cells"] = boundary;
  rep.stats["direct_cells"] = direct;
  return rep;
}

inline bool check_assertion_ii(const SubstSystem& s, int N) { return check_assertion_ii_report(s, N).ok; }

// Lattice points strictly inside `t` (native orientation, lattice units) that pass B with the margin.
inline std::vector<LatticePoint> triangle_b_points(const LinearCA& f, const Triangle& t, int64_t margin) {
  auto pts = t.interior_lattice_points();
  std::map<int64_t, std::vector<int64_t>> by_row;
  for (auto [a, b] : pts) by_row[b].push_back(a);
  std::vector<LatticePoint> hits;
  if (by_row.empty()) return hits;
  GreenStream gs(f);
  for (int64_t y = 0; y <= by_row.rbegin()->first; ++y, gs.advance()) {
    auto it = by_row.find(y);
    if (it == by_row.end()) continue;
    GreenRow row = gs.row();
    for (auto a : it->second)
      if (check_b_row(row, {a, y, margin, margin})) hits.push_back({a, y});
  }
  return hits;
}

// Triangle (0,1), (2/3,1/3), (2/3,4/3) in figure orientation; `mirror` flips it to native x.
inline Triangle omega_triangle(bool mirror) {
  Triangle t(RatPoint{Rational(0), Rational(1)}, RatPoint{Rational(2, 3), Rational(1, 3)},
             RatPoint{Rational(2, 3), Rational(4, 3)});
  return mirror ? t.mirrored() : t;
}

// Induction replay of the alternating triangle patterns for depths 3..N plus the direct Green
// check that no lattice point inside the triangle passes B at scale 2^n with margin 2^m.
inline AssertionReport check_assertion_iii_report(const SubstSystem& s, int N, const LinearCA& f, int n = 8, int m = 6) {
  AssertionReport rep;
  if (!has_letters(s, {"d", "e", "h", "i", "k", "l"})) {
    // no triangle letters at all: nothing can be inside, the statement holds vacuously
    rep.ok = true;
    rep.stats["vacuous"] = 1;
    return rep;
  }
  if (N < 3 || N > 24) {
    rep.fail("N must lie in [3, 24]");
    return rep;
  }
  rep.ok = true;
  int64_t replayed = 0, direct = 0;
  for (int d = 3; d <= std::min(N, 9); ++d) {
    Pattern p = omega_triangle_pattern(s, d);
    SubstGrid g = expand(s, d);
    for (auto& [k, v] : p)
      if (g.at(k.x, k.y) != v) {
        rep.fail("triangle pattern differs from the expansion at depth " + std::to_string(d));
        break;
      }
    direct += static_cast<int64_t>(p.size());
  }
  for (int d = 3; d < N; ++d) {
    InductionStep st = compare_derived(s, omega_triangle_pattern(s, d), omega_triangle_pattern(s, d + 1));
    if (st.underivable || st.mismatches)
      rep.fail("triangle step " + std::to_string(d) + " -> " + std::to_string(d + 1) + " fails (" +
               std::to_string(st.underivable) + " underivable, " + std::to_string(st.mismatches) + " mismatches)");
    ++replayed;
  }
  const int64_t scale = int64_t{1} << n, margin = int64_t{1} << m;
  auto hits = triangle_b_points(f, omega_triangle(s.mirror).scaled(Rational(scale)), margin);
  if (!hits.empty()) rep.fail(std::to_string(hits.size()) + " lattice points inside the triangle pass B");
  rep.stats["replayed_steps"] = replayed;
  rep.stats["direct_cells"] = direct;
  rep.stats["interior_points"] = static_cast<int64_t>(omega_triangle(s.mirror).scaled(Rational(scale)).interior_lattice_points().size());
  rep.stats["interior_hits"] = static_cast<int64_t>(hits.size());
  return rep;
}

inline bool check_assertion_iii(const SubstSystem& s, int N) {
  return check_assertion_iii_report(s, N, builtin::gamma_inv()).ok;
}

}  // namespace lca

#endif
