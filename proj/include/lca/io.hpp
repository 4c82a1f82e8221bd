#ifndef LCA_IO_HPP
#define LCA_IO_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lca/automata.hpp"
#include "lca/green.hpp"
#include "lca/xp.hpp"

namespace lca {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json matrix_json(const MatF& m) { return m.to_rows(); }

inline nlohmann::json symbol_json(const LaurentMat& s) {
  nlohmann::json j;
  j["p"] = s.p;
  j["d"] = s.d;
  j["symbol"] = nlohmann::json::array();
  for (auto& [e, m] : s.coeffs) j["symbol"].push_back({{"exp", e}, {"matrix", matrix_json(m)}});
  return j;
}

inline LaurentMat symbol_from_json(const nlohmann::json& j) {
  const auto p = j.at("p").get<uint32_t>();
  const int d = j.at("d").get<int>();
  if (!is_prime(p)) throw FormatError("p must be prime");
  if (d < 1) throw FormatError("d must be positive");
  LaurentMat s(p, d);
  std::set<int64_t> seen;
  for (auto& term : j.at("symbol")) {
    const auto e = term.at("exp").get<int64_t>();
    if (!seen.insert(e).second) throw FormatError("duplicate exponent " + std::to_string(e));
    auto rows = term.at("matrix").get<std::vector<std::vector<int64_t>>>();
    if (static_cast<int>(rows.size()) != d) throw FormatError("matrix must be d x d");
    for (auto& r : rows)
      if (static_cast<int>(r.size()) != d) throw FormatError("matrix must be d x d");
    s.add_term(e, MatF::from_rows(p, rows));
  }
  return s;
}

inline nlohmann::json automaton_json(const AutomatonDef& a) {
  if (auto* l = std::get_if<LinearCA>(&a)) return symbol_json(l->symbol);
  const auto& g = std::get<GeneralCA>(a);
  return {{"q", g.q}, {"offsets", g.offsets}, {"table", g.table}};
}

// Symbol documents give linear CA; {"q", "offsets", "table"} gives a table CA.
inline AutomatonDef automaton_from_json(const nlohmann::json& j) {
  if (j.contains("symbol")) return LinearCA{symbol_from_json(j)};
  if (j.contains("table"))
    return GeneralCA(j.at("q").get<uint32_t>(), j.at("offsets").get<std::vector<int64_t>>(),
                     j.at("table").get<std::vector<uint32_t>>());
  throw FormatError("expected a symbol or a rule table");
}

inline nlohmann::json green_row_json(const GreenRow& row) {
  nlohmann::json j;
  j["y"] = row.y;
  j["cells"] = nlohmann::json::array();
  for (auto& [x, m] : row.cells) j["cells"].push_back({{"x", x}, {"matrix", matrix_json(m)}});
  return j;
}

inline nlohmann::json sample_json(const XpSample& s) {
  nlohmann::json j;
  j["p"] = s.p;
  j["n"] = s.n;
  j["k"] = s.k;
  j["y_max"] = s.y_max;
  j["points"] = nlohmann::json::array();
  for (auto [a, b] : s.points) j["points"].push_back({a, b});
  return j;
}

inline XpSample sample_from_json(const nlohmann::json& j) {
  XpSample s;
  s.p = j.at("p").get<uint32_t>();
  s.n = j.at("n").get<int>();
  s.k = j.at("k").get<int>();
  s.y_max = j.at("y_max").get<int64_t>();
  check_xp_params(s.p, s.n, s.k);
  for (auto& q : j.at("points")) s.points.insert({q.at(0).get<int64_t>(), q.at(1).get<int64_t>()});
  return s;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot read " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace lca

#endif
