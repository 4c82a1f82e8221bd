// lca: command-line front end for the lca library.
// Exit codes: 0 success or verdict true, 1 verdict false, 2 usage error, 3 budget exceeded.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lca/lca.hpp"

using namespace lca;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFalse = 1, kUsage = 2, kBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builtins that carry extra published data are re-checked whenever they are loaded.
void self_verify(const std::string& name, const LinearCA& f) {
  auto fail = [&](const std::string& what) { throw std::logic_error("builtin " + name + " failed self-check: " + what); };
  if (name == "gamma") {
    if (!annihilates(builtin::gamma_minpoly(), f.symbol)) fail("minimal polynomial");
    builtin_system("gamma");
  } else if (name == "gamma_inv") {
    if (!annihilates(builtin::gamma_inv_minpoly(), f.symbol)) fail("minimal polynomial");
    builtin_system("omega");
  } else if (name == "theta" || name == "theta_inv") {
    if (!(lm_mul(builtin::theta().symbol, builtin::theta_inv().symbol) == LaurentMat::identity(2, 2))) fail("inverse");
  } else if (name == "gamma_dual") {
    if (!(lm_mul(builtin::gamma().symbol, mirror(f).symbol) == LaurentMat::identity(2, 3))) fail("inverse");
  }
}

AutomatonDef load_automaton(const std::string& name, const std::string& file) {
  if (!file.empty()) return automaton_from_json(read_json_file(file));
  if (name.empty()) throw UsageError("one of --ca or --ca-file is required");
  auto a = builtin::by_name(name);
  if (auto* l = std::get_if<LinearCA>(&a)) self_verify(name, *l);
  return a;
}

LinearCA load_linear(const std::string& name, const std::string& file) {
  auto a = load_automaton(name, file);
  if (!std::holds_alternative<LinearCA>(a)) throw UsageError("this subcommand needs a linear automaton");
  return std::get<LinearCA>(a);
}

SubstSystem load_system(const std::string& name, const std::string& file) {
  if (!file.empty()) return subst_from_json(read_json_file(file));
  return builtin_system(name);
}

// Relative output paths land in $LCA_OUT_DIR when it is set.
std::string out_path(const std::string& path) {
  const char* dir = std::getenv("LCA_OUT_DIR");
  if (!dir || path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

void emit(const std::string& out, const std::string& bytes) {
  if (out.empty()) std::cout << bytes;
  else write_file(out_path(out), bytes);
}

void emit_json(const std::string& out, const json& j) { emit(out, j.dump(2) + "\n"); }

std::string grid_text(const SubstSystem& s, const SubstGrid& g) {
  size_t w = 1;
  for (auto st : g.data) w = std::max(w, s.state_name(st).size());
  std::string out;
  for (int64_t y = g.height - 1; y >= 0; --y) {
    for (int64_t x = g.x0; x < g.x0 + g.width; ++x) {
      std::string n = g.at(x, y) ? s.state_name(g.at(x, y)) : ".";
      out += n + std::string(w + 1 - n.size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

json report_json(const AssertionReport& r) {
  return {{"ok", r.ok}, {"failures", r.failures}, {"stats", r.stats}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green functions, B-properties, X_p samples and substitution systems of linear CA"};
  app.require_subcommand(1);
  uint64_t seed = 20240611;
  app.add_option("--seed", seed, "seed for randomized checks");

  std::string ca, ca_file, out, format = "json", system = "gamma", system_file;
  bool mirror_flag = false;
  int64_t rows = 64, y = 0, y_to = -1, x = 0, l = 0, r = 0, y_max = -1, trials = 256, tol = 2, denom_bound = 8;
  int p = 2, n = 8, k = 2, depth = 5, N = 0;
  std::string method = "power", which = "all";
  bool search = false, no_induction = false;

  auto add_ca = [&](CLI::App* sub) {
    sub->add_option("--ca", ca, "builtin automaton name");
    sub->add_option("--ca-file", ca_file, "automaton definition file");
  };

  auto* render = app.add_subcommand("render", "space-time diagram of a single spike as PGM");
  add_ca(render);
  render->add_option("--rows", rows)->check(CLI::Range(int64_t{1}, int64_t{1} << 16));
  render->add_option("--out", out, "output path (stdout if absent)");
  render->add_flag("--mirror", mirror_flag);

  auto* green = app.add_subcommand("green", "Green function rows");
  add_ca(green);
  green->add_option("--y", y)->check(CLI::NonNegativeNumber);
  green->add_option("--y-to", y_to, "last row (defaults to --y)");
  green->add_option("--method", method)->check(CLI::IsMember({"power", "minpoly"}));
  green->add_option("--out", out);

  auto* propb = app.add_subcommand("propb", "check B(x, y, l, r)");
  add_ca(propb);
  propb->add_option("--x", x);
  propb->add_option("--y", y)->check(CLI::NonNegativeNumber);
  propb->add_option("--l", l)->check(CLI::NonNegativeNumber);
  propb->add_option("--r", r)->check(CLI::NonNegativeNumber);
  propb->add_option("--coverage-trials", trials, "words tried by the coverage check (0 skips it)");

  auto* xp = app.add_subcommand("xp", "finite-scale X_p sample");
  add_ca(xp);
  xp->add_option("--p", p)->check(CLI::Range(2, 97));
  xp->add_option("--n", n)->check(CLI::Range(1, 20));
  xp->add_option("--k", k)->check(CLI::Range(1, 20));
  xp->add_option("--y-max", y_max, "last row (defaults to 2 p^n)");
  xp->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "pgm"}));
  xp->add_option("--out", out);
  xp->add_flag("--mirror", mirror_flag);

  auto* subst = app.add_subcommand("subst", "substitution systems");
  subst->require_subcommand(1);
  auto add_sys = [&](CLI::App* sub) {
    sub->add_option("--system", system, "gamma, gamma_full, omega or omega_full");
    sub->add_option("--file", system_file, "substitution table file");
  };
  auto* s_expand = subst->add_subcommand("expand", "expand to a given depth");
  add_sys(s_expand);
  s_expand->add_option("--depth", depth)->check(CLI::Range(0, 14));
  s_expand->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  s_expand->add_option("--out", out);
  auto* s_cell = subst->add_subcommand("cell", "state at one cell by digit path");
  add_sys(s_cell);
  s_cell->add_option("--x", x);
  s_cell->add_option("--y", y)->check(CLI::NonNegativeNumber);
  s_cell->add_option("--depth", depth)->check(CLI::Range(0, 62));
  auto* s_verify = subst->add_subcommand("verify", "compare the projection with the Green function");
  add_sys(s_verify);
  add_ca(s_verify);
  s_verify->add_option("--depth", depth)->check(CLI::Range(0, 12));
  auto* s_scc = subst->add_subcommand("scc", "transition graph components");
  add_sys(s_scc);
  auto* s_assert = subst->add_subcommand("assert", "assertions (i), (ii), (iii)");
  s_assert->add_option("--which", which)->check(CLI::IsMember({"i", "ii", "iii", "all"}));
  s_assert->add_option("--N", N, "depth bound (defaults 64, 20, 12)");

  auto* obstruct = app.add_subcommand("obstruct", "replay the final argument for a pair");
  obstruct->add_option("--f", ca, "simulating side")->required();
  obstruct->add_option("--g", system, "simulated side")->required();
  obstruct->add_option("--n", n)->check(CLI::Range(4, 10));
  obstruct->add_option("--denom-bound", denom_bound)->check(CLI::Range(int64_t{1}, int64_t{16}));
  obstruct->add_option("--tol", tol)->check(CLI::NonNegativeNumber);
  obstruct->add_flag("--search", search, "also run the exhaustive map search");
  obstruct->add_flag("--no-induction", no_induction, "skip the substitution-system evidence");
  obstruct->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*render) {
      auto f = load_linear(ca, ca_file);
      emit(out, spacetime_image(f, rows, mirror_flag).pgm());
      return kOk;
    }
    if (*green) {
      auto f = load_linear(ca, ca_file);
      if (y_to < 0) y_to = y;
      if (y_to < y) throw UsageError("--y-to must not be below --y");
      std::string text;
      std::optional<MinPoly> mp;
      if (method == "minpoly") {
        if (ca == "gamma") mp = builtin::gamma_minpoly();
        else if (ca == "gamma_inv") mp = builtin::gamma_inv_minpoly();
        else throw UsageError("--method minpoly is available for gamma and gamma_inv");
      }
      for (int64_t t = y; t <= y_to; ++t)
        text += green_row_json(mp ? green_via_minpoly(f, *mp, t) : green_row(f, t)).dump() + "\n";
      emit(out, text);
      return kOk;
    }
    if (*propb) {
      auto a = load_automaton(ca, ca_file);
      BSpec spec{x, y, l, r};
      const bool holds = check_b(a, spec);
      json j = {{"x", x}, {"y", y}, {"l", l}, {"r", r}, {"holds", holds}};
      if (auto* lin = std::get_if<LinearCA>(&a)) {
        if (auto mm = max_margins(*lin, x, y))
          j["max_margins"] = {{"l", mm->l ? json(*mm->l) : json("unbounded")},
                              {"r", mm->r ? json(*mm->r) : json("unbounded")}};
      }
      if (holds && trials > 0) {
        auto cov = word_coverage_report(a, spec, static_cast<uint64_t>(trials), seed);
        j["coverage"] = {{"words", cov.words_tried}, {"realized", cov.realized}};
      }
      std::cout << j.dump() << "\n";
      return holds ? kOk : kFalse;
    }
    if (*xp) {
      if (k > n) throw UsageError("need k <= n");
      auto f = load_linear(ca, ca_file);
      auto s = sample_xp(f, static_cast<uint32_t>(p), n, k, y_max);
      if (format == "json") emit(out, sample_json(s).dump() + "\n");
      else if (format == "csv") emit(out, sample_csv(s));
      else emit(out, sample_image(s, mirror_flag).pgm());
      return kOk;
    }
    if (*s_expand) {
      auto s = load_system(system, system_file);
      auto g = expand(s, depth);
      if (format == "text") {
        emit(out, grid_text(s, g));
      } else {
        json cells = json::array();
        for (int64_t yy = 0; yy < g.height; ++yy)
          for (int64_t xx = g.x0; xx < g.x0 + g.width; ++xx)
            if (g.at(xx, yy)) cells.push_back({xx, yy, s.state_name(g.at(xx, yy))});
        emit_json(out, {{"system", s.name}, {"depth", depth}, {"cells", cells}});
      }
      return kOk;
    }
    if (*s_cell) {
      auto s = load_system(system, system_file);
      std::cout << json{{"x", x}, {"y", y}, {"depth", depth}, {"state", s.state_name(cell(s, x, y, depth))}}.dump() << "\n";
      return kOk;
    }
    if (*s_verify) {
      auto s = load_system(system, system_file);
      if (ca.empty() && ca_file.empty()) ca = (system.rfind("omega", 0) == 0) ? "gamma_inv" : "gamma";
      auto rep = verify_against_green(s, load_linear(ca, ca_file), depth);
      json j = {{"system", s.name}, {"depth", depth}, {"ok", rep.ok}, {"compared", rep.compared}};
      if (rep.first_mismatch) j["first_mismatch"] = {rep.first_mismatch->first, rep.first_mismatch->second};
      std::cout << j.dump() << "\n";
      return rep.ok ? kOk : kFalse;
    }
    if (*s_scc) {
      auto s = load_system(system, system_file);
      auto g = transition_graph(s);
      json comps = json::array();
      for (auto& c : scc(g)) {
        json names = json::array();
        for (auto st : c) names.push_back(s.state_name(st));
        comps.push_back(names);
      }
      std::cout << json{{"system", s.name}, {"states", g.vertices.size()}, {"reaches_zero", g.reaches_zero},
                        {"components", comps}}.dump()
                << "\n";
      return kOk;
    }
    if (*s_assert) {
      json j;
      bool ok = true;
      if (which == "i" || which == "all") {
        auto rep = check_assertion_i_report(builtin_system("gamma"), N ? N : 64);
        j["i"] = report_json(rep);
        ok = ok && rep.ok;
      }
      if (which == "ii" || which == "all") {
        auto rep = check_assertion_ii_report(builtin_system("gamma"), N ? N : 20);
        j["ii"] = report_json(rep);
        ok = ok && rep.ok;
      }
      if (which == "iii" || which == "all") {
        auto rep = check_assertion_iii_report(builtin_system("omega"), N ? N : 12, builtin::gamma_inv());
        j["iii"] = report_json(rep);
        ok = ok && rep.ok;
      }
      j["ok"] = ok;
      std::cout << j.dump(2) << "\n";
      return ok ? kOk : kFalse;
    }
    if (*obstruct) {
      const std::string f_name = ca, g_name = system;
      auto f = load_linear(f_name, "");
      auto g = load_linear(g_name, "");
      auto sF = replay_sample(f, n), sG = replay_sample(g, n);
      ReplayOptions opt;
      opt.f_name = f_name;
      opt.g_name = g_name;
      opt.mirror = f_name.rfind("gamma", 0) == 0 && g_name.rfind("gamma", 0) == 0;
      opt.denom_bound = denom_bound;
      opt.tol = tol;
      InductionEvidence ev;
      const bool gamma_pair = f_name == "gamma" && (g_name == "gamma_inv" || g_name == "gamma_dual");
      if (gamma_pair && !no_induction) {
        ev = gamma_pair_evidence();
        opt.evidence = &ev;
      }
      auto v = replay_final_argument(sF, sG, opt);
      json j = v.json;
      j["n"] = n;
      if (search) {
        SearchOptions so;
        so.denom_bound = denom_bound;
        so.tol = tol;
        so.seed = seed;
        auto maps = search_pi(sF, sG, so);
        json found = json::array();
        for (auto& m : maps) found.push_back({to_string(m.alpha), to_string(m.beta), to_string(m.gamma)});
        j["search"] = {{"denom_bound", denom_bound}, {"tol", tol}, {"maps", found}};
      }
      emit_json(out, j);
      if (!v.error.empty()) return kFalse;
      return v.obstruction ? kOk : kFalse;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const AlgebraError& e) {
    std::cerr << "bad automaton: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "out of range: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kUsage;
  } catch (const SubstError& e) {
    std::cerr << "bad substitution system: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
