#include "rconley_app/app.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "rconley/error.hpp"
#include "rconley/harness.hpp"
#include "rconley/shiftequiv.hpp"
#include "rconley/version.hpp"

namespace rconley::app {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  return j.at(key);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& key, int lo) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > 1'000'000) throw ConfigError(key, "must be an integer >= " + std::to_string(lo));
  return static_cast<int>(x);
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

// Runs a library parser and reports its complaint against `key`.
template <class F>
auto parsed(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

struct Common {
  GridPtr grid;
  json out;
};

Common resolve_common(const json& raw, bool with_system, std::optional<std::uint64_t> seed_override) {
  Common c;
  c.grid = parsed("grid", [&] {
    const auto& g = require(raw, "", "grid");
    only_keys(g, "grid", {"lo", "hi", "subdivisions"});
    return Grid::from_json(g);
  });
  c.out["grid"] = c.grid->to_json();
  const auto noise = parsed("noise", [&] { return NoiseModel::from_json(require(raw, "", "noise")); });
  c.out["noise"] = noise.to_json();
  if (with_system) {
    const auto system = parsed("system", [&] { return MapFamily::from_json(require(raw, "", "system")); });
    if (system.dims() != c.grid->dims()) throw ConfigError("system", "dimension does not match the grid");
    if (system.noise_dims() != noise.dims()) {
      throw ConfigError("noise.dims", "system needs " + std::to_string(system.noise_dims()) + " noise coordinates");
    }
    c.out["system"] = system.to_json();
  }
  c.out["T"] = integer(require(raw, "", "T"), "T", 2);
  std::vector<std::uint64_t> seeds;
  if (seed_override) {
    seeds = {*seed_override};
  } else {
    const auto& s = require(raw, "", "seeds");
    if (!s.is_array() || s.empty()) throw ConfigError("seeds", "expected a nonempty array of seeds");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_number_integer() || s[i].get<long long>() < 0) throw ConfigError("seeds[" + std::to_string(i) + "]", "expected a nonnegative integer");
      seeds.push_back(s[i].get<std::uint64_t>());
    }
  }
  c.out["seeds"] = seeds;
  return c;
}

json resolve_region(const json& v, const std::string& key, const GridPtr& grid) {
  return parsed(key, [&] {
    const auto r = Region::from_json(v);
    r.boxes(grid);
    return r.to_json();
  });
}

json resolve_target(const json& v, const std::string& key, const GridPtr& grid) {
  return parsed(key, [&] {
    only_keys(v, key, {"point", "layers"});
    const auto t = InvTarget::from_json(v);
    t.boxes(grid);
    return t.to_json();
  });
}

double resolve_lambda(const json& raw, const std::string& key) {
  const double l = raw.contains("lambda") ? number(raw.at("lambda"), key) : 1.0;
  if (l < 0.0 || l > 1.0) throw ConfigError(key, "must lie in [0, 1]");
  return l;
}

std::vector<double> resolve_lambdas(const json& raw, const std::string& path) {
  const auto key = join(path, "lambdas");
  auto l = raw.contains("lambdas") ? numbers(raw.at("lambdas"), key) : std::vector<double>{1.0};
  for (double v : l) {
    if (v < 0.0 || v > 1.0) throw ConfigError(key, "values must lie in [0, 1]");
  }
  if (!std::is_sorted(l.begin(), l.end())) throw ConfigError(key, "must be sorted");
  return l;
}

const std::set<std::string> kVerdicts{"trivial-certified", "no-certificate", "nonempty-invariant-evidence"};

json resolve_expect(const json& v, const std::string& path) {
  only_keys(v, path, {"isolating", "block", "exit", "pair", "pair_dilation_in", "target", "certificate"});
  json out = json::object();
  for (const char* k : {"isolating", "block", "pair", "target"}) {
    if (v.contains(k)) out[k] = boolean(v.at(k), join(path, k));
  }
  if (v.contains("exit")) {
    const auto e = string(v.at("exit"), join(path, "exit"));
    if (e != "empty" && e != "nonempty") throw ConfigError(join(path, "exit"), "expected \"empty\" or \"nonempty\"");
    out["exit"] = e;
  }
  if (v.contains("pair_dilation_in")) {
    const auto& a = v.at("pair_dilation_in");
    if (!a.is_array() || a.empty()) throw ConfigError(join(path, "pair_dilation_in"), "expected a nonempty array");
    std::vector<int> ks;
    for (const auto& x : a) ks.push_back(integer(x, join(path, "pair_dilation_in"), 0));
    out["pair_dilation_in"] = ks;
  }
  if (v.contains("certificate")) {
    const auto c = string(v.at("certificate"), join(path, "certificate"));
    if (!kVerdicts.contains(c)) throw ConfigError(join(path, "certificate"), "unknown verdict '" + c + "'");
    out["certificate"] = c;
  }
  return out;
}

json resolve_case(const json& v, const std::string& path, const GridPtr& grid) {
  only_keys(v, path, {"name", "N", "target", "pair_dilation", "expect"});
  json out;
  const auto name = v.contains("name") ? string(v.at("name"), join(path, "name")) : std::string("case");
  if (name.empty() || !std::all_of(name.begin(), name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
      })) {
    throw ConfigError(join(path, "name"), "use letters, digits, '_' or '-'");
  }
  out["name"] = name;
  out["N"] = resolve_region(require(v, path, "N"), join(path, "N"), grid);
  if (v.contains("target")) out["target"] = resolve_target(v.at("target"), join(path, "target"), grid);
  out["pair_dilation"] = v.contains("pair_dilation") ? integer(v.at("pair_dilation"), join(path, "pair_dilation"), 0) : 2;
  out["expect"] = v.contains("expect") ? resolve_expect(v.at("expect"), join(path, "expect")) : json{{"isolating", true}};
  return out;
}

json resolve_output(const json& raw) {
  json out{{"csv", true}, {"plot", true}, {"witness", true}};
  if (!raw.contains("output")) return out;
  const auto& o = raw.at("output");
  only_keys(o, "output", {"csv", "plot", "witness"});
  for (const char* k : {"csv", "plot", "witness"}) {
    if (o.contains(k)) out[k] = boolean(o.at(k), join("output", k));
  }
  return out;
}

json resolve_checks(const json& v, const std::string& key) {
  static const std::set<std::string> allowed{"isolating", "block", "pair", "certificate", "witness"};
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a nonempty array of check names");
  std::set<std::string> out;
  for (const auto& c : v) {
    const auto s = string(c, key);
    if (!allowed.contains(s)) throw ConfigError(key, "unknown check '" + s + "'");
    out.insert(s);
  }
  return out;
}

json resolve_pair_spec(const json& v, const std::string& path, const GridPtr& grid) {
  only_keys(v, path, {"N", "dilation"});
  return {{"N", resolve_region(require(v, path, "N"), join(path, "N"), grid)},
          {"dilation", v.contains("dilation") ? integer(v.at("dilation"), join(path, "dilation"), 0) : 2}};
}

}  // namespace

json resolve_config(const json& raw, const std::string& command, std::optional<std::uint64_t> seed_override) {
  if (!raw.is_object()) throw ConfigError("<root>", "expected an object");
  if (command == "compute") {
    only_keys(raw, "", {"system", "noise", "grid", "T", "seeds", "lambda", "cases", "output"});
    auto c = resolve_common(raw, true, seed_override);
    c.out["lambda"] = resolve_lambda(raw, "lambda");
    const auto& cases = require(raw, "", "cases");
    if (!cases.is_array() || cases.empty()) throw ConfigError("cases", "expected a nonempty array");
    std::set<std::string> names;
    c.out["cases"] = json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
      auto r = resolve_case(cases[i], "cases[" + std::to_string(i) + "]", c.grid);
      if (!names.insert(r["name"].get<std::string>()).second) {
        throw ConfigError("cases[" + std::to_string(i) + "].name", "duplicate case name");
      }
      c.out["cases"].push_back(std::move(r));
    }
    c.out["output"] = resolve_output(raw);
    return c.out;
  }
  if (command == "sweep") {
    only_keys(raw, "", {"system", "noise", "grid", "T", "seeds", "sweep", "output"});
    auto c = resolve_common(raw, true, seed_override);
    const auto& s = require(raw, "", "sweep");
    only_keys(s, "sweep",
              {"lambdas", "N", "checks", "target", "asserted_nontrivial", "pair_dilation", "eps_layers"});
    json out{{"lambdas", resolve_lambdas(s, "sweep")},
             {"N", resolve_region(require(s, "sweep", "N"), "sweep.N", c.grid)},
             {"checks", s.contains("checks") ? resolve_checks(s.at("checks"), "sweep.checks") : json{"isolating"}},
             {"asserted_nontrivial",
              s.contains("asserted_nontrivial") ? boolean(s.at("asserted_nontrivial"), "sweep.asserted_nontrivial")
                                                : false},
             {"pair_dilation", s.contains("pair_dilation") ? integer(s.at("pair_dilation"), "sweep.pair_dilation", 0) : 2},
             {"eps_layers", s.contains("eps_layers") ? integer(s.at("eps_layers"), "sweep.eps_layers", 1) : 2}};
    if (s.contains("target")) out["target"] = resolve_target(s.at("target"), "sweep.target", c.grid);
    c.out["sweep"] = out;
    c.out["output"] = resolve_output(raw);
    return c.out;
  }
  if (command == "timeh") {
    only_keys(raw, "", {"noise", "grid", "T", "seeds", "timeh", "output"});
    auto c = resolve_common(raw, false, seed_override);
    const auto& s = require(raw, "", "timeh");
    only_keys(s, "timeh", {"field", "h_list", "integrator", "substeps", "N", "lambdas", "target"});
    const auto h_list = numbers(require(s, "timeh", "h_list"), "timeh.h_list");
    for (double h : h_list) {
      if (!(h > 0.0)) throw ConfigError("timeh.h_list", "steps must be positive");
    }
    const auto integrator = s.contains("integrator") ? string(s.at("integrator"), "timeh.integrator") : "euler";
    if (integrator != "euler" && integrator != "rk4") throw ConfigError("timeh.integrator", "expected euler or rk4");
    const int substeps = s.contains("substeps") ? integer(s.at("substeps"), "timeh.substeps", 1) : 1;
    const auto family = parsed("timeh.field", [&] {
      return MapFamily::from_json({{"kind", "time-h"},
                                   {"field", require(s, "timeh", "field")},
                                   {"h", h_list.front()},
                                   {"integrator", integrator},
                                   {"substeps", substeps}});
    });
    if (family.dims() != c.grid->dims()) throw ConfigError("timeh.field", "dimension does not match the grid");
    if (family.noise_dims() != c.out["noise"]["dims"].get<std::size_t>()) {
      throw ConfigError("noise.dims", "field needs " + std::to_string(family.noise_dims()) + " noise coordinates");
    }
    json out{{"field", family.to_json()["field"]},
             {"h_list", h_list},
             {"integrator", integrator},
             {"substeps", substeps},
             {"N", resolve_region(require(s, "timeh", "N"), "timeh.N", c.grid)},
             {"lambdas", resolve_lambdas(s, "timeh")}};
    if (s.contains("target")) out["target"] = resolve_target(s.at("target"), "timeh.target", c.grid);
    c.out["timeh"] = out;
    c.out["output"] = resolve_output(raw);
    return c.out;
  }
  if (command == "equiv") {
    only_keys(raw, "", {"system", "noise", "grid", "T", "seeds", "lambda", "equiv", "output"});
    auto c = resolve_common(raw, true, seed_override);
    c.out["lambda"] = resolve_lambda(raw, "lambda");
    const auto& s = require(raw, "", "equiv");
    only_keys(s, "equiv", {"first", "second", "eps_layers", "mutations"});
    c.out["equiv"] = {
        {"first", resolve_pair_spec(require(s, "equiv", "first"), "equiv.first", c.grid)},
        {"second", resolve_pair_spec(require(s, "equiv", "second"), "equiv.second", c.grid)},
        {"eps_layers", s.contains("eps_layers") ? integer(s.at("eps_layers"), "equiv.eps_layers", 1) : 2},
        {"mutations", s.contains("mutations") ? integer(s.at("mutations"), "equiv.mutations", 0) : 8}};
    c.out["output"] = resolve_output(raw);
    return c.out;
  }
  throw ConfigError("<command>", "unknown command '" + command + "'");
}

// ---------------------------------------------------------------------------

namespace {

SweepConfig base_sweep(const json& cfg) {
  SweepConfig s;
  if (cfg.contains("system")) s.system = MapFamily::from_json(cfg.at("system"));
  s.noise = NoiseModel::from_json(cfg.at("noise"));
  s.grid = Grid::from_json(cfg.at("grid"));
  s.half_window = cfg.at("T").get<int>();
  s.seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
  return s;
}

std::string rectangles_csv(const std::string& set, int t, const BoxSet& b) {
  std::ostringstream os;
  os.precision(17);
  const auto& g = *b.grid();
  b.for_each([&](BoxIndex i) {
    os << set << ',' << t << ',' << i;
    for (std::size_t d = 0; d < g.dims(); ++d) os << ',' << g.box_lo(i, d) << ',' << g.box_hi(i, d);
    os << '\n';
  });
  return os.str();
}

json rectangles(const BoxSet& b) {
  json out = json::array();
  const auto& g = *b.grid();
  b.for_each([&](BoxIndex i) {
    json r = json::array();
    for (std::size_t d = 0; d < g.dims(); ++d) r.push_back({g.box_lo(i, d), g.box_hi(i, d)});
    out.push_back(r);
  });
  return out;
}

// Box dumps of N, Inv, exit set and L for the first seed on the reliable range.
void dump_case(const SweepConfig& s, const json& out_cfg, const std::string& name, CommandResult& res) {
  const int T = s.half_window;
  const auto range = reliable_range(T);
  const auto e = build_enclosure(s.system.with_lambda(s.lambdas.front()), s.grid, sample_path(s.noise, s.seeds.front(), T));
  const auto n = FiberedSet::constant(s.n.boxes(s.grid), T);
  const auto inv = invariant_set(e, n).inv;
  const auto exits = exit_sets(e, n);
  std::optional<FiberedSet> l;
  try {
    l = build_filtration_pair(e, n, s.pair_dilation, range).l;
  } catch (const ConstructionError&) {
  }
  std::ostringstream csv;
  csv << "set,fiber,box";
  for (std::size_t d = 0; d < s.grid->dims(); ++d) csv << ",lo" << d << ",hi" << d;
  csv << '\n';
  json plot{{"grid", s.grid->to_json()}, {"seed", s.seeds.front()}, {"fibers", json::array()}};
  for (int t = range.lo; t <= range.hi; ++t) {
    csv << rectangles_csv("N", t, n[t]) << rectangles_csv("inv", t, inv[t]) << rectangles_csv("exit", t, exits[t]);
    json f{{"t", t}, {"N", rectangles(n[t])}, {"inv", rectangles(inv[t])}, {"exit", rectangles(exits[t])}};
    if (l) {
      csv << rectangles_csv("L", t, (*l)[t]);
      f["L"] = rectangles((*l)[t]);
    }
    plot["fibers"].push_back(f);
  }
  if (out_cfg.at("csv").get<bool>()) res.files[name + "_boxes.csv"] = csv.str();
  if (out_cfg.at("plot").get<bool>()) res.files[name + "_plot.json"] = plot.dump(1);
}

json evaluate(const json& expect, const EnsembleReport& rep, bool& all_ok) {
  json out = json::array();
  auto record = [&](const std::string& check, const json& expected, bool ok) {
    out.push_back({{"check", check}, {"expected", expected}, {"pass", ok}});
    all_ok = all_ok && ok;
  };
  const auto& cells = rep.cells;
  auto every = [&](auto pred) { return std::all_of(cells.begin(), cells.end(), pred); };
  for (const auto& [key, value] : expect.items()) {
    if (key == "isolating") {
      record(key, value, every([&](const CellResult& c) { return c.error.empty() && c.isolating == value.get<bool>(); }));
    } else if (key == "block") {
      record(key, value, every([&](const CellResult& c) { return c.block.value_or(false) == value.get<bool>(); }));
    } else if (key == "exit") {
      const bool empty = value == "empty";
      record(key, value, every([&](const CellResult& c) {
               return c.error.empty() && (empty ? c.exit_nonempty_fibers == 0 : c.exit_nonempty_fibers == c.exit_fibers);
             }));
    } else if (key == "pair") {
      record(key, value, every([&](const CellResult& c) { return c.pair_dilation.has_value() == value.get<bool>(); }));
    } else if (key == "pair_dilation_in") {
      const auto ks = value.get<std::vector<int>>();
      record(key, value, every([&](const CellResult& c) {
               return c.pair_dilation && std::find(ks.begin(), ks.end(), *c.pair_dilation) != ks.end();
             }));
    } else if (key == "target") {
      record(key, value,
             every([&](const CellResult& c) { return c.inv_in_target.value_or(false) == value.get<bool>(); }));
    } else if (key == "certificate") {
      record(key, value, every([&](const CellResult& c) {
               return c.certificate && to_string(c.certificate->verdict) == value.get<std::string>();
             }));
    }
  }
  return out;
}

CommandResult run_compute(const json& cfg) {
  CommandResult res;
  res.passed = true;
  json cases = json::array();
  for (const auto& c : cfg.at("cases")) {
    auto s = base_sweep(cfg);
    s.lambdas = {cfg.at("lambda").get<double>()};
    s.n = Region::from_json(c.at("N"));
    if (c.contains("target")) s.target = InvTarget::from_json(c.at("target"));
    s.pair_dilation = c.at("pair_dilation").get<int>();
    s.checks = {"isolating", "block", "pair", "certificate"};
    const auto rep = continuation_sweep(s);
    bool ok = true;
    auto j = rep.to_json();
    j.erase("config");
    j.erase("conclusions");
    j.erase("continuation_hypotheses_hold");
    j.erase("hypothesis_failures");
    j.erase("anomalies");
    const auto name = c.at("name").get<std::string>();
    j["name"] = name;
    j["expectations"] = evaluate(c.at("expect"), rep, ok);
    j["passed"] = ok;
    res.passed = res.passed && ok;
    cases.push_back(j);
    dump_case(s, cfg.at("output"), name, res);
  }
  res.report = {{"cases", cases}};
  return res;
}

CommandResult run_sweep(const json& cfg) {
  auto s = base_sweep(cfg);
  const auto& sw = cfg.at("sweep");
  s.lambdas = sw.at("lambdas").get<std::vector<double>>();
  s.n = Region::from_json(sw.at("N"));
  s.checks = sw.at("checks").get<std::set<std::string>>();
  if (sw.contains("target")) s.target = InvTarget::from_json(sw.at("target"));
  s.asserted_nontrivial = sw.at("asserted_nontrivial").get<bool>();
  s.pair_dilation = sw.at("pair_dilation").get<int>();
  s.eps_layers = sw.at("eps_layers").get<int>();
  const auto rep = continuation_sweep(s);
  auto j = rep.to_json();
  j.erase("config");
  CommandResult res;
  res.passed = rep.continuation_ok && rep.all_pass();
  res.report = j;
  return res;
}

CommandResult run_timeh(const json& cfg) {
  auto s = base_sweep(cfg);
  const auto& th = cfg.at("timeh");
  const auto family = MapFamily::from_json({{"kind", "time-h"},
                                            {"field", th.at("field")},
                                            {"h", th.at("h_list")[0]},
                                            {"integrator", th.at("integrator")},
                                            {"substeps", th.at("substeps")}});
  const auto& tm = std::get<TimeHMap>(family.kind());
  s.system = family;
  s.lambdas = th.at("lambdas").get<std::vector<double>>();
  s.n = Region::from_json(th.at("N"));
  if (th.contains("target")) s.target = InvTarget::from_json(th.at("target"));
  const auto h_list = th.at("h_list").get<std::vector<double>>();
  const auto rep = time_h_check(tm.field, h_list, tm.integrator, tm.substeps, s);
  auto j = rep.to_json();
  for (auto& e : j["entries"]) e["sweep"].erase("config");
  CommandResult res;
  res.passed = rep.inference && std::all_of(rep.entries.begin(), rep.entries.end(),
                                            [](const auto& e) { return e.sweep.all_pass(); });
  res.report = j;
  return res;
}

// Drops `count` edges of r spread over the checked fibers and re-verifies each time.
json mutation_checks(const EquivalenceWitness& w, FiberRange range, int count) {
  std::vector<std::tuple<int, BoxIndex, BoxIndex>> edges;
  for (int t = range.lo; t <= range.hi; ++t) {
    if (!w.r.defined(t)) continue;
    for (BoxIndex x : w.r.sources(t)) {
      if (x == w.c.star()) continue;
      for (BoxIndex y : w.r.image(t, x)) edges.emplace_back(t, x, y);
    }
  }
  json out = json::array();
  if (edges.empty() || count == 0) return out;
  const std::size_t step = std::max<std::size_t>(1, edges.size() / static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < edges.size() && out.size() < static_cast<std::size_t>(count); i += step) {
    const auto [t, x, y] = edges[i];
    GraphMap r = w.r;
    r.drop_edge(t, x, y);
    const auto rep = verify_witness(w.c, w.d, r, w.s, range);
    out.push_back({{"fiber", t}, {"source", x}, {"target", y}, {"failed_fibers", rep.count(Verdict::failed)}});
  }
  return out;
}

CommandResult run_equiv(const json& cfg) {
  const auto s = base_sweep(cfg);
  const auto& eq = cfg.at("equiv");
  const int T = s.half_window;
  const auto range = reliable_range(T);
  const auto family = s.system.with_lambda(cfg.at("lambda").get<double>());
  const auto n1 = FiberedSet::constant(Region::from_json(eq.at("first").at("N")).boxes(s.grid), T);
  const auto n2 = FiberedSet::constant(Region::from_json(eq.at("second").at("N")).boxes(s.grid), T);
  const int eps = eq.at("eps_layers").get<int>();
  const int mutations = eq.at("mutations").get<int>();
  CommandResult res;
  res.passed = true;
  json per = json::array();
  for (auto seed : s.seeds) {
    json entry{{"seed", seed}};
    bool ok = false;
    try {
      const auto e = build_enclosure(family, s.grid, sample_path(s.noise, seed, T));
      const auto p1 = build_filtration_pair(e, n1, eq.at("first").at("dilation").get<int>(), range);
      const auto p2 = build_filtration_pair(e, n2, eq.at("second").at("dilation").get<int>(), range);
      entry["first_dilation"] = p1.dilation;
      entry["second_dilation"] = p2.dilation;
      const auto w = equivalence_via_common_block(e, p1, p2, eps, range);
      entry["steps"] = w.steps;
      entry["verification"] = w.report.to_json();
      ok = w.report.verified();
      if (mutations > 0) {
        const auto m = mutation_checks(w, range, mutations);
        entry["mutations"] = m;
        const bool caught = !m.empty() && std::all_of(m.begin(), m.end(), [](const json& x) {
          return x.at("failed_fibers").get<int>() > 0;
        });
        entry["mutations_caught"] = caught;
        ok = ok && caught;
      }
      if (cfg.at("output").at("witness").get<bool>()) {
        res.files["witness_seed" + std::to_string(seed) + ".json"] = w.to_json().dump();
      }
    } catch (const ConstructionError& ex) {
      entry["error"] = ex.what();
    }
    entry["passed"] = ok;
    res.passed = res.passed && ok;
    per.push_back(entry);
  }
  res.report = {{"seeds", per}};
  return res;
}

}  // namespace

CommandResult run_command(const std::string& command, const json& resolved) {
  CommandResult res;
  if (command == "compute") {
    res = run_compute(resolved);
  } else if (command == "sweep") {
    res = run_sweep(resolved);
  } else if (command == "timeh") {
    res = run_timeh(resolved);
  } else if (command == "equiv") {
    res = run_equiv(resolved);
  } else {
    throw ConfigError("<command>", "unknown command '" + command + "'");
  }
  res.report = {{"tool", "rconley"},
                {"version", kVersion},
                {"command", command},
                {"config", resolved},
                {"result", std::move(res.report)},
                {"passed", res.passed}};
  return res;
}

ReplayResult verify_report(const json& report) {
  ReplayResult out;
  if (report.contains("r") && report.contains("s") && report.contains("c") && report.contains("d")) {
    const auto w = EquivalenceWitness::from_json(report);
    const auto rep = verify_witness(w.c, w.d, w.r, w.s, w.report.range);
    out.identical = rep.to_json() == w.report.to_json();
    out.witnesses_ok = out.identical && rep.verified();
    out.detail = out.identical ? "witness verdicts reproduced" : "witness verdicts differ on replay";
    return out;
  }
  if (!report.contains("command") || !report.contains("config")) {
    throw ConfigError("<report>", "not a report: missing command or config");
  }
  const auto command = report.at("command").get<std::string>();
  const auto resolved = resolve_config(report.at("config"), command);
  const auto again = run_command(command, resolved);
  out.identical = again.report.dump() == report.dump();
  out.detail = out.identical ? "report reproduced byte for byte" : "re-run differs from the stored report";
  return out;
}

}  // namespace rconley::app
