#include "rconley/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rconley/error.hpp"
#include "rconley/parallel.hpp"
#include "rconley/shiftequiv.hpp"

namespace rconley {

namespace {

const std::set<std::string> kChecks{"isolating", "block", "pair", "certificate", "witness"};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <class T>
T field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + "." + key + ": missing");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(where + "." + key + ": wrong type");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Region Region::ball(std::vector<double> center, double radius) {
  if (!(radius >= 0.0)) throw InputError("region.ball.radius: must be nonnegative");
  Region r;
  r.shape_ = Shape::ball;
  r.a_ = std::move(center);
  r.radius_ = radius;
  return r;
}

Region Region::product(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) throw InputError("region.product: lo and hi differ in length");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw InputError("region.product: lo must not exceed hi");
  }
  Region r;
  r.shape_ = Shape::product;
  r.a_ = std::move(lo);
  r.b_ = std::move(hi);
  return r;
}

BoxSet Region::boxes(const GridPtr& grid) const {
  if (a_.size() != grid->dims()) {
    throw InputError("region: dimension " + std::to_string(a_.size()) + " does not match grid dimension " +
                     std::to_string(grid->dims()));
  }
  if (shape_ == Shape::ball) return boxes_meeting_ball(grid, a_, radius_);
  return boxes_meeting_product(grid, a_, b_);
}

nlohmann::json Region::to_json() const {
  if (shape_ == Shape::ball) return {{"ball", {{"center", a_}, {"radius", radius_}}}};
  return {{"product", {{"lo", a_}, {"hi", b_}}}};
}

Region Region::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) throw InputError("region: expected one of ball, product, interval");
  if (j.contains("ball")) {
    const auto& b = j.at("ball");
    return ball(field<std::vector<double>>(b, "center", "region.ball"), field<double>(b, "radius", "region.ball"));
  }
  if (j.contains("product")) {
    const auto& p = j.at("product");
    return product(field<std::vector<double>>(p, "lo", "region.product"),
                   field<std::vector<double>>(p, "hi", "region.product"));
  }
  if (j.contains("interval")) {
    const auto v = field<std::vector<double>>(j, "interval", "region");
    if (v.size() != 2) throw InputError("region.interval: expected [lo, hi]");
    return product({v[0]}, {v[1]});
  }
  throw InputError("region." + j.begin().key() + ": unknown shape");
}

BoxSet InvTarget::boxes(const GridPtr& grid) const {
  if (point.size() != grid->dims()) throw InputError("target.point: dimension does not match grid");
  BoxSet s(grid);
  s.insert(grid->locate(point));
  return dilate(s, layers);
}

nlohmann::json InvTarget::to_json() const { return {{"point", point}, {"layers", layers}}; }

InvTarget InvTarget::from_json(const nlohmann::json& j) {
  InvTarget t{field<std::vector<double>>(j, "point", "target"), field<int>(j, "layers", "target")};
  if (t.layers < 0) throw InputError("target.layers: must be nonnegative");
  return t;
}

// ---------------------------------------------------------------------------

void SweepConfig::validate() const {
  if (!grid) throw InputError("grid: missing");
  if (half_window < 2) throw InputError("T: must be at least 2");
  if (lambdas.empty()) throw InputError("lambdas: need at least one value");
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw InputError("lambdas: values must lie in [0, 1]");
  }
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw InputError("lambdas: must be sorted");
  if (seeds.empty()) throw InputError("seeds: need at least one seed");
  for (const auto& c : checks) {
    if (!kChecks.contains(c)) throw InputError("checks: unknown check '" + c + "'");
  }
  if (system.dims() != grid->dims()) throw InputError("system: dimension does not match grid");
  if (system.noise_dims() != noise.dims()) throw InputError("noise.dims: system needs " +
                                                            std::to_string(system.noise_dims()));
  if (pair_dilation < 0) throw InputError("pair_dilation: must be nonnegative");
  if (eps_layers < 1) throw InputError("eps_layers: must be at least 1");
  n.boxes(grid);
  if (target) target->boxes(grid);
}

nlohmann::json SweepConfig::to_json() const {
  nlohmann::json j{{"system", system.to_json()},
                   {"noise", noise.to_json()},
                   {"grid", grid->to_json()},
                   {"T", half_window},
                   {"lambdas", lambdas},
                   {"seeds", seeds},
                   {"N", n.to_json()},
                   {"checks", checks},
                   {"pair_dilation", pair_dilation},
                   {"eps_layers", eps_layers},
                   {"asserted_nontrivial", asserted_nontrivial}};
  if (target) j["target"] = target->to_json();
  return j;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  SweepConfig c;
  c.system = MapFamily::from_json(j.at("system"));
  c.noise = NoiseModel::from_json(j.at("noise"));
  c.grid = Grid::from_json(j.at("grid"));
  c.half_window = field<int>(j, "T", "sweep");
  c.lambdas = field<std::vector<double>>(j, "lambdas", "sweep");
  c.seeds = field<std::vector<std::uint64_t>>(j, "seeds", "sweep");
  c.n = Region::from_json(j.at("N"));
  c.checks = field<std::set<std::string>>(j, "checks", "sweep");
  c.pair_dilation = j.value("pair_dilation", 2);
  c.eps_layers = j.value("eps_layers", 2);
  c.asserted_nontrivial = j.value("asserted_nontrivial", false);
  if (j.contains("target")) c.target = InvTarget::from_json(j.at("target"));
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------

bool CellResult::passed_check(const std::string& check) const {
  if (!error.empty()) return false;
  if (check == "isolating") return isolating;
  if (check == "target") return inv_in_target.value_or(true);
  if (check == "block") return block.value_or(false);
  if (check == "pair") return pair_dilation.has_value();
  if (check == "certificate") return certificate.has_value();
  if (check == "witness") return witness.value_or(false);
  throw InputError("unknown check '" + check + "'");
}

bool CellResult::passed(const std::set<std::string>& checks) const {
  return passed_check("target") &&
         std::all_of(checks.begin(), checks.end(), [&](const auto& c) { return passed_check(c); });
}

nlohmann::json CellResult::to_json() const {
  nlohmann::json j{{"lambda", lambda},
                   {"seed", seed},
                   {"isolating", isolating},
                   {"inv_boxes_fiber0", inv_boxes},
                   {"inv_nonempty", inv_nonempty},
                   {"exit_nonempty_fibers", exit_nonempty_fibers},
                   {"exit_fibers", exit_fibers}};
  if (isolating_failure) j["isolating_first_failure"] = *isolating_failure;
  if (inv_in_target) j["inv_in_target"] = *inv_in_target;
  if (block) j["block"] = *block;
  if (pair_dilation) j["pair_dilation"] = *pair_dilation;
  if (certificate) {
    j["certificate"] = to_string(certificate->verdict);
    if (certificate->horizon) j["certificate_horizon"] = *certificate->horizon;
  }
  if (witness) j["witness"] = *witness;
  if (!pair_error.empty()) j["pair_error"] = pair_error;
  if (!error.empty()) j["error"] = error;
  return j;
}

nlohmann::json WazewskiReport::to_json() const {
  return {{"verdict", verdict},
          {"conclusion", conclusion},
          {"basis", basis},
          {"ergodicity", ergodicity},
          {"measured_nonempty_fraction", nonempty_fraction},
          {"paths", paths}};
}

WazewskiReport wazewski_report(std::span<const IndexCertificate> certs, std::span<const InvResult> invs,
                               const NoiseModel& model, bool continuation_ok, bool asserted_nontrivial) {
  WazewskiReport r;
  r.paths = static_cast<int>(invs.size());
  int nonempty = 0;
  for (const auto& inv : invs) {
    bool all = true;
    for (int t = inv.reliable.lo; t <= inv.reliable.hi; ++t) all = all && inv.inv[t].has_boxes();
    nonempty += all;
  }
  r.nonempty_fraction = invs.empty() ? 0.0 : static_cast<double>(nonempty) / static_cast<double>(invs.size());
  r.ergodicity = model.ergodic_by_construction()
                     ? "noise steps are i.i.d. by construction, so the shift is ergodic"
                     : "ergodicity of the noise model is not established; the almost-sure reading does not apply";
  const bool trivial = std::any_of(certs.begin(), certs.end(),
                                   [](const auto& c) { return c.verdict == IndexVerdict::trivial_certified; });
  if (trivial) {
    r.verdict = "index trivial";
    r.basis = "a triviality certificate was found";
    return r;
  }
  if (!continuation_ok) {
    r.verdict = "no conclusion";
    r.basis = "isolating hypotheses failed";
    return r;
  }
  if (asserted_nontrivial) {
    r.basis = "nontrivial index asserted by the user";
  } else if (!certs.empty()) {
    r.basis = "no triviality certificate on any path";
  } else {
    r.verdict = "no conclusion";
    r.basis = "no certificate computed and no user assertion";
    return r;
  }
  r.conclusion = true;
  r.verdict = "nonempty invariant set expected a.s.";
  return r;
}

WazewskiReport wazewski_report(const IndexCertificate& cert, const InvResult& inv, const NoiseModel& model,
                               bool continuation_ok, bool asserted_nontrivial) {
  return wazewski_report(std::span<const IndexCertificate>(&cert, 1), std::span<const InvResult>(&inv, 1), model,
                         continuation_ok, asserted_nontrivial);
}

// ---------------------------------------------------------------------------

double EnsembleReport::pass_fraction(const std::string& check) const {
  if (cells.empty()) return 0.0;
  const auto n = std::count_if(cells.begin(), cells.end(), [&](const auto& c) { return c.passed_check(check); });
  return static_cast<double>(n) / static_cast<double>(cells.size());
}

bool EnsembleReport::all_pass() const {
  return !cells.empty() &&
         std::all_of(cells.begin(), cells.end(), [&](const auto& c) { return c.passed(checks); });
}

nlohmann::json EnsembleReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : cells) per.push_back(c.to_json());
  nlohmann::json fractions = nlohmann::json::object();
  for (const auto& c : checks) fractions[c] = pass_fraction(c);
  if (!config.is_null() && config.contains("target")) fractions["target"] = pass_fraction("target");
  std::size_t lo = cells.empty() ? 0 : cells.front().inv_boxes;
  std::size_t hi = 0;
  double sum = 0.0;
  for (const auto& c : cells) {
    lo = std::min(lo, c.inv_boxes);
    hi = std::max(hi, c.inv_boxes);
    sum += static_cast<double>(c.inv_boxes);
  }
  nlohmann::json j{{"config", config},
                   {"cells", per},
                   {"aggregate",
                    {{"cells", cells.size()},
                     {"pass_fraction", fractions},
                     {"inv_boxes_fiber0",
                      {{"min", lo}, {"max", hi}, {"mean", cells.empty() ? 0.0 : sum / cells.size()}}},
                     {"all_pass", all_pass()}}},
                   {"continuation_hypotheses_hold", continuation_ok},
                   {"hypothesis_failures", hypothesis_failures},
                   {"conclusions", conclusions},
                   {"anomalies", anomalies}};
  if (wazewski) j["wazewski"] = wazewski->to_json();
  return j;
}

namespace {

struct CellWork {
  CellResult result;
  std::optional<InvResult> inv;
};

CellWork run_cell(const SweepConfig& cfg, const BoxSet& n0, double lambda, std::uint64_t seed) {
  CellWork w;
  w.result.lambda = lambda;
  w.result.seed = seed;
  try {
    const int T = cfg.half_window;
    const FiberRange range = reliable_range(T);
    const auto path = sample_path(cfg.noise, seed, T);
    const auto e = build_enclosure(cfg.system.with_lambda(lambda), cfg.grid, path);
    const auto n = FiberedSet::constant(n0, T);
    auto inv = invariant_set(e, n);
    const auto iso = is_isolating_neighborhood(inv, n);
    auto& r = w.result;
    r.isolating = iso.all_pass(range);
    r.isolating_failure = iso.first_failure(range);
    r.inv_boxes = inv.inv[0].size();
    r.inv_nonempty = true;
    for (int t = range.lo; t <= range.hi; ++t) r.inv_nonempty = r.inv_nonempty && inv.inv[t].has_boxes();
    if (cfg.target) r.inv_in_target = inv.inv[0].subset_of(cfg.target->boxes(cfg.grid));
    const auto exits = exit_sets(e, n);
    for (int t = -T; t < T; ++t) {
      ++r.exit_fibers;
      r.exit_nonempty_fibers += exits[t].has_boxes() ? 1 : 0;
    }
    const auto& ck = cfg.checks;
    if (ck.contains("block")) r.block = is_isolating_block(e, n).all_pass(range);
    if (ck.contains("pair") || ck.contains("certificate") || ck.contains("witness")) {
      try {
        const auto p = build_filtration_pair(e, n, cfg.pair_dilation, range);
        r.pair_dilation = p.dilation;
        if (ck.contains("certificate")) r.certificate = index_certificate(pointed_map(e, p), range);
        if (ck.contains("witness")) {
          try {
            r.witness = equivalence_via_common_block(e, p, p, cfg.eps_layers, range).report.verified();
          } catch (const ConstructionError& ex) {
            r.witness = false;
            r.pair_error = std::string("witness: ") + ex.what();
          }
        }
      } catch (const ConstructionError& ex) {
        r.pair_error = ex.what();
      }
    }
    w.inv = std::move(inv);
  } catch (const std::exception& ex) {
    w.result.error = ex.what();
  }
  return w;
}

}  // namespace

EnsembleReport continuation_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const BoxSet n0 = cfg.n.boxes(cfg.grid);
  const std::size_t nl = cfg.lambdas.size();
  const std::size_t ns = cfg.seeds.size();
  std::vector<CellWork> work(nl * ns);
  parallel_for(work.size(), [&](std::size_t i) {
    work[i] = run_cell(cfg, n0, cfg.lambdas[i / ns], cfg.seeds[i % ns]);
  });

  EnsembleReport rep;
  rep.config = cfg.to_json();
  rep.checks = cfg.checks;
  rep.continuation_ok = true;
  for (const auto& w : work) {
    const auto& c = w.result;
    rep.cells.push_back(c);
    if (!c.error.empty() && !w.inv) {
      rep.continuation_ok = false;
      rep.hypothesis_failures.push_back("lambda=" + fmt(c.lambda) + " seed=" + std::to_string(c.seed) +
                                        ": " + c.error);
    } else if (!c.isolating) {
      rep.continuation_ok = false;
      rep.hypothesis_failures.push_back("lambda=" + fmt(c.lambda) + " seed=" + std::to_string(c.seed) +
                                        ": not isolating at fiber " +
                                        (c.isolating_failure ? std::to_string(*c.isolating_failure) : "?"));
    }
  }

  // Certificates should not flip between trivial and nontrivial along lambda.
  for (std::size_t s = 0; s < ns && rep.continuation_ok; ++s) {
    std::optional<bool> first;
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& c = work[l * ns + s].result;
      if (!c.certificate) continue;
      const bool trivial = c.certificate->verdict == IndexVerdict::trivial_certified;
      if (!first) first = trivial;
      if (*first != trivial) {
        rep.anomalies.push_back("seed=" + std::to_string(cfg.seeds[s]) + ": triviality certificate flips at lambda=" +
                                fmt(cfg.lambdas[l]));
        break;
      }
    }
  }

  if (rep.continuation_ok) {
    std::string grid = "{";
    for (std::size_t l = 0; l < nl; ++l) grid += (l ? ", " : "") + fmt(cfg.lambdas[l]);
    grid += "}";
    rep.conclusions.push_back(
        "continuation property: N is a random isolating neighborhood for every lambda in " + grid +
        " on every sampled path, so h(S_lambda, phi_lambda) = h(S_0, phi_0) across the grid; continuity in lambda "
        "between grid points is assumed, not tested");
  }

  std::vector<IndexCertificate> certs;
  std::vector<InvResult> invs;
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& w = work[s];
    if (w.result.certificate) certs.push_back(*w.result.certificate);
    if (w.inv) invs.push_back(*w.inv);
  }
  rep.wazewski = wazewski_report(certs, invs, cfg.noise, rep.continuation_ok, cfg.asserted_nontrivial);
  if (rep.wazewski->conclusion) {
    rep.conclusions.push_back("Wazewski property: " + rep.wazewski->verdict + " (" + rep.wazewski->basis + "; " +
                              rep.wazewski->ergodicity + ")");
  }
  return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json TimeHReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json rej = nlohmann::json::array();
    for (const auto& [seed, t] : e.rejections) rej.push_back({{"seed", seed}, {"fiber", t}});
    per.push_back({{"h", e.h}, {"isolating", e.isolating()}, {"rejections", rej}, {"sweep", e.sweep.to_json()}});
  }
  return {{"entries", per}, {"inference", inference}, {"conclusions", conclusions}, {"caveats", caveats}};
}

TimeHReport time_h_check(const OdeField& field, std::span<const double> h_list, Integrator integrator, int substeps,
                         const SweepConfig& rest) {
  if (h_list.empty()) throw InputError("h_list: need at least one step");
  for (double h : h_list) {
    if (!(h > 0.0)) throw InputError("h_list: steps must be positive");
  }
  if (substeps < 1) throw InputError("substeps: must be at least 1");
  TimeHReport rep;
  bool all = true;
  for (double h : h_list) {
    SweepConfig cfg = rest;
    cfg.system = MapFamily(TimeHMap{field, h, substeps, integrator}, rest.system.lambda());
    TimeHEntry entry;
    entry.h = h;
    entry.sweep = continuation_sweep(cfg);
    const BoxSet n0 = cfg.n.boxes(cfg.grid);
    const auto centers = n0.indices();
    for (double lambda : cfg.lambdas) {
      const auto f = cfg.system.with_lambda(lambda);
      for (auto seed : cfg.seeds) {
        const auto path = sample_path(cfg.noise, seed, cfg.half_window);
        for (int t = -cfg.half_window; t < cfg.half_window; ++t) {
          const bool bad = std::any_of(centers.begin(), centers.end(), [&](BoxIndex b) {
            const auto y = f(cfg.grid->center(b), path.value(t));
            return std::any_of(y.begin(), y.end(), [](double v) { return !std::isfinite(v) || std::abs(v) > 1e12; });
          });
          if (bad) entry.rejections.emplace_back(seed, t);
        }
      }
    }
    std::sort(entry.rejections.begin(), entry.rejections.end());
    entry.rejections.erase(std::unique(entry.rejections.begin(), entry.rejections.end()), entry.rejections.end());
    all = all && entry.isolating() && entry.rejections.empty();
    rep.entries.push_back(std::move(entry));
  }
  rep.caveats.push_back("time-h maps come from a fixed-step integrator that is not validated against the flow");
  rep.caveats.push_back(
      "continuity of t -> N(theta_t omega) is assumed, not verified; the flow-to-time-h direction is an inference");
  if (all) {
    rep.inference = true;
    std::string hs;
    for (double h : h_list) hs += (hs.empty() ? "" : ", ") + fmt(h);
    rep.conclusions.push_back("N is isolating for the time-h maps with h in {" + hs +
                              "} on every sampled path, so N is inferred to isolate an invariant set of the flow");
  }
  return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json PerturbationReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j{{"delta", e.delta}, {"metric", e.metric}, {"holds", e.holds}, {"reported_pass", e.reported_pass}};
    if (e.failing_fiber) j["failing_fiber"] = *e.failing_fiber;
    per.push_back(j);
  }
  nlohmann::json j{{"entries", per}, {"monotone", monotone}};
  j["robustness_radius"] = radius ? nlohmann::json(*radius) : nlohmann::json(nullptr);
  j["cutoff"] = cutoff ? nlohmann::json(*cutoff) : nlohmann::json(nullptr);
  return j;
}

PerturbationReport perturbation_sweep(const FiberedEnclosure& base, std::span<const double> deltas,
                                      const FiltrationPair& p, FiberRange range, int samples) {
  if (!verify_filtration_pair(base, p).valid_on(range)) {
    throw InputError("perturbation_sweep: the pair is not verified for the base map");
  }
  std::vector<double> sorted(deltas.begin(), deltas.end());
  for (double d : sorted) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InputError("perturbation_sweep: deltas must be finite and >= 0");
  }
  std::sort(sorted.begin(), sorted.end());
  PerturbationReport rep;
  rep.entries.resize(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    std::vector<double> bump(base.family().dims(), 0.0);
    bump[0] = sorted[i];
    const auto r = robustness_check(base, p, base.family().with_offset(bump), range, samples);
    rep.entries[i] = {sorted[i], r.metric, r.holds, false, r.failing_fiber};
  });
  bool ok = true;
  for (auto& e : rep.entries) {
    if (!e.holds && !rep.cutoff) rep.cutoff = e.delta;
    ok = ok && e.holds;
    e.reported_pass = ok;
    if (ok) rep.radius = e.delta;
    if (e.holds && rep.cutoff) rep.monotone = false;
  }
  return rep;
}

}  // namespace rconley
