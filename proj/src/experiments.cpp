#include "minharm/experiments.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "minharm/asymptotics.hpp"
#include "minharm/genlap.hpp"
#include "minharm/mse.hpp"
#include "minharm/rng.hpp"
#include "minharm/viscosity.hpp"

namespace minharm {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

std::string fmt(std::int64_t x) { return std::to_string(x); }

// Tracks defaults so the manifest can echo the fully resolved config.
class Resolver {
 public:
  explicit Resolver(std::map<std::string, std::string> kv)
      : kv_(std::move(kv)) {}

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    const std::string v = it == kv_.end() ? fallback : it->second;
    resolved_[key] = v;
    return v;
  }

  double num(const std::string& key, double fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      resolved_[key] = fmt(fallback);
      return fallback;
    }
    resolved_[key] = it->second;
    return parse_num(key, it->second);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      resolved_[key] = fmt(fallback);
      return fallback;
    }
    resolved_[key] = it->second;
    try {
      return std::stoll(it->second);
    } catch (...) {
      throw ConfigError("config key '" + key + "': bad integer '" +
                        it->second + "'");
    }
  }

  bool flag(const std::string& key, bool fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      resolved_[key] = fallback ? "true" : "false";
      return fallback;
    }
    resolved_[key] = it->second;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw ConfigError("config key '" + key + "': expected true/false");
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  const std::map<std::string, std::string>& raw() const { return kv_; }
  const std::map<std::string, std::string>& resolved() const {
    return resolved_;
  }

  static double parse_num(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (...) {
      throw ConfigError("config key '" + key + "': bad number '" + v + "'");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::map<std::string, std::string> resolved_;
};

const std::set<std::string> kGlobalKeys = {
    "experiment",      "out.dir",           "sampler.method",
    "sampler.samples", "sampler.seed",      "sampler.antithetic",
    "schedule.r0",     "schedule.ratio",    "schedule.count",
    "alpha.plus",      "alpha.minus",       "points.mode",
    "points.list",     "points.count",      "points.seed",
    "points.margin",   "surface.name",
};

struct ExperimentSpec {
  std::string name;
  std::set<std::string> keys;  // experiment-specific keys
  bool uses_surface = false;
  std::string columns;
  std::string blurb;
};

const std::vector<ExperimentSpec>& experiment_specs() {
  static const std::vector<ExperimentSpec> specs = {
      {"genlap-convergence",
       {"assert.expect_verdict"},
       true,
       "point,r,value,std_error,fit_a,fit_p,fit_b,verdict",
       "per-radius generalized-Laplacian estimates of the jump function with "
       "the fitted radius power law and verdict"},
      {"lemma2",
       {"fit.budget_growth", "assert.h_rel_tol", "assert.h_sigma"},
       true,
       "point,r,diff,std_error,dropped,H_hat,H_std_error,H_exact,c_n",
       "ball volume splits per radius with the recovered mean curvature "
       "against the exact oracle"},
      {"theorem-roundtrip",
       {"assert.expect", "classify.b_tol"},
       true,
       "point,verdict,harmonic,sign,fit_a,fit_p,fit_b,b_tol",
       "point classification: generalized harmonic vs divergent, compared "
       "with the expected answer for the surface"},
      {"mse-solve",
       {"grid.m", "grid.ax", "grid.bx", "grid.ay", "grid.by",
        "boundary.preset", "boundary.cx", "boundary.cy", "boundary.c0",
        "solver.tol", "solver.max_iter", "assert.max_error"},
       false,
       "iter,residual",
       "Dirichlet solve of the minimal surface equation; writes the solution "
       "grid next to the results"},
      {"viscosity-audit",
       {"grid.m", "grid.ax", "grid.bx", "grid.ay", "grid.by", "field.preset",
        "field.file", "dict.k", "dict.levels", "dict.rotations",
        "dict.rho_cells", "dict.tol_f", "assert.max_sub", "assert.max_super",
        "assert.min_sub", "assert.min_super"},
       false,
       "i,j,side,eig1,eig2,theta,F_value",
       "touching-paraboloid audit violations for the minimal-surface "
       "operator on a grid field"},
      {"taylor-check",
       {"phi.preset", "phi.d", "assert.order", "assert.order_tol",
        "assert.coeff", "assert.coeff_rel_tol"},
       false,
       "r,average,std_error,expected,residual",
       "ball averages of a test profile against the second-order Taylor "
       "prediction, with the fitted residual order"},
  };
  return specs;
}

const ExperimentSpec& spec_for(const std::string& name) {
  for (const auto& s : experiment_specs())
    if (s.name == name) return s;
  throw ConfigError("unknown experiment '" + name + "'");
}

void validate_keys(const std::map<std::string, std::string>& kv,
                   const ExperimentSpec& spec) {
  for (const auto& [k, v] : kv) {
    if (kGlobalKeys.count(k) || spec.keys.count(k)) continue;
    if (spec.uses_surface && k.rfind("surface.", 0) == 0) continue;
    throw ConfigError("unknown config key '" + k + "' for experiment '" +
                      spec.name + "'");
  }
}

SamplerConfig sampler_from(Resolver& cfg) {
  SamplerConfig sc;
  const std::string m = cfg.str("sampler.method", "monte_carlo");
  if (m == "monte_carlo")
    sc.method = SampleMethod::MonteCarlo;
  else if (m == "low_discrepancy")
    sc.method = SampleMethod::LowDiscrepancy;
  else if (m == "tensor_grid")
    sc.method = SampleMethod::TensorGrid;
  else
    throw ConfigError("sampler.method: unknown method '" + m + "'");
  sc.samples = cfg.integer("sampler.samples", 1'000'000);
  if (sc.samples < 1) throw ConfigError("sampler.samples: must be >= 1");
  sc.seed = static_cast<std::uint64_t>(cfg.integer("sampler.seed", 0));
  sc.antithetic = cfg.flag("sampler.antithetic", true);
  return sc;
}

struct SurfaceSetup {
  std::string name;
  GraphSurface surface;
  std::map<std::string, double> params;
  bool minimal = false;
  std::function<double(const Vec&)> exact_H;  // null when unknown
};

SurfaceSetup surface_from(Resolver& cfg) {
  const std::string name = cfg.str("surface.name", "halfspace");
  std::map<std::string, double> params;
  for (const auto& [k, v] : cfg.raw()) {
    if (k.rfind("surface.", 0) == 0 && k != "surface.name")
      params[k.substr(8)] = Resolver::parse_num(k, v);
  }
  const CatalogEntry& entry = catalog_entry(name);
  const std::map<std::string, double> full =
      resolve_surface_params(name, params);
  // echo the fully resolved parameter set (defaults included) for the manifest
  for (const auto& [k, v] : full) cfg.num("surface." + k, v);
  GraphSurface s = entry.make(full);
  SurfaceSetup setup{name, s, full, entry.minimal, nullptr};
  if (entry.exact_mean_curvature) {
    auto oracle = entry.exact_mean_curvature;
    setup.exact_H = [oracle, full](const Vec& x) { return oracle(full, x); };
  }
  return setup;
}

std::vector<Vec> parse_point_list(const std::string& text, int d) {
  std::vector<Vec> pts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    std::stringstream ps(part);
    std::string coord;
    std::vector<double> xs;
    while (std::getline(ps, coord, ',')) {
      xs.push_back(Resolver::parse_num("points.list", trim(coord)));
    }
    if (static_cast<int>(xs.size()) != d)
      throw ConfigError("points.list: expected " + std::to_string(d) +
                        " coordinates per point");
    pts.push_back(Eigen::Map<Vec>(xs.data(), d));
  }
  if (pts.empty()) throw ConfigError("points.list: no points given");
  return pts;
}

std::vector<Vec> points_from(Resolver& cfg, const GraphSurface& s) {
  const int d = s.base_dim();
  const std::string mode = cfg.str("points.mode", "auto");
  const std::string list = cfg.str("points.list", "");
  const int count = static_cast<int>(cfg.integer("points.count", 5));
  const std::uint64_t seed =
      static_cast<std::uint64_t>(cfg.integer("points.seed", 1));
  const double margin = cfg.num("points.margin", 0.5);

  const Vec origin = Vec::Zero(d);
  const bool origin_ok = s.domain().boundary_distance(origin) > 0.0;
  if (mode == "origin" || (mode == "auto" && list.empty() && origin_ok))
    return {origin};
  if (mode == "list" || (mode == "auto" && !list.empty()))
    return parse_point_list(list, d);
  if (mode == "random" || mode == "auto")
    return interior_points(s.domain(), count, seed, margin);
  throw ConfigError("points.mode: unknown mode '" + mode + "'");
}

RadiusSchedule schedule_for(Resolver& cfg, const GraphSurface& s,
                            const Vec& point) {
  RadiusSchedule sched;
  sched.r0 = cfg.num("schedule.r0", 0.0);
  sched.ratio = cfg.num("schedule.ratio", 0.6);
  sched.count = static_cast<int>(cfg.integer("schedule.count", 6));
  if (sched.r0 <= 0.0) {
    const double dist = s.domain().boundary_distance(point);
    if (dist <= 0.0) throw ConfigError("point lies on the chart boundary");
    sched.r0 = 0.2 * dist;
  }
  return sched;
}

std::string point_str(const Vec& p) {
  std::string s;
  for (int i = 0; i < p.size(); ++i) {
    if (i) s += " ";
    s += fmt(p[i]);
  }
  return s;
}

std::string csv_escape(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_csv(const fs::path& path, const Table& t) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) os << ",";
    os << csv_escape(t.columns[i]);
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << csv_escape(row[i]);
    }
    os << "\n";
  }
}

const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Converges:
      return "converges";
    case Verdict::Diverges:
      return "diverges";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

struct ExperimentOutput {
  Table table;
  std::vector<Assertion> assertions;
  nlohmann::json extra;  // experiment-specific summary numbers
  // extra files to write: name -> writer
  std::vector<std::pair<std::string, std::function<void(const fs::path&)>>>
      files;
};

void assert_that(ExperimentOutput& out, const std::string& name, bool pass,
                 const std::string& detail) {
  out.assertions.push_back({name, pass, detail});
}

// ---- genlap-convergence ---------------------------------------------------

ExperimentOutput run_genlap_convergence(Resolver& cfg) {
  ExperimentOutput out;
  out.table.columns = {"point", "r",     "value", "std_error",
                       "fit_a", "fit_p", "fit_b", "verdict"};
  const SamplerConfig sc = sampler_from(cfg);
  SurfaceSetup setup = surface_from(cfg);
  const double ap = cfg.num("alpha.plus", 1.0);
  const double am = cfg.num("alpha.minus", -1.0);
  const std::string expect = cfg.str("assert.expect_verdict", "any");
  if (expect != "any" && expect != "converges" && expect != "diverges" &&
      expect != "inconclusive")
    throw ConfigError("assert.expect_verdict: bad value '" + expect + "'");

  const std::vector<Vec> pts = points_from(cfg, setup.surface);
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    const RadiusSchedule sched = schedule_for(cfg, setup.surface, pts[pi]);
    JumpFunction jump{setup.surface, ap, am};
    const Vec x = setup.surface.lift(pts[pi]);
    SamplerConfig sc_p = sc;
    sc_p.seed = substream_seed(sc.seed, 1000 + pi);
    const GenLapEstimate est = gen_laplacian_limit(
        [&jump](const Vec& y) { return jump(y); }, x, sched, sc_p);
    for (const auto& row : est.per_radius) {
      out.table.add({point_str(pts[pi]), fmt(row.r), fmt(row.value),
                     fmt(row.std_error), fmt(est.a), fmt(est.p), fmt(est.b),
                     verdict_str(est.verdict)});
    }
    if (expect != "any") {
      const bool ok = expect == verdict_str(est.verdict);
      assert_that(out, "verdict[" + point_str(pts[pi]) + "]", ok,
                  std::string("got ") + verdict_str(est.verdict) +
                      ", expected " + expect);
    }
  }
  return out;
}

// ---- lemma2 ---------------------------------------------------------------

ExperimentOutput run_lemma2(Resolver& cfg) {
  ExperimentOutput out;
  out.table.columns = {"point",     "r",     "diff",        "std_error",
                       "dropped",   "H_hat", "H_std_error", "H_exact",
                       "c_n"};
  const SamplerConfig sc = sampler_from(cfg);
  SurfaceSetup setup = surface_from(cfg);
  ExpansionOptions opts;
  opts.budget_growth = cfg.num("fit.budget_growth", 1.0);
  const double rel_tol = cfg.num("assert.h_rel_tol", 0.03);
  const double sigma = cfg.num("assert.h_sigma", 3.0);

  const std::vector<Vec> pts = points_from(cfg, setup.surface);
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    const RadiusSchedule sched = schedule_for(cfg, setup.surface, pts[pi]);
    SamplerConfig sc_p = sc;
    sc_p.seed = substream_seed(sc.seed, 1000 + pi);
    ExpansionOptions o = opts;
    double H_exact = std::numeric_limits<double>::quiet_NaN();
    if (setup.exact_H) {
      H_exact = setup.exact_H(pts[pi]);
      o.exact_mean_curvature = H_exact;
    }
    const ExpansionFit fit =
        expansion_fit(setup.surface, pts[pi], sched, sc_p, o);
    for (const auto& row : fit.per_radius) {
      out.table.add({point_str(pts[pi]), fmt(row.r), fmt(row.diff),
                     fmt(row.std_error), row.dropped ? "true" : "false",
                     fmt(fit.H_hat), fmt(fit.H_std_error), fmt(H_exact),
                     fmt(fit.c_used)});
    }
    if (setup.exact_H) {
      const double err = std::abs(fit.H_hat - H_exact);
      const double band =
          std::max(rel_tol * std::abs(H_exact), sigma * fit.H_std_error);
      assert_that(out, "H_recovery[" + point_str(pts[pi]) + "]", err <= band,
                  "H_hat=" + fmt(fit.H_hat) + " H_exact=" + fmt(H_exact) +
                      " err=" + fmt(err) + " band=" + fmt(band));
    }
  }
  return out;
}

// ---- theorem-roundtrip ------------------------------------------------------

ExperimentOutput run_theorem_roundtrip(Resolver& cfg) {
  ExperimentOutput out;
  out.table.columns = {"point", "verdict", "harmonic", "sign",
                       "fit_a", "fit_p",   "fit_b",    "b_tol"};
  const SamplerConfig sc = sampler_from(cfg);
  SurfaceSetup setup = surface_from(cfg);
  ClassifyOptions copts;
  copts.alpha_plus = cfg.num("alpha.plus", 1.0);
  copts.alpha_minus = cfg.num("alpha.minus", -1.0);
  copts.b_abs_tol = cfg.num("classify.b_tol", -1.0);
  std::string expect = cfg.str("assert.expect", "auto");
  if (expect == "auto") expect = setup.minimal ? "harmonic" : "not_harmonic";
  if (expect != "harmonic" && expect != "not_harmonic")
    throw ConfigError("assert.expect: bad value '" + expect + "'");

  const std::vector<Vec> pts = points_from(cfg, setup.surface);
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    const RadiusSchedule sched = schedule_for(cfg, setup.surface, pts[pi]);
    SamplerConfig sc_p = sc;
    sc_p.seed = substream_seed(sc.seed, 1000 + pi);
    const Classification cls =
        classify_point(setup.surface, pts[pi], sched, sc_p, copts);
    const GenLapEstimate& e = cls.estimate;
    out.table.add({point_str(pts[pi]), verdict_str(e.verdict),
                   cls.harmonic ? "true" : "false", fmt((double)cls.sign),
                   fmt(e.a), fmt(e.p), fmt(e.b), fmt(cls.b_tol_used)});
    const bool ok = cls.harmonic == (expect == "harmonic");
    assert_that(out, "classification[" + point_str(pts[pi]) + "]", ok,
                std::string("harmonic=") + (cls.harmonic ? "true" : "false") +
                    " expected " + expect);
  }
  return out;
}

// ---- mse-solve --------------------------------------------------------------

std::function<double(double, double)> boundary_preset(Resolver& cfg,
                                                      std::string* name) {
  const std::string preset = cfg.str("boundary.preset", "scherk");
  *name = preset;
  if (preset == "scherk") {
    return [](double x, double y) {
      return std::log(std::cos(x)) - std::log(std::cos(y));
    };
  }
  if (preset == "affine") {
    const double cx = cfg.num("boundary.cx", 0.3);
    const double cy = cfg.num("boundary.cy", -0.2);
    const double c0 = cfg.num("boundary.c0", 0.1);
    return [cx, cy, c0](double x, double y) { return cx * x + cy * y + c0; };
  }
  if (preset == "sine") {
    return [](double x, double y) {
      return 0.25 * std::sin(2.0 * x) * std::cos(y);
    };
  }
  throw ConfigError("boundary.preset: unknown preset '" + preset + "'");
}

ExperimentOutput run_mse_solve(Resolver& cfg) {
  ExperimentOutput out;
  out.table.columns = {"iter", "residual"};
  const int m = static_cast<int>(cfg.integer("grid.m", 33));
  const Grid2D grid(cfg.num("grid.ax", -1.0), cfg.num("grid.bx", 1.0),
                    cfg.num("grid.ay", -1.0), cfg.num("grid.by", 1.0), m);
  std::string preset;
  auto f = boundary_preset(cfg, &preset);
  SolveOptions sopts;
  sopts.tol = cfg.num("solver.tol", 1e-10);
  sopts.max_iter = static_cast<int>(cfg.integer("solver.max_iter", 50));
  const double max_error = cfg.num("assert.max_error", -1.0);

  const GridFunction boundary = GridFunction::boundary_sample(grid, f);
  try {
    auto [phi, rep] = solve_mse(boundary, std::nullopt, sopts);
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
      out.table.add({fmt((std::int64_t)i), fmt(rep.residual_history[i])});
    assert_that(out, "converged", rep.converged,
                "final residual " + fmt(rep.residual_history.back()));
    out.extra["iterations"] = rep.iterations;
    out.extra["final_residual"] = rep.residual_history.back();
    out.extra["gradient_bound"] = rep.gradient_bound;
    out.extra["lambda"] = rep.lambda;
    out.extra["Lambda"] = rep.Lambda;
    if (preset == "scherk" || preset == "affine") {
      double err = 0.0;
      for (int j = 1; j + 1 < m; ++j)
        for (int i = 1; i + 1 < m; ++i)
          err = std::max(err,
                         std::abs(phi(i, j) - f(grid.x(i), grid.y(j))));
      out.extra["max_error_vs_exact"] = err;
      if (max_error > 0.0)
        assert_that(out, "max_error", err <= max_error,
                    "err=" + fmt(err) + " limit=" + fmt(max_error));
    }
    GridFunction sol = phi;
    out.files.emplace_back("solution.grid", [sol](const fs::path& p) {
      save_grid(sol, p);
    });
  } catch (const NoConvergenceError& e) {
    for (std::size_t i = 0; i < e.report.residual_history.size(); ++i)
      out.table.add({fmt((std::int64_t)i), fmt(e.report.residual_history[i])});
    assert_that(out, "converged", false, e.what());
  }
  return out;
}

// ---- viscosity-audit ---------------------------------------------------------

ExperimentOutput run_viscosity_audit(Resolver& cfg) {
  ExperimentOutput out;
  out.table.columns = {"i", "j", "side", "eig1", "eig2", "theta", "F_value"};
  const int m = static_cast<int>(cfg.integer("grid.m", 33));
  const Grid2D grid(cfg.num("grid.ax", -1.0), cfg.num("grid.bx", 1.0),
                    cfg.num("grid.ay", -1.0), cfg.num("grid.by", 1.0), m);
  const std::string preset = cfg.str("field.preset", "scherk");
  const std::string file = cfg.str("field.file", "");

  std::optional<GridFunction> u;
  if (!file.empty()) {
    u = load_grid(fs::path(file));
  } else if (preset == "scherk") {
    u = GridFunction::sample(grid, [](double x, double y) {
      return std::log(std::cos(x)) - std::log(std::cos(y));
    });
  } else if (preset == "convex") {
    u = GridFunction::sample(
        grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  } else if (preset == "affine") {
    u = GridFunction::sample(
        grid, [](double x, double y) { return 0.3 * x - 0.2 * y + 0.1; });
  } else {
    throw ConfigError("field.preset: unknown preset '" + preset + "'");
  }

  DictionaryParams dp;
  dp.K = cfg.num("dict.k", 10.0);
  dp.levels = static_cast<int>(cfg.integer("dict.levels", 7));
  dp.rotations = static_cast<int>(cfg.integer("dict.rotations", 8));
  dp.rho_cells = cfg.num("dict.rho_cells", 2.5);
  dp.tol_F = cfg.num("dict.tol_f", -1.0);

  const EllipticOperator op = mse_operator(2, max_gradient(*u));
  const AuditReport rep = viscosity_audit(*u, op, dp);
  for (const auto& v : rep.violations) {
    out.table.add({fmt((std::int64_t)v.i), fmt((std::int64_t)v.j),
                   v.subsolution_side ? "sub" : "super", fmt(v.eig1),
                   fmt(v.eig2), fmt(v.theta), fmt(v.F_value)});
  }
  out.extra["nodes_audited"] = rep.nodes_audited;
  out.extra["paraboloids_per_node"] = rep.paraboloids_per_node;
  out.extra["tol_F"] = rep.tol_F;
  out.extra["sub_violations"] = rep.subsolution_violations();
  out.extra["super_violations"] = rep.supersolution_violations();

  const auto lim = [&](const char* key, std::int64_t dflt) {
    return cfg.integer(key, dflt);
  };
  const std::int64_t max_sub = lim("assert.max_sub", 0);
  const std::int64_t max_super = lim("assert.max_super", 0);
  const std::int64_t min_sub = lim("assert.min_sub", 0);
  const std::int64_t min_super = lim("assert.min_super", 0);
  const int sub = rep.subsolution_violations();
  const int super = rep.supersolution_violations();
  assert_that(out, "subsolution_side",
              sub >= min_sub && (max_sub < 0 || sub <= max_sub),
              "violations=" + fmt((std::int64_t)sub));
  assert_that(out, "supersolution_side",
              super >= min_super && (max_super < 0 || super <= max_super),
              "violations=" + fmt((std::int64_t)super));
  return out;
}

// ---- taylor-check -------------------------------------------------------------

ExperimentOutput run_taylor_check(Resolver& cfg) {
  ExperimentOutput out;
  out.table.columns = {"r", "average", "std_error", "expected", "residual"};
  const SamplerConfig sc = sampler_from(cfg);
  const int d = static_cast<int>(cfg.integer("phi.d", 2));
  const std::string preset = cfg.str("phi.preset", "x1_pow4");
  std::function<double(const Vec&)> phi;
  if (preset == "x1_pow4")
    phi = [](const Vec& x) { return x[0] * x[0] * x[0] * x[0]; };
  else if (preset == "x1_pow3")
    phi = [](const Vec& x) { return x[0] * x[0] * x[0]; };
  else if (preset == "quadratic")
    phi = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  else
    throw ConfigError("phi.preset: unknown preset '" + preset + "'");

  RadiusSchedule sched;
  sched.r0 = cfg.num("schedule.r0", 0.8);
  sched.ratio = cfg.num("schedule.ratio", 0.7);
  sched.count = static_cast<int>(cfg.integer("schedule.count", 6));

  const TaylorCheck check = taylor_average_check(phi, d, sched, sc);
  for (const auto& row : check.per_radius) {
    out.table.add({fmt(row.r), fmt(row.average), fmt(row.std_error),
                   fmt(row.expected), fmt(row.residual)});
  }
  out.extra["fitted_order"] = check.fitted_order;
  out.extra["fitted_coeff"] = check.fitted_coeff;
  out.extra["noise_limited"] = check.noise_limited;

  const double want_order = cfg.num("assert.order", -1.0);
  const double order_tol = cfg.num("assert.order_tol", 0.3);
  if (want_order > 0.0) {
    const bool ok = !check.noise_limited &&
                    std::abs(check.fitted_order - want_order) <= order_tol;
    assert_that(out, "fitted_order", ok,
                "order=" + fmt(check.fitted_order) + " want=" +
                    fmt(want_order) + "+-" + fmt(order_tol));
  }
  const double want_coeff = cfg.num("assert.coeff", 0.0);
  const double coeff_rel = cfg.num("assert.coeff_rel_tol", 0.02);
  if (want_coeff != 0.0) {
    const bool ok =
        !check.noise_limited &&
        std::abs(check.fitted_coeff - want_coeff) <=
            coeff_rel * std::abs(want_coeff);
    assert_that(out, "fitted_coeff", ok,
                "coeff=" + fmt(check.fitted_coeff) + " want=" +
                    fmt(want_coeff) + " rel_tol=" + fmt(coeff_rel));
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    if (kv.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

bool RunArtifacts::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

RunArtifacts run_experiment(const std::map<std::string, std::string>& config,
                            const CliOverrides& overrides) {
  std::map<std::string, std::string> kv = config;
  if (overrides.out_dir) kv["out.dir"] = *overrides.out_dir;
  if (overrides.seed)
    kv["sampler.seed"] = std::to_string(*overrides.seed);
  if (overrides.budget)
    kv["sampler.samples"] = std::to_string(*overrides.budget);

  auto it = kv.find("experiment");
  if (it == kv.end()) throw ConfigError("missing required key 'experiment'");
  const ExperimentSpec& spec = spec_for(it->second);
  validate_keys(kv, spec);

  Resolver cfg(kv);
  cfg.str("experiment", spec.name);
  const std::string out_dir = cfg.str("out.dir", "results");

  ExperimentOutput output;
  if (spec.name == "genlap-convergence")
    output = run_genlap_convergence(cfg);
  else if (spec.name == "lemma2")
    output = run_lemma2(cfg);
  else if (spec.name == "theorem-roundtrip")
    output = run_theorem_roundtrip(cfg);
  else if (spec.name == "mse-solve")
    output = run_mse_solve(cfg);
  else if (spec.name == "viscosity-audit")
    output = run_viscosity_audit(cfg);
  else if (spec.name == "taylor-check")
    output = run_taylor_check(cfg);

  RunArtifacts art;
  art.experiment = spec.name;
  art.assertions = output.assertions;
  art.out_dir = fs::path(out_dir);
  fs::create_directories(art.out_dir);

  art.results_csv = art.out_dir / "results.csv";
  write_csv(art.results_csv, output.table);

  art.manifest_cfg = art.out_dir / "manifest.cfg";
  {
    std::ofstream os(art.manifest_cfg);
    for (const auto& [k, v] : cfg.resolved()) os << k << " = " << v << "\n";
  }

  art.summary_json = art.out_dir / "summary.json";
  {
    nlohmann::json j;
    j["experiment"] = spec.name;
    j["pass"] = art.all_pass();
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : art.assertions) {
      j["assertions"].push_back(
          {{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    }
    for (auto& [k, v] : output.extra.items()) j[k] = v;
    std::ofstream os(art.summary_json);
    os << j.dump(2) << "\n";
  }

  for (const auto& [name, writer] : output.files) writer(art.out_dir / name);
  return art;
}

std::string list_experiments_text() {
  std::vector<const ExperimentSpec*> sorted;
  for (const auto& e : experiment_specs()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const ExperimentSpec* a, const ExperimentSpec* b) {
              return a->name < b->name;
            });
  std::string s;
  for (const ExperimentSpec* e : sorted) {
    s += e->name + "\n";
    s += "  " + e->blurb + "\n";
    s += "  columns: " + e->columns + "\n";
  }
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"numerical laboratory for jump-function harmonicity and "
               "minimal hypersurfaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  bool have_seed = false, have_budget = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "path to a key=value config file")
      ->required();
  run->add_option("--out", out_dir, "output directory (overrides out.dir)");
  run->add_option("--seed", seed, "sampler seed override")
      ->each([&](const std::string&) { have_seed = true; });
  run->add_option("--budget", budget, "sampler sample-count override")
      ->each([&](const std::string&) { have_budget = true; });

  CLI::App* list = app.add_subcommand("list", "list available experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (list->parsed()) {
    out << list_experiments_text();
    return 0;
  }

  try {
    CliOverrides ov;
    if (!out_dir.empty()) ov.out_dir = out_dir;
    if (have_seed) ov.seed = seed;
    if (have_budget) ov.budget = budget;
    const RunArtifacts art = run_experiment(parse_config_file(config_path), ov);
    for (const auto& a : art.assertions) {
      out << (a.pass ? "[pass] " : "[FAIL] ") << a.name << "  " << a.detail
          << "\n";
    }
    out << "results: " << art.results_csv.string() << "\n";
    if (!art.all_pass()) {
      err << "error: " << art.experiment << ": assertion failure\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace minharm
