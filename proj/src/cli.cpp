#include "henon/cli.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "henon/analysis.hpp"
#include "henon/domain_map.hpp"
#include "henon/error.hpp"
#include "henon/numerics/parallel.hpp"
#include "henon/perturbed.hpp"
#include "henon/problem.hpp"
#include "henon/radial.hpp"
#include "henon/spectrum.hpp"

namespace henon::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

// JSON object that keeps insertion order.
class Json {
 public:
  Json& add(const std::string& key, double v) { return raw(key, num(v)); }
  Json& add(const std::string& key, int v) { return raw(key, std::to_string(v)); }
  Json& add(const std::string& key, std::size_t v) { return raw(key, std::to_string(v)); }
  Json& add(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  Json& add(const std::string& key, const char* v) { return raw(key, quoted(v)); }
  Json& add(const std::string& key, const std::string& v) { return raw(key, quoted(v)); }
  Json& add(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return raw(key, s + "]");
  }
  Json& add(const std::string& key, const std::vector<Json>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].dump_inline();
    return raw(key, s + "]");
  }
  Json& raw(const std::string& key, const std::string& text) {
    items_.emplace_back(key, text);
    return *this;
  }
  std::string dump() const {
    std::string s = "{\n";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      s += "  " + quoted(items_[i].first) + ": " + items_[i].second;
      s += i + 1 < items_.size() ? ",\n" : "\n";
    }
    return s + "}\n";
  }
  std::string dump_inline() const {
    std::string s = "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      s += (i ? ", " : "") + quoted(items_[i].first) + ": " + items_[i].second;
    }
    return s + "}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct Output {
  std::string dir = ".";

  void prepare() const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir) || ::access(dir.c_str(), W_OK) != 0) {
      throw InvalidArgument("output directory '" + dir + "' is not writable");
    }
  }
  void write(const std::string& name, const std::string& text) const {
    const fs::path path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
  }
};

std::string csv(const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::string s = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + csv_num(row[c]);
    s += "\n";
  }
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void require_subcritical(const ProblemParams& pp) {
  validate_pipeline(pp);
  if (!(pp.p < critical_exponent(pp))) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "supercritical: p = %.17g >= p_alpha(N) = %.17g", pp.p,
                  critical_exponent(pp));
    throw Supercritical(buf);
  }
}

Json params_json(const ProblemParams& pp) {
  Json j;
  j.add("N", pp.N).add("alpha", pp.alpha).add("p", pp.p);
  return j;
}

struct Common {
  std::string out = ".";
  std::size_t workers = 1;
  std::string config;
};

struct Problem {
  int N = 3;
  double alpha = 1.0;
  double p = 5.0;
  ProblemParams params() const { return {N, alpha, p}; }
};

void add_problem(CLI::App* sub, Problem& pr, bool with_alpha = true) {
  sub->add_option("--N", pr.N, "space dimension (>= 3)")->capture_default_str();
  if (with_alpha) {
    sub->add_option("--alpha", pr.alpha, "weight exponent alpha >= 0")->capture_default_str();
  }
  sub->add_option("--p", pr.p, "nonlinearity exponent p > 1")->capture_default_str();
}

// ---- subcommands ----------------------------------------------------------

struct RadialArgs {
  Problem pr{3, 0.0, 3.0};
  std::size_t nodes = 2001;
};

int cmd_radial(const RadialArgs& a, const Common& c, const Output& o, std::ostream& out) {
  const ProblemParams pp = a.pr.params();
  require_subcritical(pp);
  require(a.nodes >= 16, "--nodes must be at least 16");
  o.prepare();
  RadialOptions ro;
  ro.grid_nodes = a.nodes;
  const RadialProfile vp = solve_henon_radial(pp, ro);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < vp.size(); ++i) rows.push_back({vp.grid[i], vp.values[i], vp.dvalues[i]});
  o.write("radial.csv", csv("r,u,du", rows));
  Json j;
  j.add("N", pp.N).add("alpha", pp.alpha).add("p", pp.p);
  j.add("N_alpha", fractional_dimension(pp));
  j.add("R0", vp.first_zero_R0.value_or(std::nan("")));
  j.add("central_value", vp.values.front());
  j.add("residual_sup", radial_residual_sup(vp));
  o.write("radial.json", j.dump());
  out << j.dump();
  (void)c;
  return 0;
}

struct SweepArgs {
  Problem pr{3, 1.0, 0.0};
  std::size_t count = 100;
  double pmin = 0.0, pmax = 0.0;  // 0: default range
  double tmax = 40.0;
  std::size_t eigen_nodes = 20000;
  std::size_t kmax = 4;
};

std::vector<double> sweep_points(const SweepArgs& a) {
  const ProblemParams pp{a.pr.N, a.pr.alpha, 2.0};
  validate_pipeline(pp);
  require(a.count >= 2, "--count must be at least 2");
  require(a.tmax > 0.0, "--tmax must be positive");
  require(a.eigen_nodes >= 100, "--eigen-nodes must be at least 100");
  const double pc = critical_exponent(pp);
  const auto def = default_sweep(a.pr.N, a.pr.alpha, 2);
  const double lo = a.pmin > 0.0 ? a.pmin : def.front();
  const double hi = a.pmax > 0.0 ? a.pmax : def.back();
  require(lo > 1.0 && hi < pc && lo < hi, "sweep range must satisfy 1 < pmin < pmax < p_alpha(N)");
  return exponent_grid(lo, hi, a.count);
}

SweepOptions sweep_options(const SweepArgs& a, const Common& c) {
  SweepOptions so;
  so.eigen.t_max = a.tmax;
  so.eigen.nodes = a.eigen_nodes;
  so.workers = c.workers;
  return so;
}

std::string curve_csv(const SpectralCurve& curve) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : curve.samples) rows.push_back({s.p, s.nu, s.nu_direct, s.gap});
  return csv("p,nu,nu_direct,gap", rows);
}

int cmd_nu(const SweepArgs& a, const Common& c, const Output& o, std::ostream& out,
           std::ostream& err) {
  const auto ps = sweep_points(a);
  o.prepare();
  const SpectralCurve curve = sweep_nu(a.pr.N, a.pr.alpha, ps, sweep_options(a, c));
  o.write("nu.csv", curve_csv(curve));
  double max_gap = 0.0, nu_min = INFINITY, nu_max = -INFINITY, second_min = INFINITY;
  std::size_t failed = 0;
  for (const auto& s : curve.samples) {
    if (!s.ok) {
      ++failed;
      err << "p = " << num(s.p) << ": " << s.error << "\n";
      continue;
    }
    max_gap = std::max(max_gap, s.gap);
    nu_min = std::min(nu_min, s.nu);
    nu_max = std::max(nu_max, s.nu);
    second_min = std::min(second_min, s.second);
  }
  Json j;
  j.add("N", a.pr.N).add("alpha", a.pr.alpha).add("count", curve.samples.size());
  j.add("p_min", ps.front()).add("p_max", ps.back());
  j.add("max_gap", max_gap).add("nu_min", nu_min).add("nu_max", nu_max);
  j.add("second_min", second_min).add("failed", failed);
  o.write("nu.json", j.dump());
  out << j.dump();
  return failed ? static_cast<int>(ExitCode::solver_failure) : 0;
}

int cmd_pk(const SweepArgs& a, const Common& c, const Output& o, std::ostream& out) {
  const auto ps = sweep_points(a);
  require(a.kmax >= 1, "--kmax must be at least 1");
  o.prepare();
  const SweepOptions so = sweep_options(a, c);
  const SpectralCurve curve = sweep_nu(a.pr.N, a.pr.alpha, ps, so);
  const DegeneracyTable table = find_pk(curve, a.kmax, so);
  std::vector<std::vector<double>> rows;
  std::vector<Json> entries;
  for (const auto& e : table.entries) {
    rows.push_back({static_cast<double>(e.k), e.lambda_k, e.p_k, e.bracket_lo, e.bracket_hi,
                    e.mode_shot_residual});
    Json je;
    je.add("k", e.k).add("lambda_k", e.lambda_k).add("p_k", e.p_k);
    je.add("bracket_lo", e.bracket_lo).add("bracket_hi", e.bracket_hi);
    je.add("mode_shot_residual", e.mode_shot_residual);
    entries.push_back(je);
  }
  o.write("pk.csv", csv("k,lambda_k,p_k,bracket_lo,bracket_hi,mode_shot_residual", rows));
  Json j;
  j.add("N", a.pr.N).add("alpha", a.pr.alpha).add("k_max", a.kmax);
  j.add("count", curve.samples.size()).add("p_min", ps.front()).add("p_max", ps.back());
  j.add("entries", entries);
  o.write("pk.json", j.dump());
  out << j.dump();
  return 0;
}

struct DegeneracyArgs {
  Problem pr{3, 1.0, 5.0};
  double threshold = 1e-6;
};

int cmd_check(const DegeneracyArgs& a, const Output& o, std::ostream& out, std::ostream& err) {
  const ProblemParams pp = a.pr.params();
  require_subcritical(pp);
  require(a.threshold > 0.0, "--threshold must be positive");
  o.prepare();
  const NondegeneracyReport rep = nondegeneracy_certificate(pp, a.threshold);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < rep.boundary_values.size(); ++k) {
    rows.push_back({static_cast<double>(k), sphere_eigenvalue(pp.N, k), rep.boundary_values[k]});
  }
  o.write("modes.csv", csv("k,lambda_k,boundary_value", rows));
  Json j = params_json(pp);
  j.add("K", rep.K).add("potential_max", rep.potential_max).add("threshold", rep.threshold);
  j.add("min_abs", rep.min_abs).add("witness_k", rep.witness_k);
  j.add("verdict", rep.degenerate ? "degenerate" : "nondegenerate");
  j.add("boundary_values", rep.boundary_values);
  o.write("degeneracy.json", j.dump());
  out << j.dump();
  if (rep.degenerate) {
    err << "p in forbidden set: mode " << rep.witness_k << " is degenerate\n";
    return static_cast<int>(ExitCode::degenerate);
  }
  return 0;
}

struct PerturbedArgs {
  Problem pr{3, 1.0, 5.0};
  double t = 1e-3;
  std::string map = "bump(0.5,0,0.5,0,0)";
  std::size_t kmax = 32, rnodes = 1024, maxiter = 200;
  double tol = 1e-10;
  double trust = 0.25;
  double norm_limit = 1e3;
};

int cmd_perturbed(const PerturbedArgs& a, const Common& c, const Output& o, std::ostream& out) {
  const ProblemParams pp = a.pr.params();
  require(pp.N == 3, "perturbed: only N = 3 is supported");
  require_subcritical(pp);
  require(a.kmax >= 1, "--kmax must be at least 1");
  require(a.rnodes >= 16, "--rnodes must be at least 16");
  require(a.maxiter >= 1, "--maxiter must be at least 1");
  require(a.tol > 0.0, "--tol must be positive");
  require(a.trust > 0.0 && a.norm_limit > 0.0, "--trust and --norm-limit must be positive");
  const DomainMapSpec spec = parse_map_family(a.map, a.t);
  require(spec.axisymmetric(), "perturbed: the map must be axisymmetric about the z axis");
  require_contractive(spec);
  o.prepare();
  PerturbedOptions po;
  po.kmax = a.kmax;
  po.rnodes = a.rnodes;
  po.maxiter = a.maxiter;
  po.tol = a.tol;
  po.trust = a.trust;
  po.norm_limit = a.norm_limit;
  po.workers = c.workers;
  const PerturbedSolution sol = contraction_solve(pp, spec, po);
  const ContractionReport& rep = sol.report;
  const AxisymmetricGrid& g = sol.map->grid();
  const std::vector<double> phi = sol.phi.synthesize(g);
  std::vector<std::vector<double>> rows;
  rows.reserve(phi.size());
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double v0 = sol.map->vp().value(g.r[i]);
    for (std::size_t j = 0; j < g.nmu(); ++j) {
      rows.push_back({g.r[i], std::acos(g.mu[j]), v0 + phi[i * g.nmu() + j]});
    }
  }
  o.write("solution.csv", csv("r,theta,v", rows));
  std::vector<std::vector<double>> conv;
  for (std::size_t n = 0; n < rep.increments.size(); ++n) {
    conv.push_back({static_cast<double>(n + 1), rep.increments[n]});
  }
  o.write("convergence.csv", csv("n,increment_norm", conv));
  Json j;
  j.add("kappa", rep.kappa).add("iters", rep.iterations);
  j.add("residual_sup", rep.residual_sup).add("positivity_margin", rep.positivity_margin);
  o.write("report.json", j.dump());
  double max_norm = 0.0;
  for (double v : rep.mode_solve_norms) max_norm = std::max(max_norm, v);
  Json s = params_json(pp);
  s.add("map", spec.describe()).add("t", spec.t);
  s.add("kappa", rep.kappa).add("iters", rep.iterations);
  s.add("residual_sup", rep.residual_sup).add("positivity_margin", rep.positivity_margin);
  s.add("phi_sup", rep.phi_sup).add("max_mode_solve_norm", max_norm);
  s.add("positive", rep.positive);
  out << s.dump();
  return 0;
}

struct ExteriorArgs {
  Problem pr{3, -1.0, 6.0};  // alpha < 0: use alpha* so the Kelvin weight vanishes
  double smax = 1000.0;
  std::size_t nodes = 4001;
  std::string map;
  double t = 1e-3;
};

int cmd_exterior(const ExteriorArgs& a, const Common& c, const Output& o, std::ostream& out) {
  require(a.smax > 1.0, "--smax must exceed 1");
  require(a.nodes >= 16, "--nodes must be at least 16");
  ExteriorOptions eo{a.smax, a.nodes};
  Json j;
  std::vector<std::vector<double>> rows;
  const auto profile_rows = [&](const ExteriorProfile& e) {
    for (std::size_t i = 0; i < e.s.size(); ++i) rows.push_back({e.s[i], e.w[i], e.dw[i]});
  };
  const auto profile_json = [&](const ExteriorProfile& e) {
    j.add("beta", e.beta).add("s_max", a.smax).add("nodes", a.nodes);
    j.add("boundary_value", e.boundary_value).add("min_value", e.min_value);
    j.add("residual_sup", e.residual_sup).add("decay_exponent", e.decay_exponent);
    j.add("fit_lo", e.fit_lo).add("fit_hi", e.fit_hi);
  };
  if (a.pr.alpha >= 0.0) {
    require(a.map.empty(), "--map needs the fast-decay pipeline (omit --alpha)");
    const ProblemParams pp = a.pr.params();
    require_subcritical(pp);
    o.prepare();
    const RadialProfile vp = solve_henon_radial(pp);
    const ExteriorProfile e = kelvin_exterior(vp, pp, eo);
    profile_rows(e);
    j = params_json(pp);
    profile_json(e);
  } else {
    FastDecayOptions fo;
    fo.exterior = eo;
    fo.perturbed.workers = c.workers;
    if (!a.map.empty()) {
      const DomainMapSpec spec = parse_map_family(a.map, a.t);
      require(spec.axisymmetric(), "exterior: the map must be axisymmetric about the z axis");
      require_contractive(spec);
      fo.map = spec;
    }
    require(a.pr.N >= 3, "N must be at least 3");
    require(a.pr.p > sobolev_exponent(a.pr.N), "fast decay needs p > (N+2)/(N-2)");
    o.prepare();
    const FastDecayReport rep = fast_decay_pipeline(a.pr.N, a.pr.p, fo);
    profile_rows(rep.exterior);
    j = params_json(rep.params);
    profile_json(rep.exterior);
    j.add("interior_residual", rep.interior_residual);
    if (rep.perturbed) {
      j.add("map", fo.map->describe()).add("t", fo.map->t);
      j.add("kappa", rep.contraction.kappa).add("iters", rep.contraction.iterations);
      j.add("perturbed_residual_sup", rep.contraction.residual_sup);
      j.add("perturbed_exterior_residual", rep.perturbed_exterior_residual);
    }
  }
  o.write("exterior.csv", csv("s,w,dw", rows));
  o.write("exterior.json", j.dump());
  out << j.dump();
  return 0;
}

struct PohozaevArgs {
  Problem pr{3, 0.0, 3.0};
  std::size_t panels = 4096;
};

int cmd_pohozaev(const PohozaevArgs& a, const Output& o, std::ostream& out) {
  const ProblemParams pp = a.pr.params();
  require_subcritical(pp);
  require(a.panels >= 1, "--panels must be at least 1");
  o.prepare();
  const RadialProfile vp = solve_henon_radial(pp);
  const PohozaevReport rep = pohozaev_residual(vp, pp, a.panels);
  Json j = params_json(pp);
  j.add("coefficient", rep.coefficient).add("volume_term", rep.volume_term);
  j.add("boundary_term", rep.boundary_term).add("residual", rep.residual);
  j.add("relative_residual", rep.relative_residual);
  j.add("panels", rep.panels).add("points_per_panel", rep.points_per_panel);
  o.write("pohozaev.json", j.dump());
  out << j.dump();
  return 0;
}

struct CertificateArgs {
  Problem pr{3, 1.0, 6.0};
  double shift = 100.0;
  std::string domain = "ball";
  double t = 0.0;
  std::vector<double> direction{0.0, 0.0, 1.0};
};

int cmd_certify(const CertificateArgs& a, const Output& o, std::ostream& out) {
  const ProblemParams pp = a.pr.params();
  require(a.direction.size() == 3, "--direction takes three components");
  const DomainSpec dom = parse_domain(a.domain, a.t);
  CertificateOptions co;
  co.direction = {a.direction[0], a.direction[1], a.direction[2]};
  // validated inside; nothing is written on failure
  const CertificateReport rep = nonexistence_certificate(dom, a.shift, pp, co);
  o.prepare();
  Json j = params_json(pp);
  j.add("domain", dom.describe()).add("shift", rep.shift).add("gamma", rep.gamma);
  j.add("base_constant", rep.base_constant).add("eps_sup", rep.eps_sup);
  j.add("margin", rep.margin).add("min_x_dot_normal", rep.min_x_dot_normal);
  j.add("samples", rep.samples).add("verdict", verdict_name(rep.verdict));
  o.write("certificate.json", j.dump());
  out << j.dump();
  return 0;
}

bool is_flag(const std::string& s) { return s.size() > 2 && s[0] == '-' && s[1] == '-'; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{
      "radial", "nu", "pk", "check-degeneracy", "perturbed", "exterior", "pohozaev",
      "certify-nonexistence"};
  return names;
}

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read config file '" + path + "'");
  std::set<std::string> given;
  bool has_command = false;
  for (const auto& a : args) {
    if (is_flag(a)) given.insert(a.substr(2, a.find('=') == std::string::npos
                                                  ? std::string::npos
                                                  : a.find('=') - 2));
    for (const auto& n : subcommand_names()) has_command |= (a == n);
  }
  std::vector<std::string> merged = args;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    }
    if (key == "command") {
      if (!has_command) {
        merged.insert(merged.begin(), value);
        has_command = true;
      }
      continue;
    }
    if (given.count(key)) continue;
    merged.push_back("--" + key);
    merged.push_back(value);
    given.insert(key);
  }
  return merged;
}

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  Common common;
  common.workers = numerics::default_workers();

  CLI::App app{"Positive solutions of -Laplace u = |x|^alpha u^p: radial profiles, "
               "linearized spectrum, perturbed balls, exterior problems."};
  app.name("henon");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
  app.footer(
      "Exit codes: 0 success, 2 degenerate exponent, 3 no convergence, 4 invalid "
      "configuration (including an unwritable --out), 5 solver failure.\n"
      "Every subcommand also accepts --out, --workers and --config. HENON_WORKERS sets "
      "the default worker count.");
  app.add_option("--out", common.out, "output directory (created if missing)")
      ->capture_default_str();
  app.add_option("--workers", common.workers,
                 "parallel workers (default: HENON_WORKERS, else hardware threads)")
      ->check(CLI::PositiveNumber);
  app.add_option("--config", common.config,
                 "key=value file; keys are flag names, flags on the command line win");

  RadialArgs radial;
  auto* s_radial = app.add_subcommand("radial", "radial solution on the unit ball");
  add_problem(s_radial, radial.pr);
  s_radial->add_option("--nodes", radial.nodes, "output grid nodes")->capture_default_str();

  SweepArgs nu;
  auto* s_nu = app.add_subcommand("nu", "first weighted eigenvalue nu(p) over a sweep of p");
  SweepArgs pk;
  pk.count = 400;
  auto* s_pk = app.add_subcommand("pk", "degenerate exponents p_k with nu(p_k) = -lambda_k");
  for (auto [sub, a] : {std::pair{s_nu, &nu}, std::pair{s_pk, &pk}}) {
    sub->add_option("--N", a->pr.N, "space dimension (>= 3)")->capture_default_str();
    sub->add_option("--alpha", a->pr.alpha, "weight exponent alpha >= 0")->capture_default_str();
    sub->add_option("--count", a->count, "number of sweep points")->capture_default_str();
    sub->add_option("--pmin", a->pmin, "sweep start (default (N+2)/(N-2))");
    sub->add_option("--pmax", a->pmax, "sweep end (default p_alpha(N) - 1e-3)");
    sub->add_option("--tmax", a->tmax, "log-radius truncation")->capture_default_str();
    sub->add_option("--eigen-nodes", a->eigen_nodes, "eigenvalue grid unknowns")
        ->capture_default_str();
  }
  s_pk->add_option("--kmax", pk.kmax, "largest spherical mode")->capture_default_str();

  DegeneracyArgs check;
  auto* s_check = app.add_subcommand(
      "check-degeneracy", "shoot every mode that can vanish; exit 2 if one does");
  add_problem(s_check, check.pr);
  s_check->add_option("--threshold", check.threshold, "degeneracy threshold on |a_k(1)|")
      ->capture_default_str();

  PerturbedArgs pert;
  auto* s_pert = app.add_subcommand("perturbed", "positive solution on a perturbed ball (N = 3)");
  add_problem(s_pert, pert.pr);
  s_pert->add_option("--t", pert.t, "perturbation size")->capture_default_str();
  s_pert->add_option("--map", pert.map,
                     "dilation | translation(ex,ey,ez) | bump(c0,c1,c2,c3,c4)")
      ->capture_default_str();
  s_pert->add_option("--kmax", pert.kmax, "largest Legendre mode")->capture_default_str();
  s_pert->add_option("--rnodes", pert.rnodes, "radial nodes")->capture_default_str();
  s_pert->add_option("--maxiter", pert.maxiter, "fixed-point iteration cap")
      ->capture_default_str();
  s_pert->add_option("--tol", pert.tol, "stop when the sup increment is below this")
      ->capture_default_str();
  s_pert->add_option("--trust", pert.trust, "bound on sup |phi / v_p|")->capture_default_str();
  s_pert->add_option("--norm-limit", pert.norm_limit,
                     "mode inverse norm treated as degenerate (exit 2)")
      ->capture_default_str();

  ExteriorArgs ext;
  auto* s_ext = app.add_subcommand(
      "exterior", "Kelvin transform to the exterior of the ball; without --alpha uses "
                  "alpha = p(N-2) - N - 2 (fast decay)");
  s_ext->add_option("--N", ext.pr.N, "space dimension (>= 3)")->capture_default_str();
  s_ext->add_option("--alpha", ext.pr.alpha, "weight exponent (default: fast-decay value)");
  s_ext->add_option("--p", ext.pr.p, "nonlinearity exponent")->capture_default_str();
  s_ext->add_option("--smax", ext.smax, "outer radius of the exterior grid")
      ->capture_default_str();
  s_ext->add_option("--nodes", ext.nodes, "log-spaced exterior nodes")->capture_default_str();
  s_ext->add_option("--map", ext.map, "also solve on a perturbed ball with this map (N = 3)");
  s_ext->add_option("--t", ext.t, "perturbation size for --map")->capture_default_str();

  PohozaevArgs poh;
  auto* s_poh = app.add_subcommand("pohozaev", "Pohozaev balance of the radial solution");
  add_problem(s_poh, poh.pr);
  s_poh->add_option("--panels", poh.panels, "Gauss-Legendre panels on [0, 1]")
      ->capture_default_str();

  CertificateArgs cert;
  auto* s_cert = app.add_subcommand(
      "certify-nonexistence", "one-sided nonexistence test for the shifted weight");
  add_problem(s_cert, cert.pr);
  s_cert->add_option("--shift", cert.shift, "|x_m|; gamma = 1/|x_m|")->capture_default_str();
  s_cert->add_option("--domain", cert.domain,
                     "ball | ball(R) | ball(R,cx,cy,cz) | ellipsoid(a,b,c) | a --map family")
      ->capture_default_str();
  s_cert->add_option("--t", cert.t, "perturbation size for a mapped domain")
      ->capture_default_str();
  s_cert->add_option("--direction", cert.direction, "unit direction z (three numbers)")
      ->expected(3)
      ->delimiter(',');

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->footer("Also accepts the global options --out, --workers and --config.");
  }

  try {
    std::vector<std::string> args = input;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (!path.empty()) {
        args = merge_config(args, path);
        break;
      }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::invalid_config);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  }
  if (const auto* sub = app.get_subcommands().front(); sub->count("--help") > 0) {
    out << sub->help();
    return 0;
  }

  const Output o{common.out};
  try {
    if (s_radial->parsed()) return cmd_radial(radial, common, o, out);
    if (s_nu->parsed()) return cmd_nu(nu, common, o, out, err);
    if (s_pk->parsed()) return cmd_pk(pk, common, o, out);
    if (s_check->parsed()) return cmd_check(check, o, out, err);
    if (s_pert->parsed()) return cmd_perturbed(pert, common, o, out);
    if (s_ext->parsed()) return cmd_exterior(ext, common, o, out);
    if (s_poh->parsed()) return cmd_pohozaev(poh, o, out);
    if (s_cert->parsed()) return cmd_certify(cert, o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::solver_failure);
  }
  return static_cast<int>(ExitCode::invalid_config);
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace henon::cli
