// finsler_cli: experiment front end for general (alpha, beta)-metrics.
//
// Exit codes: 0 pass, 1 semantic failure, 2 usage or parse error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "finsler/config.hpp"
#include "finsler/errors.hpp"
#include "finsler/geodesic_probe.hpp"
#include "finsler/metric_engine.hpp"
#include "finsler/pde_lab.hpp"
#include "finsler/phi_families.hpp"
#include "finsler/spray_engine.hpp"

using namespace finsler;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<int> samples;
  std::optional<double> tol;
};

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write output file '" + path + "'");
  os << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunConfig load(const CommonFlags& f) {
  if (f.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_run_config(f.config);
  if (f.seed) cfg.params.seed = *f.seed;
  if (f.grid) cfg.params.grid = *f.grid;
  if (f.samples) cfg.params.samples = *f.samples;
  if (f.tol) cfg.params.tol = *f.tol;
  if (cfg.params.grid && *cfg.params.grid < 2) throw ConfigError("grid must be >= 2");
  if (cfg.params.samples < 1) throw ConfigError("samples must be >= 1");
  if (!(cfg.params.tol > 0.0)) throw ConfigError("tol must be positive");
  return cfg;
}

Vec point_or_origin(const RunConfig& cfg) {
  return cfg.params.x ? *cfg.params.x : Vec::Zero(cfg.metric.dim());
}

Vec direction_or_e1(const RunConfig& cfg) {
  if (cfg.params.y) return *cfg.params.y;
  Vec y = Vec::Zero(cfg.metric.dim());
  y[0] = cfg.params.speed;
  return y;
}

int cmd_validate(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  double b_max = 0.0;
  if (cfg.params.b_max) {
    b_max = *cfg.params.b_max;
  } else {
    const double reg = cfg.metric.phi.regularity_bound();
    b_max = std::isfinite(reg) ? 0.999 * reg : 2.0;
  }
  if (!(b_max > 0.0)) throw ConfigError("b_max must be positive");
  const ValidityReport rep = finsler_validity(cfg.metric.phi, cfg.metric.dim(), b_max,
                                              cfg.params.grid.value_or(kDefaultValidityGrid));
  emit(f.out, dump(to_json(rep)));
  return rep.valid ? kPass : kFail;
}

int cmd_flatness(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  SweepOptions opts;
  opts.geodesic.steps = cfg.params.steps;
  opts.geodesic.h = cfg.params.h;
  opts.geodesic.method = cfg.params.method;
  opts.x_radius = cfg.params.x_radius;
  opts.speed = cfg.params.speed;
  opts.flat_tol = cfg.params.tol;
  const FlatnessReport rep = flatness_sweep(cfg.metric, cfg.params.samples, cfg.params.seed, opts);
  emit(f.out, dump(to_json(rep)));
  return rep.flat ? kPass : kFail;
}

int cmd_spray(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  const Vec x = point_or_origin(cfg);
  const Vec y = direction_or_e1(cfg);
  SprayResult res;
  switch (cfg.params.method) {
    case SprayMethod::ClosedForm: res = spray_closed(cfg.metric, x, y); break;
    case SprayMethod::ConformalClosed: res = spray_conformal_closed(cfg.metric, x, y); break;
    case SprayMethod::FdOracle: {
      res.G = spray_oracle_fd(cfg.metric, x, y);
      res.method = SprayMethod::FdOracle;
      const ProjectiveFit fit = spray_projective_fit(res.G, y, eval_F(cfg.metric, x, y));
      res.residual = fit.residual;
      if (fit.residual <= kFdFlatTol) res.P = fit.P;
      break;
    }
  }
  emit(f.out, dump(spray_report(x, y, res)));
  return kPass;
}

int cmd_geodesic(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  GeodesicOptions opts;
  opts.steps = cfg.params.steps;
  opts.h = cfg.params.h;
  opts.method = cfg.params.method;
  const GeodesicPath path =
      integrate_geodesic(cfg.metric, point_or_origin(cfg), direction_or_e1(cfg), opts);
  std::ostringstream os;
  write_path_csv(os, path);
  emit(f.out, os.str());
  return kPass;
}

int cmd_indicatrix(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  const int n = cfg.metric.dim();
  if (n != 2 && n != 3) throw ConfigError("indicatrix supports dim 2 or 3");
  const Vec x = point_or_origin(cfg);
  const int m = cfg.params.grid.value_or(cfg.params.samples);
  const double two_pi = 2.0 * std::numbers::pi;

  std::ostringstream os;
  auto ray = [&](const Vec& dir, const std::string& angles) {
    try {
      const double F = eval_F(cfg.metric, x, dir);
      if (!(F > 0.0) || !std::isfinite(F)) return;
      const Vec y = dir / F;
      os << angles;
      for (int i = 0; i < n; ++i) os << "," << g17(y[i]);
      os << "\n";
    } catch (const DomainError&) {
    } catch (const BranchError&) {
    }
  };

  if (n == 2) {
    os << "angle,y1,y2\n";
    for (int k = 0; k < m; ++k) {
      const double t = two_pi * k / m;
      Vec d(2);
      d << std::cos(t), std::sin(t);
      ray(d, g17(t));
    }
  } else {
    os << "theta,phi,y1,y2,y3\n";
    for (int i = 0; i < m; ++i) {
      const double th = std::numbers::pi * (i + 0.5) / m;
      for (int j = 0; j < m; ++j) {
        const double ph = two_pi * j / m;
        Vec d(3);
        d << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        ray(d, g17(th) + "," + g17(ph));
      }
    }
  }
  emit(f.out, os.str());
  return kPass;
}

int cmd_pde(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  PdeGrid grid;
  grid.n = cfg.params.grid.value_or(grid.n);
  if (cfg.params.b_max) grid.b_max = *cfg.params.b_max;
  const PdeReport rep = pde_grid_report(cfg.metric.phi, grid);
  nlohmann::json j = to_json(rep);
  j["tol"] = cfg.params.tol;
  emit(f.out, dump(j));
  return std::isfinite(rep.max_residual) && rep.max_residual < cfg.params.tol ? kPass : kFail;
}

int cmd_transform(const CommonFlags& f) {
  const RunConfig cfg = load(f);
  const double mu = cfg.params.mu;
  const PhiFamily t = PhiFamily::mu_transformed(cfg.metric.phi, mu);
  const int m = cfg.params.grid.value_or(21);
  const double b_max =
      cfg.params.b_max ? *cfg.params.b_max
                       : std::min(default_pde_b_max(cfg.metric.phi), default_pde_b_max(t));
  if (!(b_max > 0.0)) throw ConfigError("b_max must be positive");

  std::ostringstream os;
  os << "b2,s,phi,phi1,phi2,phi12,phi22\n";
  int emitted = 0;
  for (int i = 0; i < m; ++i) {
    const double b = b_max * i / (m - 1);
    for (int k = 0; k < m; ++k) {
      const double s = -b + 2.0 * b * k / (m - 1);
      try {
        const PhiJet jet = eval_jet(t, b * b, s);
        os << g17(b * b) << "," << g17(s) << "," << g17(jet.phi) << "," << g17(jet.phi1) << ","
           << g17(jet.phi2) << "," << g17(jet.phi12) << "," << g17(jet.phi22) << "\n";
        ++emitted;
      } catch (const DomainError&) {
      } catch (const BranchError&) {
      }
    }
  }
  emit(f.out, os.str());
  return emitted > 0 ? kPass : kFail;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFail;
  }
}

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "JSON experiment manifest")->required();
  sub->add_option("--out", f.out, "output file (stdout if omitted)");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--grid", f.grid, "grid size per axis")->check(CLI::Range(2, 100000));
  sub->add_option("--samples", f.samples, "number of samples")->check(CLI::Range(1, 100000000));
  sub->add_option("--tol", f.tol, "tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for general (alpha, beta)-metrics"};
  app.require_subcommand(1);

  CommonFlags flags;
  double p = 0.0;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const CommonFlags&);
  };
  const Entry entries[] = {
      {"validate", "check Finsler regularity over a (b, s) grid", cmd_validate},
      {"flatness", "geodesic straightness sweep", cmd_flatness},
      {"spray", "spray coefficients at one point", cmd_spray},
      {"geodesic", "trace one geodesic to CSV", cmd_geodesic},
      {"indicatrix", "sample the unit level set to CSV", cmd_indicatrix},
      {"pde", "projective-flatness PDE residual report", cmd_pde},
      {"transform", "tabulate the mu-transformed phi", cmd_transform},
  };
  std::vector<std::pair<CLI::App*, int (*)(const CommonFlags&)>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, flags);
    subs.emplace_back(sub, e.run);
  }
  CLI::App* bound = app.add_subcommand("bryant-bound", "print b_o for the Bryant family");
  bound->add_option("--p", p, "angle parameter in radians")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (bound->parsed()) {
    return guarded([&] {
      if (!(std::abs(p) < std::numbers::pi)) throw ConfigError("--p must satisfy -pi < p < pi");
      std::cout << g17(bryant_b_o(p)) << "\n";
      return kPass;
    });
  }
  for (const auto& [sub, run] : subs) {
    if (sub->parsed()) return guarded([&] { return run(flags); });
  }
  return kUsage;
}
