#include "finsler/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + ": '" + key + "' must be finite");
  return d;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

int integer(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

std::string string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

Vec vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + ": expected an array of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  if (!out.allFinite()) throw ConfigError(where + ": entries must be finite");
  return out;
}

GProfile parse_g(const json& j) {
  if (j.is_string()) return GProfile::from_name(j.get<std::string>());
  require_object(j, "phi.g");
  check_keys(j, "phi.g", {"kind", "c0", "c1"});
  const std::string kind = string(j, "kind", "phi.g");
  if (kind != "affine") throw ConfigError("phi.g: unknown kind '" + kind + "'");
  return GProfile::affine(number_or(j, "c0", 0.0, "phi.g"), number_or(j, "c1", 0.0, "phi.g"));
}

Mat quadratic_metric(double eps, const Vec& x) {
  const int n = static_cast<int>(x.size());
  return (1.0 + eps * x.squaredNorm()) * Mat::Identity(n, n) + eps * (x * x.transpose());
}

}  // namespace

PhiFamily parse_phi(const json& j) {
  require_object(j, "phi");
  const std::string kind = string(j, "kind", "phi");
  if (kind == "constant" || kind == "randers" || kind == "berwald_square") {
    check_keys(j, "phi", {"kind"});
    if (kind == "constant") return PhiFamily::constant();
    if (kind == "randers") return PhiFamily::randers();
    return PhiFamily::berwald_square();
  }
  if (kind == "bryant") {
    check_keys(j, "phi", {"kind", "p"});
    try {
      return PhiFamily::bryant(number(j, "p", "phi"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("phi: ") + e.what());
    }
  }
  if (kind == "lemma_c") {
    check_keys(j, "phi", {"kind", "f", "g"});
    const FProfile f = FProfile::from_name(string(j, "f", "phi"));
    const GProfile g = j.contains("g") ? parse_g(j.at("g")) : GProfile::zero();
    return PhiFamily::lemma_c(f, g);
  }
  if (kind == "mu_transformed") {
    check_keys(j, "phi", {"kind", "mu", "base"});
    if (!j.contains("base")) throw ConfigError("phi: mu_transformed needs 'base'");
    return PhiFamily::mu_transformed(parse_phi(j.at("base")), number(j, "mu", "phi"));
  }
  throw ConfigError("phi: unknown kind '" + kind + "'");
}

AlphaBetaSpec parse_alpha_beta(int dim, const json& alpha, const json& beta) {
  require_object(alpha, "alpha");
  require_object(beta, "beta");

  AlphaSpec a;
  std::optional<double> alpha_mu;
  const std::string akind = string(alpha, "kind", "alpha");
  if (akind == "const_curvature") {
    check_keys(alpha, "alpha", {"kind", "mu"});
    alpha_mu = number(alpha, "mu", "alpha");
    a = alpha_kind::ConstCurvature{*alpha_mu};
  } else if (akind == "quadratic") {
    check_keys(alpha, "alpha", {"kind", "eps"});
    const double eps = number(alpha, "eps", "alpha");
    a = alpha_kind::Explicit{"quadratic", [eps](const Vec& x) { return quadratic_metric(eps, x); }};
  } else {
    throw ConfigError("alpha: unknown kind '" + akind + "'");
  }

  BetaSpec b;
  const std::string bkind = string(beta, "kind", "beta");
  if (bkind == "thm") {
    check_keys(beta, "beta", {"kind", "mu", "lambda", "a"});
    const double mu = beta.contains("mu") ? number(beta, "mu", "beta") : alpha_mu.value_or(0.0);
    const double lambda = number_or(beta, "lambda", 1.0, "beta");
    const Vec av = beta.contains("a") ? vector(beta.at("a"), "beta.a") : Vec::Zero(dim);
    b = beta_kind::ThmThreeForm{mu, lambda, av};
  } else if (bkind == "affine") {
    check_keys(beta, "beta", {"kind", "c", "m"});
    const Vec c = beta.contains("c") ? vector(beta.at("c"), "beta.c") : Vec::Zero(dim);
    Mat m = Mat::Zero(dim, dim);
    if (beta.contains("m")) {
      const json& rows = beta.at("m");
      if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
        throw ConfigError("beta.m: expected dim rows");
      }
      for (int i = 0; i < dim; ++i) {
        const Vec row = vector(rows[i], "beta.m");
        if (row.size() != dim) throw ConfigError("beta.m: expected dim columns");
        m.row(i) = row.transpose();
      }
    }
    if (c.size() != dim) throw ConfigError("beta.c: expected dim entries");
    b = beta_kind::Explicit{"affine", [c, m](const Vec& x) { return Vec(c + m * x); }};
  } else if (bkind == "funk") {
    check_keys(beta, "beta", {"kind"});
    b = beta_kind::Explicit{"funk", [](const Vec& x) {
                              const double d = 1.0 - x.squaredNorm();
                              if (!(d > 0.0)) throw DomainError("funk beta needs |x| < 1");
                              return Vec(x / d);
                            }};
  } else {
    throw ConfigError("beta: unknown kind '" + bkind + "'");
  }
  return AlphaBetaSpec(dim, std::move(a), std::move(b));
}

SprayMethod parse_method(const std::string& name) {
  if (name == "closed_form") return SprayMethod::ClosedForm;
  if (name == "conformal_closed") return SprayMethod::ConformalClosed;
  if (name == "fd_oracle") return SprayMethod::FdOracle;
  throw ConfigError("unknown spray method '" + name + "'");
}

RunConfig parse_run_config(const json& j) {
  try {
    require_object(j, "config");
    check_keys(j, "config", {"dim", "phi", "alpha", "beta", "run"});
    if (!j.contains("dim")) throw ConfigError("config: missing 'dim'");
    const int dim = integer(j, "dim", "config");
    if (!j.contains("phi") || !j.contains("alpha") || !j.contains("beta")) {
      throw ConfigError("config: 'phi', 'alpha' and 'beta' are required");
    }
    RunConfig cfg{MetricSpec{parse_phi(j.at("phi")),
                             parse_alpha_beta(dim, j.at("alpha"), j.at("beta"))},
                  RunParams{}};

    if (j.contains("run")) {
      const json& r = j.at("run");
      require_object(r, "run");
      check_keys(r, "run",
                 {"seed", "grid", "b_max", "samples", "steps", "h", "method", "x", "y", "mu", "nu",
                  "tol", "x_radius", "speed", "trials"});
      RunParams& p = cfg.params;
      if (r.contains("seed")) {
        if (!r.at("seed").is_number_unsigned()) throw ConfigError("run: 'seed' must be >= 0");
        p.seed = r.at("seed").get<std::uint64_t>();
      }
      if (r.contains("grid")) p.grid = integer(r, "grid", "run");
      if (r.contains("b_max")) p.b_max = number(r, "b_max", "run");
      if (r.contains("samples")) p.samples = integer(r, "samples", "run");
      if (r.contains("steps")) p.steps = integer(r, "steps", "run");
      p.h = number_or(r, "h", p.h, "run");
      if (r.contains("method")) p.method = parse_method(string(r, "method", "run"));
      if (r.contains("x")) p.x = vector(r.at("x"), "run.x");
      if (r.contains("y")) p.y = vector(r.at("y"), "run.y");
      p.mu = number_or(r, "mu", p.mu, "run");
      p.nu = number_or(r, "nu", p.nu, "run");
      p.tol = number_or(r, "tol", p.tol, "run");
      p.x_radius = number_or(r, "x_radius", p.x_radius, "run");
      p.speed = number_or(r, "speed", p.speed, "run");
      if (r.contains("trials")) p.trials = integer(r, "trials", "run");
      if (!(p.tol > 0.0) || !(p.h > 0.0)) throw ConfigError("run: tolerances and h must be positive");
      if ((p.grid && *p.grid < 2) || p.samples < 1 || p.steps < 1 || p.trials < 1) {
        throw ConfigError("run: counts must be positive (grid >= 2)");
      }
      if ((p.x && p.x->size() != dim) || (p.y && p.y->size() != dim)) {
        throw ConfigError("run: x and y must have length dim");
      }
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

namespace {

json maybe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

json to_json(const ValidityReport& r) {
  return {{"valid", r.valid},
          {"min_phi", maybe(r.min_phi)},
          {"min_ineq1", maybe(r.min_ineq1)},
          {"min_ineq2", maybe(r.min_ineq2)},
          {"first_failure_b", r.first_failure_b ? json(*r.first_failure_b) : json(nullptr)},
          {"dim", r.dim},
          {"b_max", r.b_max},
          {"grid", r.grid}};
}

json to_json(const PdeReport& r) {
  return {{"family", r.family},
          {"grid", r.grid},
          {"b_max", r.b_max},
          {"max_residual", maybe(r.max_residual)},
          {"argmax_node", {{"b2", r.argmax_b2}, {"s", r.argmax_s}}},
          {"skipped", r.skipped}};
}

json to_json(const GroupLawReport& r) {
  return {{"identity_deviation", r.identity_deviation},
          {"composition_deviation", r.composition_deviation},
          {"skipped", r.skipped}};
}

json to_json(const FlatnessReport& r) {
  return {{"samples", r.samples},
          {"completed", r.completed},
          {"excluded", r.excluded},
          {"max_straightness", r.max_straightness},
          {"median_straightness", r.median_straightness},
          {"max_projective_residual", r.max_projective},
          {"median_projective_residual", r.median_projective},
          {"flat", r.flat},
          {"seed", r.seed}};
}

json spray_report(const Vec& x, const Vec& y, const SprayResult& r) {
  return {{"x", vec_json(x)},
          {"y", vec_json(y)},
          {"G", vec_json(r.G)},
          {"P", r.P ? maybe(*r.P) : json(nullptr)},
          {"residual", maybe(r.residual)},
          {"method", to_string(r.method)}};
}

}  // namespace finsler
