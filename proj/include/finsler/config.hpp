#pragma once

// Experiment manifests (JSON) and report serialization.
//
// Schema (unknown keys anywhere are rejected):
//   {
//     "dim": 2,
//     "phi":   {"kind": "constant" | "randers" | "berwald_square"}
//            | {"kind": "bryant", "p": <radians>}
//            | {"kind": "lemma_c", "f": <profile name>, "g": <g name> | {"kind": "affine", "c0", "c1"}}
//            | {"kind": "mu_transformed", "mu": <real>, "base": <phi>},
//     "alpha": {"kind": "const_curvature", "mu": <real>} | {"kind": "quadratic", "eps": <real>},
//     "beta":  {"kind": "thm", "mu": <real, defaults to alpha mu>, "lambda": <real>, "a": [...]}
//            | {"kind": "affine", "c": [...], "m": [[...], ...]}
//            | {"kind": "funk"},
//     "run":   {optional command parameters, see RunParams}
//   }

#include <cstdint>
#include <optional>
#include <string>

#include "finsler/geodesic_probe.hpp"
#include "finsler/metric_engine.hpp"
#include "finsler/pde_lab.hpp"
#include "finsler/spray_engine.hpp"
#include "json.hpp"

namespace finsler {

struct RunParams {
  std::uint64_t seed = 42;
  std::optional<int> grid;
  std::optional<double> b_max;
  int samples = 20;
  int steps = 500;
  double h = 1e-3;
  SprayMethod method = SprayMethod::ClosedForm;
  std::optional<Vec> x;
  std::optional<Vec> y;
  double mu = 0.0;  // transform parameters
  double nu = 0.0;
  double tol = 1e-5;
  double x_radius = 0.4;
  double speed = 0.5;
  int trials = 100;
};

struct RunConfig {
  MetricSpec metric;
  RunParams params;
};

PhiFamily parse_phi(const nlohmann::json& j);
AlphaBetaSpec parse_alpha_beta(int dim, const nlohmann::json& alpha, const nlohmann::json& beta);
RunConfig parse_run_config(const nlohmann::json& j);
/// Reads and parses a UTF-8 JSON file. Throws ConfigError on I/O or schema errors.
RunConfig load_run_config(const std::string& path);

SprayMethod parse_method(const std::string& name);

nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const PdeReport& r);
nlohmann::json to_json(const GroupLawReport& r);
nlohmann::json to_json(const FlatnessReport& r);
nlohmann::json spray_report(const Vec& x, const Vec& y, const SprayResult& r);

}  // namespace finsler
