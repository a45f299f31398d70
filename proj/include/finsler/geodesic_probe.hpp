#pragma once

// Geodesics of F from the ODE x'' = -2 G(x, x'), integrated with classical RK4, and the
// straight-line deviation used as a definition-level test of projective flatness.

#include <cstdint>
#include <ostream>
#include <vector>

#include "finsler/metric_engine.hpp"
#include "finsler/spray_engine.hpp"

namespace finsler {

struct GeodesicPath {
  std::vector<Vec> points;
  std::vector<Vec> velocities;
  double step = 0.0;
  /// max distance of points to the first-last chord, divided by the chord length.
  double straightness_residual = 0.0;
  /// Integration stopped early because the next point left the domain.
  bool exited_domain = false;
  /// max |F(x, v) - F(x0, v0)| / F(x0, v0) along the path.
  double f_drift = 0.0;
};

struct GeodesicOptions {
  int steps = 500;
  double h = 1e-3;
  SprayMethod method = SprayMethod::ClosedForm;
  /// Points closer than this to the boundary of B(r_mu) end the integration.
  double margin = 0.05;
  /// StepInstability is raised when f_drift exceeds this.
  double max_f_drift = 0.1;
};

double straightness_residual(const std::vector<Vec>& points);

/// RK4 on (x, v) -> (v, -2 G(x, v)). Domain exits are flagged, not thrown.
GeodesicPath integrate_geodesic(const MetricSpec& spec, const Vec& x0, const Vec& y0,
                                const GeodesicOptions& opts = {});

struct SweepOptions {
  GeodesicOptions geodesic;
  /// x0 is drawn uniformly from the ball of this radius (scaled by min(1, r_mu)).
  double x_radius = 0.4;
  /// |y0| in the Euclidean norm.
  double speed = 0.5;
  /// Verdict threshold on the max straightness residual.
  double flat_tol = 1e-5;
};

struct FlatnessReport {
  int samples = 0;
  int completed = 0;
  int excluded = 0;
  double max_straightness = 0.0;
  double median_straightness = 0.0;
  double max_projective = 0.0;
  double median_projective = 0.0;
  bool flat = false;
  std::uint64_t seed = 0;
};

/// Sample (x0, y0) deterministically from seed, trace geodesics, and aggregate straightness
/// and closed-form projective residuals. Trajectories that exit the domain or fail are
/// excluded and counted.
FlatnessReport flatness_sweep(const MetricSpec& spec, int samples, std::uint64_t seed,
                              const SweepOptions& opts = {});

/// Draws the sweep's sample points; exposed so tests can reproduce them.
std::vector<std::pair<Vec, Vec>> sweep_samples(const MetricSpec& spec, int samples,
                                               std::uint64_t seed, const SweepOptions& opts);

/// CSV rows: t, x1..xn, v1..vn with 17 significant digits.
void write_path_csv(std::ostream& os, const GeodesicPath& path);

/// Resample both paths at equal fractions of Euclidean arc length and return the max
/// pointwise distance.
double arc_length_distance(const GeodesicPath& a, const GeodesicPath& b, int samples = 200);

}  // namespace finsler
