#include "finsler/geodesic_probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

Vec spray_of(const MetricSpec& spec, const Vec& x, const Vec& v, SprayMethod method) {
  switch (method) {
    case SprayMethod::ClosedForm: return spray_closed(spec, x, v).G;
    case SprayMethod::ConformalClosed: return spray_conformal_closed(spec, x, v).G;
    case SprayMethod::FdOracle: return spray_oracle_fd(spec, x, v);
  }
  return Vec();
}

bool inside(const MetricSpec& spec, const Vec& x, double margin) {
  if (!x.allFinite()) return false;
  const double r = spec.ab.domain_radius();
  return !std::isfinite(r) || x.norm() < r - margin;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double straightness_residual(const std::vector<Vec>& points) {
  if (points.size() < 2) return 0.0;
  const Vec& first = points.front();
  const Vec chord = points.back() - first;
  const double len = chord.norm();
  if (len == 0.0) return 0.0;
  const Vec dir = chord / len;
  double worst = 0.0;
  for (const Vec& p : points) {
    const Vec rel = p - first;
    worst = std::max(worst, (rel - rel.dot(dir) * dir).norm());
  }
  return worst / len;
}

GeodesicPath integrate_geodesic(const MetricSpec& spec, const Vec& x0, const Vec& y0,
                                const GeodesicOptions& opts) {
  if (!(opts.h > 0.0) || opts.steps < 1) throw ConfigError("geodesic needs h > 0 and steps >= 1");
  if (!inside(spec, x0, opts.margin)) throw DomainError("x0 lies outside the integration domain");

  GeodesicPath path;
  path.step = opts.h;
  path.points.push_back(x0);
  path.velocities.push_back(y0);
  const double f0 = eval_F(spec, x0, y0);
  const double h = opts.h;

  Vec x = x0;
  Vec v = y0;
  for (int step = 0; step < opts.steps; ++step) {
    Vec xn, vn;
    try {
      const Vec a1 = -2.0 * spray_of(spec, x, v, opts.method);
      const Vec x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a1;
      const Vec a2 = -2.0 * spray_of(spec, x2, v2, opts.method);
      const Vec x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2;
      const Vec a3 = -2.0 * spray_of(spec, x3, v3, opts.method);
      const Vec x4 = x + h * v3, v4 = v + h * a3;
      const Vec a4 = -2.0 * spray_of(spec, x4, v4, opts.method);
      xn = x + (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
      vn = v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    } catch (const DomainError&) {
      path.exited_domain = true;
      break;
    } catch (const BranchError&) {
      path.exited_domain = true;
      break;
    }
    if (!inside(spec, xn, opts.margin)) {
      path.exited_domain = true;
      break;
    }
    double f = 0.0;
    try {
      f = eval_F(spec, xn, vn);
    } catch (const DomainError&) {
      path.exited_domain = true;
      break;
    }
    path.f_drift = std::max(path.f_drift, std::abs(f - f0) / f0);
    if (path.f_drift > opts.max_f_drift) {
      throw StepInstability("geodesic F-monitor drifted by more than the allowed fraction");
    }
    x = xn;
    v = vn;
    path.points.push_back(x);
    path.velocities.push_back(v);
  }
  path.straightness_residual = straightness_residual(path.points);
  return path;
}

std::vector<std::pair<Vec, Vec>> sweep_samples(const MetricSpec& spec, int samples,
                                               std::uint64_t seed, const SweepOptions& opts) {
  const int n = spec.dim();
  const double r_mu = spec.ab.domain_radius();
  const double radius = opts.x_radius * (std::isfinite(r_mu) ? std::min(1.0, r_mu) : 1.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto unit = [&] {
    Vec d(n);
    do {
      for (int i = 0; i < n; ++i) d[i] = normal(rng);
    } while (d.norm() < 1e-12);
    return Vec(d / d.norm());
  };

  std::vector<std::pair<Vec, Vec>> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const Vec x0 = radius * std::pow(uniform(rng), 1.0 / n) * unit();
    const Vec y0 = opts.speed * unit();
    out.emplace_back(x0, y0);
  }
  return out;
}

FlatnessReport flatness_sweep(const MetricSpec& spec, int samples, std::uint64_t seed,
                              const SweepOptions& opts) {
  FlatnessReport rep;
  rep.samples = samples;
  rep.seed = seed;
  std::vector<double> straight;
  std::vector<double> projective;
  for (const auto& [x0, y0] : sweep_samples(spec, samples, seed, opts)) {
    try {
      const GeodesicPath path = integrate_geodesic(spec, x0, y0, opts.geodesic);
      if (path.exited_domain) {
        ++rep.excluded;
        continue;
      }
      const double proj = spray_closed(spec, x0, y0).residual;
      straight.push_back(path.straightness_residual);
      projective.push_back(proj);
    } catch (const Error&) {
      ++rep.excluded;
    }
  }
  rep.completed = static_cast<int>(straight.size());
  if (!straight.empty()) {
    rep.max_straightness = *std::max_element(straight.begin(), straight.end());
    rep.max_projective = *std::max_element(projective.begin(), projective.end());
  }
  rep.median_straightness = median(straight);
  rep.median_projective = median(projective);
  rep.flat = rep.completed > 0 && rep.max_straightness < opts.flat_tol;
  return rep;
}

void write_path_csv(std::ostream& os, const GeodesicPath& path) {
  const std::size_t n = path.points.empty() ? 0 : path.points.front().size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << (i + 1);
  for (std::size_t i = 0; i < n; ++i) os << ",v" << (i + 1);
  os << "\n";
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    os << g17(static_cast<double>(k) * path.step);
    for (std::size_t i = 0; i < n; ++i) os << "," << g17(path.points[k][i]);
    for (std::size_t i = 0; i < n; ++i) os << "," << g17(path.velocities[k][i]);
    os << "\n";
  }
}

namespace {

std::vector<double> cumulative_length(const std::vector<Vec>& pts) {
  std::vector<double> len(pts.size(), 0.0);
  for (std::size_t k = 1; k < pts.size(); ++k) len[k] = len[k - 1] + (pts[k] - pts[k - 1]).norm();
  return len;
}

Vec point_at_fraction(const std::vector<Vec>& pts, const std::vector<double>& len, double frac) {
  const double target = frac * len.back();
  const auto it = std::lower_bound(len.begin(), len.end(), target);
  if (it == len.begin()) return pts.front();
  if (it == len.end()) return pts.back();
  const std::size_t k = static_cast<std::size_t>(it - len.begin());
  const double seg = len[k] - len[k - 1];
  const double w = seg > 0.0 ? (target - len[k - 1]) / seg : 0.0;
  return (1.0 - w) * pts[k - 1] + w * pts[k];
}

}  // namespace

double arc_length_distance(const GeodesicPath& a, const GeodesicPath& b, int samples) {
  if (a.points.size() < 2 || b.points.size() < 2) throw ConfigError("paths need >= 2 points");
  const auto la = cumulative_length(a.points);
  const auto lb = cumulative_length(b.points);
  double worst = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double f = static_cast<double>(k) / samples;
    worst = std::max(worst,
                     (point_at_fraction(a.points, la, f) - point_at_fraction(b.points, lb, f)).norm());
  }
  return worst;
}

}  // namespace finsler
