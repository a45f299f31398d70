#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "finsler/metric_engine.hpp"
#include "finsler/phi_families.hpp"

namespace fixtures {

using finsler::FProfile;
using finsler::GProfile;
using finsler::MetricSpec;
using finsler::PhiFamily;
using finsler::Vec;

inline constexpr double kPi = std::numbers::pi;

struct Named {
  std::string label;
  PhiFamily phi;
};

inline const std::vector<FProfile::Kind>& f_kinds() {
  static const std::vector<FProfile::Kind> kinds = {
      FProfile::Kind::InvSqrtOneMinusT, FProfile::Kind::OnePlusT,
      FProfile::Kind::SqrtOneMinusT,    FProfile::Kind::SqrtOnePlusT,
      FProfile::Kind::LogTwoPlusT,      FProfile::Kind::LogTwoMinusT,
      FProfile::Kind::OnePlusArctanT};
  return kinds;
}

/// Every shipped kind, the Lemma-C profiles with a nonzero g.
inline std::vector<Named> shipped_families() {
  std::vector<Named> out = {
      {"constant", PhiFamily::constant()},
      {"randers", PhiFamily::randers()},
      {"berwald_square", PhiFamily::berwald_square()},
      {"bryant(pi/3)", PhiFamily::bryant(kPi / 3)},
      {"bryant(-pi/4)", PhiFamily::bryant(-kPi / 4)},
      {"bryant(0.9pi)", PhiFamily::bryant(0.9 * kPi)},
  };
  for (auto k : f_kinds()) {
    FProfile f(k);
    out.push_back({"lemma_c(" + f.name() + ")", PhiFamily::lemma_c(f, GProfile::affine(0.3, 0.5))});
  }
  out.push_back({"mu(0.3, lemma_c(one_plus_t))",
                 PhiFamily::mu_transformed(
                     PhiFamily::lemma_c(FProfile(FProfile::Kind::OnePlusT), GProfile::berwald()),
                     0.3)});
  out.push_back(
      {"mu(-0.2, bryant(pi/4))", PhiFamily::mu_transformed(PhiFamily::bryant(kPi / 4), -0.2)});
  return out;
}

inline Vec small_a(int dim) {
  Vec a = Vec::Zero(dim);
  a[dim - 1] = 0.05;
  a[0] = -0.03;
  return a;
}

inline MetricSpec thm_spec(const PhiFamily& phi, int dim, double mu, double lambda = 1.0,
                           Vec a = Vec()) {
  if (a.size() == 0) a = Vec::Zero(dim);
  return MetricSpec{phi, finsler::AlphaBetaSpec(dim, finsler::alpha_kind::ConstCurvature{mu},
                                                finsler::beta_kind::ThmThreeForm{mu, lambda, a})};
}

/// Funk metric as phi = 1 + s over alpha_{-1} with beta = <x,y>/(1-|x|^2).
inline MetricSpec funk_randers(int dim) {
  return MetricSpec{
      PhiFamily::randers(),
      finsler::AlphaBetaSpec(dim, finsler::alpha_kind::ConstCurvature{-1.0},
                             finsler::beta_kind::Explicit{"funk", [](const Vec& x) {
                                                            return Vec(x / (1.0 - x.squaredNorm()));
                                                          }})};
}

/// Funk metric as a Lemma-C solution over the Euclidean metric with beta = <x,y>.
inline MetricSpec funk_lemma_c(int dim) {
  return thm_spec(PhiFamily::lemma_c(FProfile(FProfile::Kind::InvSqrtOneMinusT), GProfile::funk()),
                  dim, 0.0);
}

inline MetricSpec berwald_metric(int dim) {
  return thm_spec(PhiFamily::berwald_square(), dim, -1.0);
}

/// Explicit non-closed beta = c + M x over a non-constant-curvature alpha.
inline MetricSpec generic_spec(const PhiFamily& phi, int dim) {
  Vec c = Vec::Zero(dim);
  c[0] = 0.1;
  finsler::Mat m = finsler::Mat::Zero(dim, dim);
  m(0, 1) = 0.3;
  m(1, 0) = -0.1;
  m(dim - 1, dim - 1) = 0.2;
  return MetricSpec{
      phi, finsler::AlphaBetaSpec(
               dim,
               finsler::alpha_kind::Explicit{"quadratic",
                                             [](const Vec& x) {
                                               const int n = static_cast<int>(x.size());
                                               return finsler::Mat(
                                                   (1.0 + 0.2 * x.squaredNorm()) *
                                                       finsler::Mat::Identity(n, n) +
                                                   0.2 * x * x.transpose());
                                             }},
               finsler::beta_kind::Explicit{"affine",
                                            [c, m](const Vec& x) { return Vec(c + m * x); }})};
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Vec normal(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = dist_(rng_);
    return v;
  }

  Vec in_ball(int n, double radius) {
    Vec d = normal(n);
    d /= d.norm();
    return radius * std::pow(uni_(rng_), 1.0 / n) * d;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uni_(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

}  // namespace fixtures
