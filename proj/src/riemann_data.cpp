#include "finsler/riemann_data.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

double rho2_of(double mu, const Vec& x) {
  const double r2 = 1.0 + mu * x.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("1 + mu|x|^2 must be positive");
  return r2;
}

Mat const_curvature_metric(double mu, const Vec& x) {
  const double r2 = rho2_of(mu, x);
  const int n = static_cast<int>(x.size());
  return Mat::Identity(n, n) / r2 - mu * (x * x.transpose()) / (r2 * r2);
}

std::vector<Mat> const_curvature_metric_derivative(double mu, const Vec& x) {
  const double r2 = rho2_of(mu, x);
  const double r4 = r2 * r2;
  const double r6 = r4 * r2;
  const int n = static_cast<int>(x.size());
  std::vector<Mat> da(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 4.0 * mu * mu * x[i] * x[j] * x[k] / r6;
        if (i == j) v -= 2.0 * mu * x[k] / r4;
        if (i == k) v -= mu * x[j] / r4;
        if (j == k) v -= mu * x[i] / r4;
        da[k](i, j) = v;
      }
    }
  }
  return da;
}

Vec thm_three_form(const beta_kind::ThmThreeForm& bt, const Vec& x) {
  const double r2 = rho2_of(bt.mu, x);
  const double rho = std::sqrt(r2);
  const double r3 = r2 * rho;
  return (bt.lambda / r3) * x + bt.a / rho - (bt.mu * bt.a.dot(x) / r3) * x;
}

Mat thm_three_form_derivative(const beta_kind::ThmThreeForm& bt, const Vec& x) {
  const double r2 = rho2_of(bt.mu, x);
  const double rho = std::sqrt(r2);
  const double r3 = r2 * rho;
  const double r5 = r3 * r2;
  const double mu = bt.mu;
  const double ax = bt.a.dot(x);
  const int n = static_cast<int>(x.size());
  Mat db(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = -3.0 * mu * bt.lambda * x[i] * x[j] / r5 - mu * bt.a[i] * x[j] / r3 -
                 mu * bt.a[j] * x[i] / r3 + 3.0 * mu * mu * ax * x[i] * x[j] / r5;
      if (i == j) v += (bt.lambda - mu * ax) / r3;
      db(i, j) = v;
    }
  }
  return db;
}

Mat alpha_metric(const AlphaSpec& alpha, const Vec& x) {
  if (const auto* cc = std::get_if<alpha_kind::ConstCurvature>(&alpha)) {
    return const_curvature_metric(cc->mu, x);
  }
  const auto& ex = std::get<alpha_kind::Explicit>(alpha);
  Mat a = ex.metric(x);
  if (a.rows() != x.size() || a.cols() != x.size()) {
    throw DomainError("explicit alpha '" + ex.name + "' returned a matrix of wrong size");
  }
  return 0.5 * (a + a.transpose());
}

Vec beta_form(const BetaSpec& beta, const Vec& x) {
  if (const auto* bt = std::get_if<beta_kind::ThmThreeForm>(&beta)) return thm_three_form(*bt, x);
  const auto& ex = std::get<beta_kind::Explicit>(beta);
  Vec b = ex.form(x);
  if (b.size() != x.size()) {
    throw DomainError("explicit beta '" + ex.name + "' returned a covector of wrong size");
  }
  return b;
}

Mat checked_inverse(const Mat& a) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) throw DomainError("alpha is not positive definite here");
  return llt.solve(Mat::Identity(a.rows(), a.cols()));
}

}  // namespace

AlphaBetaSpec::AlphaBetaSpec(int dim, AlphaSpec alpha, BetaSpec beta)
    : dim_(dim), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (dim_ < 2) throw ConfigError("dimension must be at least 2");
  if (auto* bt = std::get_if<beta_kind::ThmThreeForm>(&beta_)) {
    if (bt->a.size() == 0) bt->a = Vec::Zero(dim_);
    if (bt->a.size() != dim_) throw ConfigError("beta vector a must have length dim");
    const auto* cc = std::get_if<alpha_kind::ConstCurvature>(&alpha_);
    if (cc == nullptr || cc->mu != bt->mu) {
      throw ConfigError("ThmThreeForm beta must pair with a constant-curvature alpha of the same mu");
    }
  }
}

double AlphaBetaSpec::domain_radius() const {
  if (const auto* cc = std::get_if<alpha_kind::ConstCurvature>(&alpha_)) {
    if (cc->mu < 0.0) return 1.0 / std::sqrt(-cc->mu);
  }
  return kInf;
}

void AlphaBetaSpec::check_point(const Vec& x) const {
  if (x.size() != dim_) throw DomainError("point has wrong dimension");
  if (!x.allFinite()) throw DomainError("point is not finite");
  const double r = domain_radius();
  if (std::isfinite(r) && x.norm() >= r - 1e-9) {
    throw DomainError("point lies outside the ball B(r_mu)");
  }
}

bool AlphaBetaSpec::alpha_is_const_curvature() const {
  return std::holds_alternative<alpha_kind::ConstCurvature>(alpha_);
}

bool AlphaBetaSpec::beta_is_thm_three() const {
  return std::holds_alternative<beta_kind::ThmThreeForm>(beta_);
}

PointFrame point_frame(const AlphaBetaSpec& spec, const Vec& x) {
  spec.check_point(x);
  PointFrame f;
  f.a = alpha_metric(spec.alpha(), x);
  f.a_inv = checked_inverse(f.a);
  f.b = beta_form(spec.beta(), x);
  f.b_up = f.a_inv * f.b;
  f.b2 = f.b.dot(f.b_up);
  return f;
}

double alpha_mu_at(double mu, const Vec& x, const Vec& y) {
  const double r2 = rho2_of(mu, x);
  const double xy = x.dot(y);
  const double q = r2 * y.squaredNorm() - mu * xy * xy;
  return std::sqrt(std::max(q, 0.0)) / r2;
}

double beta_thm3_at(double mu, double lambda, const Vec& a, const Vec& x, const Vec& y) {
  const double r2 = rho2_of(mu, x);
  const double xy = x.dot(y);
  return (lambda * xy + r2 * a.dot(y) - mu * a.dot(x) * xy) / (r2 * std::sqrt(r2));
}

std::vector<Mat> levi_civita(const Mat& a_inv, const std::vector<Mat>& da) {
  const int n = static_cast<int>(a_inv.rows());
  // First-kind symbols Gamma_{l,ij} = 1/2 (d_i a_jl + d_j a_il - d_l a_ij).
  std::vector<Mat> first(n, Mat::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        first[l](i, j) = 0.5 * (da[i](j, l) + da[j](i, l) - da[l](i, j));
  std::vector<Mat> gamma(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) gamma[k] += a_inv(k, l) * first[l];
  return gamma;
}

namespace {

std::vector<Mat> metric_derivative(const AlphaBetaSpec& spec, const Vec& x) {
  if (const auto* cc = std::get_if<alpha_kind::ConstCurvature>(&spec.alpha())) {
    return const_curvature_metric_derivative(cc->mu, x);
  }
  const int n = spec.dim();
  std::vector<Mat> da(n);
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += kFieldStep;
    xm[k] -= kFieldStep;
    da[k] = (alpha_metric(spec.alpha(), xp) - alpha_metric(spec.alpha(), xm)) / (2.0 * kFieldStep);
  }
  return da;
}

std::vector<Mat> christoffel_from(const AlphaBetaSpec& spec, const Vec& x, const Mat& a_inv,
                                  const std::vector<Mat>& da) {
  if (const auto* cc = std::get_if<alpha_kind::ConstCurvature>(&spec.alpha())) {
    const int n = spec.dim();
    const double r2 = rho2_of(cc->mu, x);
    std::vector<Mat> gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        gamma[k](i, k) -= cc->mu * x[i] / r2;
        gamma[k](k, i) -= cc->mu * x[i] / r2;
      }
    }
    return gamma;
  }
  return levi_civita(a_inv, da);
}

Mat form_derivative(const AlphaBetaSpec& spec, const Vec& x) {
  if (const auto* bt = std::get_if<beta_kind::ThmThreeForm>(&spec.beta())) {
    return thm_three_form_derivative(*bt, x);
  }
  const int n = spec.dim();
  Mat db(n, n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += kFieldStep;
    xm[j] -= kFieldStep;
    db.col(j) = (beta_form(spec.beta(), xp) - beta_form(spec.beta(), xm)) / (2.0 * kFieldStep);
  }
  return db;
}

}  // namespace

std::vector<Mat> christoffel(const AlphaBetaSpec& spec, const Vec& x) {
  spec.check_point(x);
  if (spec.alpha_is_const_curvature()) return christoffel_from(spec, x, Mat(), {});
  const Mat a_inv = checked_inverse(alpha_metric(spec.alpha(), x));
  return levi_civita(a_inv, metric_derivative(spec, x));
}

AlphaBetaJet beta_covariant_jet(const AlphaBetaSpec& spec, const Vec& x, const Vec& y) {
  const PointFrame frame = point_frame(spec, x);
  if (y.size() != spec.dim()) throw DomainError("direction has wrong dimension");
  const int n = spec.dim();

  AlphaBetaJet j;
  j.a = frame.a;
  j.a_inv = frame.a_inv;
  j.b = frame.b;
  j.b_up = frame.b_up;
  j.b2 = frame.b2;
  j.da = metric_derivative(spec, x);
  j.gamma = christoffel_from(spec, x, j.a_inv, j.da);
  j.db = form_derivative(spec, x);

  j.bcov = j.db;
  for (int k = 0; k < n; ++k) j.bcov -= j.b[k] * j.gamma[k];

  j.r_ij = 0.5 * (j.bcov + j.bcov.transpose());
  j.s_ij = 0.5 * (j.bcov - j.bcov.transpose());
  j.r_i = j.r_ij.transpose() * j.b_up;
  j.s_i = j.s_ij.transpose() * j.b_up;
  j.r_up = j.a_inv * j.r_i;
  j.s_up = j.a_inv * j.s_i;
  j.r = j.b_up.dot(j.r_i);

  j.r00 = y.dot(j.r_ij * y);
  j.r0 = j.r_i.dot(y);
  j.s0 = j.s_i.dot(y);
  j.s_up_0 = j.a_inv * (j.s_ij * y);
  return j;
}

Vec spray_riemann(const AlphaBetaSpec& spec, const Vec& x, const Vec& y) {
  const std::vector<Mat> gamma = christoffel(spec, x);
  const int n = spec.dim();
  Vec g(n);
  for (int i = 0; i < n; ++i) g[i] = 0.5 * y.dot(gamma[i] * y);
  return g;
}

double riemann_projective_factor(const AlphaBetaSpec& spec, const Vec& x, const Vec& y) {
  const auto* cc = std::get_if<alpha_kind::ConstCurvature>(&spec.alpha());
  if (cc == nullptr) throw PreconditionError("projective factor requires constant-curvature alpha");
  spec.check_point(x);
  return -cc->mu * x.dot(y) / rho2_of(cc->mu, x);
}

double conformal_factor(const AlphaBetaSpec& spec, const Vec& x) {
  const auto* bt = std::get_if<beta_kind::ThmThreeForm>(&spec.beta());
  if (bt == nullptr) throw PreconditionError("conformal factor requires a ThmThreeForm beta");
  spec.check_point(x);
  return (bt->lambda - bt->mu * bt->a.dot(x)) / std::sqrt(rho2_of(bt->mu, x));
}

}  // namespace finsler
