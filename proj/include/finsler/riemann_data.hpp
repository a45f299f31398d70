#pragma once

// Riemannian data (alpha, beta) of a general (alpha, beta)-metric: the constant-curvature
// metric alpha_mu, the closed conformal 1-form beta_mu, Christoffel symbols, the covariant
// derivative b_{i|j} and its contractions.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

/// Central-difference step for x-derivatives of user-supplied fields.
inline constexpr double kFieldStep = 1e-5;

namespace alpha_kind {
/// alpha = sqrt((1+mu|x|^2)|y|^2 - mu<x,y>^2) / (1+mu|x|^2), sectional curvature mu.
struct ConstCurvature {
  double mu;
};
/// a_ij(x) sampled from a callable; derivatives by central differences.
struct Explicit {
  std::string name;
  std::function<Mat(const Vec&)> metric;
};
}  // namespace alpha_kind

namespace beta_kind {
/// beta = [lambda<x,y> + (1+mu|x|^2)<a,y> - mu<a,x><x,y>] / (1+mu|x|^2)^{3/2}.
struct ThmThreeForm {
  double mu;
  double lambda;
  Vec a;
};
/// b_i(x) sampled from a callable; derivatives by central differences.
struct Explicit {
  std::string name;
  std::function<Vec(const Vec&)> form;
};
}  // namespace beta_kind

using AlphaSpec = std::variant<alpha_kind::ConstCurvature, alpha_kind::Explicit>;
using BetaSpec = std::variant<beta_kind::ThmThreeForm, beta_kind::Explicit>;

class AlphaBetaSpec {
 public:
  /// Throws ConfigError on dim < 2, a size mismatch, or a ThmThreeForm whose mu
  /// differs from the constant-curvature alpha it is paired with.
  AlphaBetaSpec(int dim, AlphaSpec alpha, BetaSpec beta);

  int dim() const { return dim_; }
  const AlphaSpec& alpha() const { return alpha_; }
  const BetaSpec& beta() const { return beta_; }

  /// r_mu = 1/sqrt(-mu) for constant-curvature alpha with mu < 0, +inf otherwise.
  double domain_radius() const;
  /// Throws DomainError unless x has the right size and |x| < r_mu - 1e-9.
  void check_point(const Vec& x) const;

  bool alpha_is_const_curvature() const;
  bool beta_is_thm_three() const;

 private:
  int dim_;
  AlphaSpec alpha_;
  BetaSpec beta_;
};

/// a_ij, b_i and derived algebraic quantities at one point (no derivatives).
struct PointFrame {
  Mat a;
  Mat a_inv;
  Vec b;
  Vec b_up;
  double b2 = 0.0;
};

PointFrame point_frame(const AlphaBetaSpec& spec, const Vec& x);

struct AlphaBetaJet {
  Mat a;
  Mat a_inv;
  std::vector<Mat> da;     // da[k](i, j) = d a_ij / d x^k
  std::vector<Mat> gamma;  // gamma[k](i, j) = Gamma^k_ij
  Vec b;
  Vec b_up;
  double b2 = 0.0;
  Mat db;    // db(i, j) = d b_i / d x^j
  Mat bcov;  // b_{i|j}
  Mat r_ij;
  Mat s_ij;
  Vec r_i;  // b^j r_ji
  Vec s_i;  // b^j s_ji
  Vec r_up;
  Vec s_up;
  double r = 0.0;  // b^i r_i
  // Contractions with y.
  double r00 = 0.0;
  double r0 = 0.0;
  double s0 = 0.0;
  Vec s_up_0;  // a^{ij} s_jk y^k
};

double alpha_mu_at(double mu, const Vec& x, const Vec& y);
double beta_thm3_at(double mu, double lambda, const Vec& a, const Vec& x, const Vec& y);

/// Christoffel symbols Gamma^k_ij at x (analytic for constant curvature, Levi-Civita from
/// finite-difference metric derivatives otherwise).
std::vector<Mat> christoffel(const AlphaBetaSpec& spec, const Vec& x);

/// Levi-Civita connection from a metric and its first derivatives.
std::vector<Mat> levi_civita(const Mat& a_inv, const std::vector<Mat>& da);

/// All Riemannian quantities entering the spray formula at (x, y).
AlphaBetaJet beta_covariant_jet(const AlphaBetaSpec& spec, const Vec& x, const Vec& y);

/// G^i_alpha = 1/2 Gamma^i_jk y^j y^k.
Vec spray_riemann(const AlphaBetaSpec& spec, const Vec& x, const Vec& y);

/// Projective factor theta = -mu<x,y>/(1+mu|x|^2) of a constant-curvature alpha.
/// Throws PreconditionError for explicit alpha.
double riemann_projective_factor(const AlphaBetaSpec& spec, const Vec& x, const Vec& y);

/// Conformal factor c(x) with b_{i|j} = c a_ij for ThmThreeForm beta:
/// c = (lambda - mu<a,x>)/sqrt(1+mu|x|^2). Throws PreconditionError for explicit beta.
double conformal_factor(const AlphaBetaSpec& spec, const Vec& x);

}  // namespace finsler
