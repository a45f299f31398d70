#include "finsler/metric_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "finsler/errors.hpp"

namespace finsler {

MetricPoint metric_point(const MetricSpec& spec, const Vec& x, const Vec& y) {
  if (y.size() != spec.dim()) throw DomainError("direction has wrong dimension");
  if (!y.allFinite()) throw DomainError("direction is not finite");
  if (y.squaredNorm() == 0.0) throw DegenerateDirection("y must be nonzero");

  MetricPoint mp;
  mp.frame = point_frame(spec.ab, x);
  mp.y_low = mp.frame.a * y;
  mp.alpha = std::sqrt(std::max(y.dot(mp.y_low), 0.0));
  if (!(mp.alpha > 0.0)) throw DegenerateDirection("alpha(x, y) vanished");
  mp.beta = mp.frame.b.dot(y);

  const double b = std::sqrt(mp.frame.b2);
  double s = mp.beta / mp.alpha;
  const double excess = std::abs(s) - b;
  if (excess > 0.0) {
    if (excess > 1e-12 * std::max(1.0, b)) throw DomainError("|beta/alpha| exceeds b");
    s = std::copysign(b, s);
  }
  mp.s = s;
  mp.jet = eval_jet(spec.phi, mp.frame.b2, s);
  return mp;
}

RegularityValues regularity_values(const PhiJet& jet, double b2, double s) {
  const double ineq1 = jet.phi - s * jet.phi2;
  return {jet.phi, ineq1, ineq1 + (b2 - s * s) * jet.phi22};
}

FundamentalTensorTerms tensor_terms(const PhiJet& jet, double b2, double s) {
  const double phi = jet.phi;
  const double phi2 = jet.phi2;
  const double phi22 = jet.phi22;
  const double k1 = phi - s * phi2;
  const double k2 = k1 + (b2 - s * s) * phi22;

  FundamentalTensorTerms t;
  t.rho = phi * k1;
  t.rho0 = phi * phi22 + phi2 * phi2;
  t.rho1 = k1 * phi2 - s * phi * phi22;
  if (phi == 0.0 || k2 == 0.0) {
    t.eta = t.eta0 = t.eta1 = std::numeric_limits<double>::quiet_NaN();
  } else {
    t.eta = -phi22 / k2;
    t.eta0 = -t.rho1 / (phi * k2);
    t.eta1 = (s * phi + (b2 - s * s) * phi2) * t.rho1 / (phi * phi * k2);
  }
  return t;
}

double eval_F(const MetricSpec& spec, const Vec& x, const Vec& y) {
  const MetricPoint mp = metric_point(spec, x, y);
  return mp.alpha * mp.jet.phi;
}

Mat fundamental_tensor(const MetricSpec& spec, const Vec& x, const Vec& y) {
  const MetricPoint mp = metric_point(spec, x, y);
  const FundamentalTensorTerms t = tensor_terms(mp.jet, mp.frame.b2, mp.s);
  const Vec alpha_y = mp.y_low / mp.alpha;
  const Vec& b = mp.frame.b;
  Mat g = t.rho * mp.frame.a + t.rho0 * (b * b.transpose()) +
          t.rho1 * (b * alpha_y.transpose() + alpha_y * b.transpose()) -
          mp.s * t.rho1 * (alpha_y * alpha_y.transpose());
  return g;
}

double det_g(const MetricSpec& spec, const Vec& x, const Vec& y) {
  const MetricPoint mp = metric_point(spec, x, y);
  const RegularityValues rv = regularity_values(mp.jet, mp.frame.b2, mp.s);
  const int n = spec.dim();
  return std::pow(rv.phi, n + 1) * std::pow(rv.ineq1, n - 2) * rv.ineq2 *
         mp.frame.a.determinant();
}

Mat inverse_g(const MetricSpec& spec, const Vec& x, const Vec& y) {
  const MetricPoint mp = metric_point(spec, x, y);
  const RegularityValues rv = regularity_values(mp.jet, mp.frame.b2, mp.s);
  if (!(rv.phi > 0.0) || !(rv.ineq1 > 0.0) || !(rv.ineq2 > 0.0)) {
    throw SingularTensor("fundamental tensor is not invertible by the closed form here");
  }
  const FundamentalTensorTerms t = tensor_terms(mp.jet, mp.frame.b2, mp.s);
  const Vec& bu = mp.frame.b_up;
  const double a = mp.alpha;
  Mat gi = mp.frame.a_inv + t.eta * (bu * bu.transpose()) +
           (t.eta0 / a) * (bu * y.transpose() + y * bu.transpose()) +
           (t.eta1 / (a * a)) * (y * y.transpose());
  return gi / t.rho;
}

ValidityReport finsler_validity(const PhiFamily& phi, int dim, double b_max, int grid) {
  if (grid < 2) throw ConfigError("validity grid must have at least 2 nodes per axis");
  if (!(b_max > 0.0)) throw ConfigError("b_max must be positive");
  ValidityReport rep;
  rep.dim = dim;
  rep.b_max = b_max;
  rep.grid = grid;

  for (int i = 0; i < grid; ++i) {
    const double b = b_max * i / (grid - 1);
    const double b2 = b * b;
    bool failed = false;
    for (int j = 0; j < grid; ++j) {
      const double s = std::clamp(-b + 2.0 * b * j / (grid - 1), -b, b);
      try {
        const RegularityValues rv = regularity_values(eval_jet(phi, b2, s), b2, s);
        rep.min_phi = std::min(rep.min_phi, rv.phi);
        rep.min_ineq1 = std::min(rep.min_ineq1, rv.ineq1);
        rep.min_ineq2 = std::min(rep.min_ineq2, rv.ineq2);
        if (!(rv.phi > 0.0) || !(rv.ineq2 > 0.0) || (dim >= 3 && !(rv.ineq1 > 0.0))) {
          failed = true;
        }
      } catch (const Error&) {
        failed = true;
      }
    }
    if (failed && !rep.first_failure_b) {
      rep.first_failure_b = b;
      rep.valid = false;
    }
  }
  return rep;
}

double rotation_invariance_check(const MetricSpec& spec, const Vec& x, int trials,
                                 std::uint64_t seed) {
  const int n = spec.dim();
  const PointFrame frame = point_frame(spec.ab, x);
  Eigen::LLT<Mat> llt(frame.a);
  const Mat L = llt.matrixL();

  // In z = L^T y, alpha = |z| and beta = <u, z> with u = L^{-1} b.
  const Vec u = L.triangularView<Eigen::Lower>().solve(frame.b);
  Mat basis = Mat::Identity(n, n);
  if (u.norm() > 0.0) {
    Mat seedm = Mat::Identity(n, n);
    seedm.col(0) = u;
    Eigen::HouseholderQR<Mat> qr(seedm);
    const Mat q = qr.householderQ();
    basis.leftCols(n - 1) = q.rightCols(n - 1);
    basis.col(n - 1) = q.col(0);
  }
  // Columns of to_y map adapted coordinates to y.
  const Mat to_y = L.transpose().triangularView<Eigen::Upper>().solve(basis);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = normal(rng);
    Mat A(n - 1, n - 1);
    if (n == 2) {
      A(0, 0) = -1.0;
    } else {
      for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) A(i, j) = normal(rng);
      Eigen::HouseholderQR<Mat> qr(A);
      A = qr.householderQ();
    }
    Vec c2 = c;
    c2.head(n - 1) = A * c.head(n - 1);
    const double f1 = eval_F(spec, x, to_y * c);
    const double f2 = eval_F(spec, x, to_y * c2);
    worst = std::max(worst, std::abs(f1 - f2) / f1);
  }
  return worst;
}

}  // namespace finsler
