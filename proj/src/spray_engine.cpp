#include "finsler/spray_engine.hpp"

#include <cmath>
#include <limits>

#include "finsler/errors.hpp"
#include "finsler/pde_lab.hpp"

namespace finsler {

std::string to_string(SprayMethod m) {
  switch (m) {
    case SprayMethod::ClosedForm: return "closed_form";
    case SprayMethod::ConformalClosed: return "conformal_closed";
    case SprayMethod::FdOracle: return "fd_oracle";
  }
  return "unknown";
}

SprayTerms spray_terms(const PhiJet& jet, double b2, double s) {
  const double phi = jet.phi;
  const double k1 = phi - s * jet.phi2;
  const double k2 = k1 + (b2 - s * s) * jet.phi22;
  if (phi == 0.0 || k1 == 0.0 || k2 == 0.0) {
    throw SingularTensor("spray_terms: vanishing denominator");
  }
  SprayTerms t;
  t.Q = jet.phi2 / k1;
  t.R = jet.phi1 / k1;
  t.Theta = (k1 * jet.phi2 - s * phi * jet.phi22) / (2.0 * phi * k2);
  t.Psi = jet.phi22 / (2.0 * k2);
  t.Pi = (k1 * jet.phi12 - s * jet.phi1 * jet.phi22) / (k1 * k2);
  t.Omega = 2.0 * jet.phi1 / phi - (s * phi + (b2 - s * s) * jet.phi2) / phi * t.Pi;
  return t;
}

ProjectiveFit projective_factor(const Vec& G, const Vec& y, double floor) {
  const double yy = y.squaredNorm();
  if (yy == 0.0) throw DegenerateDirection("projective_factor: y must be nonzero");
  ProjectiveFit fit;
  fit.P = G.dot(y) / yy;
  fit.residual = (G - fit.P * y).norm() / std::max(G.norm(), floor);
  return fit;
}

ProjectiveFit spray_projective_fit(const Vec& G, const Vec& y, double F) {
  return projective_factor(G, y, std::max(kSprayZeroScale * F * F, 1e-300));
}

SprayResult spray_closed(const MetricSpec& spec, const Vec& x, const Vec& y) {
  const MetricPoint mp = metric_point(spec, x, y);
  const AlphaBetaJet rj = beta_covariant_jet(spec.ab, x, y);
  const SprayTerms t = spray_terms(mp.jet, mp.frame.b2, mp.s);
  const int n = spec.dim();
  const double a = mp.alpha;

  Vec G(n);
  for (int i = 0; i < n; ++i) G[i] = 0.5 * y.dot(rj.gamma[i] * y);

  const double common = -2.0 * a * t.Q * rj.s0 + rj.r00 + 2.0 * a * a * t.R * rj.r;
  const double rs0 = rj.r0 + rj.s0;
  G += a * t.Q * rj.s_up_0;
  G += (t.Theta * common + a * t.Omega * rs0) / a * y;
  G += (t.Psi * common + a * t.Pi * rs0) * rj.b_up;
  G -= a * a * t.R * (rj.r_up + rj.s_up);

  SprayResult out;
  out.G = G;
  out.method = SprayMethod::ClosedForm;
  const ProjectiveFit fit = spray_projective_fit(G, y, a * mp.jet.phi);
  out.residual = fit.residual;
  if (fit.residual <= kClosedFormFlatTol) out.P = fit.P;
  return out;
}

namespace {

Vec fd_spray_once(const MetricSpec& spec, const Vec& x, const Vec& y, const Mat& g_inv,
                  double hx, double hy) {
  const int n = spec.dim();
  auto F2 = [&](const Vec& xx, const Vec& yy) {
    const double f = eval_F(spec, xx, yy);
    return f * f;
  };
  const double ynorm = y.norm();
  const double ys = hy * ynorm;
  const double ts = hx / ynorm;  // x + t y moves by hx in x

  // d/dy^l of F^2 at a shifted base point.
  auto dy = [&](const Vec& xx, int l) {
    Vec yp = y, ym = y;
    yp[l] += ys;
    ym[l] -= ys;
    return (F2(xx, yp) - F2(xx, ym)) / (2.0 * ys);
  };

  Vec rhs(n);
  const Vec xf = x + ts * y;
  const Vec xb = x - ts * y;
  for (int l = 0; l < n; ++l) {
    // [F^2]_{x^k y^l} y^k is the derivative of [F^2]_{y^l} along x + t y.
    const double mixed = (dy(xf, l) - dy(xb, l)) / (2.0 * ts);
    Vec xp = x, xm = x;
    xp[l] += hx;
    xm[l] -= hx;
    const double dx = (F2(xp, y) - F2(xm, y)) / (2.0 * hx);
    rhs[l] = mixed - dx;
  }
  return 0.25 * g_inv * rhs;
}

}  // namespace

Vec spray_oracle_fd(const MetricSpec& spec, const Vec& x, const Vec& y,
                    const FdSprayOptions& opts) {
  const Mat g_inv = inverse_g(spec, x, y);
  const Vec G1 = fd_spray_once(spec, x, y, g_inv, opts.x_step, opts.y_step);
  const Vec G2 = fd_spray_once(spec, x, y, g_inv, 0.5 * opts.x_step, 0.5 * opts.y_step);

  // Nested differences carry round-off of order eps F^2 / (hx hy); disagreement below a
  // multiple of that floor is noise, not truncation error.
  const double f = eval_F(spec, x, y);
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = 100.0 * eps * f * f / (0.25 * opts.x_step * opts.y_step);
  const double scale = std::max(G2.norm(), floor);
  if ((G1 - G2).norm() > opts.richardson_tol * scale) {
    throw StepTooLarge("spray_oracle_fd: h and h/2 estimates disagree");
  }
  return G1;
}

SprayResult spray_conformal_closed(const MetricSpec& spec, const Vec& x, const Vec& y) {
  if (!spec.ab.alpha_is_const_curvature()) {
    throw PreconditionError("conformal spray requires a constant-curvature alpha");
  }
  const MetricPoint mp = metric_point(spec, x, y);

  double c = 0.0;
  if (spec.ab.beta_is_thm_three()) {
    c = conformal_factor(spec.ab, x);
  } else {
    const AlphaBetaJet rj = beta_covariant_jet(spec.ab, x, y);
    const int n = spec.dim();
    c = (rj.a_inv * rj.r_ij).trace() / n;
    const double scale = std::max(1.0, rj.bcov.cwiseAbs().maxCoeff());
    const double closed_err = rj.s_ij.cwiseAbs().maxCoeff();
    const double conf_err = (rj.r_ij - c * rj.a).cwiseAbs().maxCoeff();
    if (closed_err > 1e-6 * scale || conf_err > 1e-6 * scale) {
      throw PreconditionError("beta is not closed and conformal with respect to alpha");
    }
  }

  const double res = pde_residual(mp.jet, mp.s);
  if (res > 1e-6) {
    throw PreconditionError("phi does not satisfy phi_22 = 2(phi_1 - s phi_12) here");
  }

  const double theta = riemann_projective_factor(spec.ab, x, y);
  const PhiJet& j = mp.jet;
  const double P = theta + c * mp.alpha * (j.phi2 + 2.0 * mp.s * j.phi1) / (2.0 * j.phi);

  SprayResult out;
  out.G = P * y;
  out.P = P;
  out.residual = 0.0;
  out.method = SprayMethod::ConformalClosed;
  return out;
}

}  // namespace finsler
