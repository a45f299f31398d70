#pragma once

// Spray coefficients G^i of F = alpha phi(b^2, beta/alpha) by three routes:
//  - the closed form in terms of G^i_alpha and the r/s contractions of b_{i|j},
//  - the projective specialization for closed conformal beta and phi solving
//    phi_22 = 2(phi_1 - s phi_12),
//  - a definition-level finite-difference oracle
//    G^i = 1/4 g^{il} ([F^2]_{x^k y^l} y^k - [F^2]_{x^l}).

#include <optional>
#include <string>

#include "finsler/metric_engine.hpp"
#include "finsler/types.hpp"

namespace finsler {

struct SprayTerms {
  double Q = 0.0;
  double R = 0.0;
  double Theta = 0.0;
  double Psi = 0.0;
  double Pi = 0.0;
  double Omega = 0.0;
};

enum class SprayMethod { ClosedForm, ConformalClosed, FdOracle };

std::string to_string(SprayMethod m);

struct SprayResult {
  Vec G;
  /// Set when residual is within the flatness threshold of the method.
  std::optional<double> P;
  double residual = 0.0;
  SprayMethod method = SprayMethod::ClosedForm;
};

struct ProjectiveFit {
  double P = 0.0;
  double residual = 0.0;
};

/// Residual threshold for accepting G = P y from the closed-form routes.
inline constexpr double kClosedFormFlatTol = 1e-8;
/// Residual threshold for accepting G = P y from the finite-difference route.
inline constexpr double kFdFlatTol = 1e-6;

/// Throws SingularTensor when phi - s phi_2, phi or the second regularity quantity vanish.
SprayTerms spray_terms(const PhiJet& jet, double b2, double s);

SprayResult spray_closed(const MetricSpec& spec, const Vec& x, const Vec& y);

struct FdSprayOptions {
  double x_step = 1e-4;
  double y_step = 1e-4;
  /// Max relative disagreement between steps h and h/2 before StepTooLarge is raised.
  double richardson_tol = 1e-3;
};

/// Definition-level oracle. Uses nested central differences of F^2 and the closed-form
/// inverse fundamental tensor. Throws StepTooLarge if the h vs h/2 check fails.
Vec spray_oracle_fd(const MetricSpec& spec, const Vec& x, const Vec& y,
                    const FdSprayOptions& opts = {});

/// Requires constant-curvature alpha and a closed conformal beta (ThmThreeForm, or an
/// explicit beta that passes a numerical closedness/conformality check), and a phi whose
/// PDE residual at (b^2, s) is <= 1e-6. Throws PreconditionError otherwise.
SprayResult spray_conformal_closed(const MetricSpec& spec, const Vec& x, const Vec& y);

/// P = <G, y>/<y, y>, residual = |G - P y| / max(|G|, floor).
ProjectiveFit projective_factor(const Vec& G, const Vec& y, double floor = 1e-300);

/// Sprays below this fraction of F^2 are treated as zero when normalizing residuals.
inline constexpr double kSprayZeroScale = 1e-6;

/// projective_factor with floor kSprayZeroScale * F^2, so that a spray that vanishes
/// identically (e.g. a Euclidean metric in disguise) reports round-off, not O(1).
ProjectiveFit spray_projective_fit(const Vec& G, const Vec& y, double F);

}  // namespace finsler
