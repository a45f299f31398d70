#pragma once

// F = alpha * phi(b^2, beta/alpha): the metric function, its fundamental tensor in closed
// form, the determinant and inverse, and the regularity criteria on phi.

#include <cstdint>
#include <optional>

#include "finsler/phi_families.hpp"
#include "finsler/riemann_data.hpp"
#include "finsler/types.hpp"

namespace finsler {

struct MetricSpec {
  PhiFamily phi;
  AlphaBetaSpec ab;

  int dim() const { return ab.dim(); }
};

struct FundamentalTensorTerms {
  double rho = 0.0;
  double rho0 = 0.0;
  double rho1 = 0.0;
  double eta = 0.0;
  double eta0 = 0.0;
  double eta1 = 0.0;
};

/// Everything the closed forms need at one (x, y).
struct MetricPoint {
  PointFrame frame;
  double alpha = 0.0;
  double beta = 0.0;
  double s = 0.0;
  Vec y_low;  // y_i = a_ij y^j
  PhiJet jet;
};

/// Evaluates alpha, beta, s and the phi-jet. s = beta/alpha is clamped to [-b, b] when it
/// overshoots by at most 1e-12 (relative); larger excursions raise DomainError.
MetricPoint metric_point(const MetricSpec& spec, const Vec& x, const Vec& y);

/// rho-terms are always defined; eta-terms are NaN where phi or the second regularity
/// quantity vanishes.
FundamentalTensorTerms tensor_terms(const PhiJet& jet, double b2, double s);

double eval_F(const MetricSpec& spec, const Vec& x, const Vec& y);
Mat fundamental_tensor(const MetricSpec& spec, const Vec& x, const Vec& y);
double det_g(const MetricSpec& spec, const Vec& x, const Vec& y);
Mat inverse_g(const MetricSpec& spec, const Vec& x, const Vec& y);

/// The three regularity quantities of phi at one (b, s).
struct RegularityValues {
  double phi;
  double ineq1;  // phi - s phi_2
  double ineq2;  // phi - s phi_2 + (b^2 - s^2) phi_22
};

RegularityValues regularity_values(const PhiJet& jet, double b2, double s);

struct ValidityReport {
  bool valid = true;
  double min_phi = kInf;
  double min_ineq1 = kInf;
  double min_ineq2 = kInf;
  std::optional<double> first_failure_b;
  int dim = 0;
  double b_max = 0.0;
  int grid = 0;
};

inline constexpr int kDefaultValidityGrid = 201;

/// Samples grid x grid nodes (b, s) with 0 <= b <= b_max, |s| <= b. For dim >= 3 all of
/// phi, ineq1, ineq2 must be positive; for dim == 2 ineq1 is reported but not required.
/// Nodes where phi cannot be evaluated count as failures.
ValidityReport finsler_validity(const PhiFamily& phi, int dim, double b_max,
                                int grid = kDefaultValidityGrid);

/// Max relative deviation |F(y) - F(Ay)|/F(y) over random y and random A in O(n-1) acting
/// on an alpha-orthonormal basis whose last vector is dual to beta.
double rotation_invariance_check(const MetricSpec& spec, const Vec& x, int trials,
                                 std::uint64_t seed = 42);

}  // namespace finsler
