#pragma once

// Evaluators for the functions phi(b^2, s) that define general (alpha, beta)-metrics
// F = alpha * phi(b^2, beta / alpha).
//
// Subscript convention: 1 is the derivative in the first argument b^2, 2 is the
// derivative in s. Every evaluator returns the value together with the five partials
// needed by the fundamental tensor and spray formulas.

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "finsler/types.hpp"

namespace finsler {

struct PhiJet {
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi12 = 0.0;
  double phi22 = 0.0;
};

/// One-variable profile f(t) used by the Lemma-C solution constructor.
class FProfile {
 public:
  enum class Kind {
    InvSqrtOneMinusT,  // 1/sqrt(1-t)
    OnePlusT,          // 1+t
    SqrtOneMinusT,     // sqrt(1-t)
    SqrtOnePlusT,      // sqrt(1+t)
    LogTwoPlusT,       // ln(2+t)
    LogTwoMinusT,      // ln(2-t)
    OnePlusArctanT,    // 1+arctan(t)
    Custom,
  };

  using Fn = std::function<double(double)>;

  explicit FProfile(Kind kind);
  /// User profile; the s-integrals fall back to 32-node Gauss-Legendre quadrature.
  /// f is required to be smooth for t < t_max.
  static FProfile custom(std::string name, Fn f, Fn df, Fn d2f, double t_max = kInf);
  static FProfile from_name(const std::string& name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double t_max() const { return t_max_; }

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;

 private:
  FProfile() = default;

  Kind kind_ = Kind::Custom;
  std::string name_;
  double t_max_ = kInf;
  Fn f_, df_, d2f_;
};

/// The free function g(b^2) of the Lemma-C construction, with its derivative.
class GProfile {
 public:
  enum class Kind {
    Zero,
    RandersNavigation,  // -1/(1-b^2)
    Funk,               // +1/(1-b^2)
    Berwald,            // 2 sqrt(1+b^2)
    Affine,             // c0 + c1 b^2
    Custom,
  };

  using Fn = std::function<double(double)>;

  GProfile() = default;
  static GProfile zero() { return GProfile(); }
  static GProfile randers_navigation();
  static GProfile funk();
  static GProfile berwald();
  static GProfile affine(double c0, double c1);
  static GProfile custom(std::string name, Fn g, Fn dg, double b2_max = kInf);
  static GProfile from_name(const std::string& name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double b2_max() const { return b2_max_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }

  double value(double b2) const;
  double d1(double b2) const;

 private:
  Kind kind_ = Kind::Zero;
  std::string name_ = "zero";
  double b2_max_ = kInf;
  double c0_ = 0.0;
  double c1_ = 0.0;
  Fn g_, dg_;
};

class PhiFamily;

namespace phi_kind {
struct Constant {};
struct Randers {};        // 1 + s
struct BerwaldSquare {};  // (sqrt(1+b^2) + s)^2
struct Bryant {
  double p;
};
struct LemmaC {
  FProfile f;
  GProfile g;
};
struct MuTransformed {
  std::shared_ptr<const PhiFamily> base;
  double mu;
};
}  // namespace phi_kind

/// Immutable description of one phi(b^2, s).
class PhiFamily {
 public:
  using Kind = std::variant<phi_kind::Constant, phi_kind::Randers, phi_kind::BerwaldSquare,
                            phi_kind::Bryant, phi_kind::LemmaC, phi_kind::MuTransformed>;

  static PhiFamily constant();
  static PhiFamily randers();
  static PhiFamily berwald_square();
  static PhiFamily bryant(double p);
  static PhiFamily lemma_c(FProfile f, GProfile g = GProfile::zero());
  static PhiFamily mu_transformed(const PhiFamily& base, double mu);

  const Kind& kind() const { return kind_; }
  std::string name() const;

  /// Sup of b for which the formula can be evaluated (+inf when unbounded).
  double domain_bound() const;
  /// b_o: sup of b below which the family is declared regular.
  double regularity_bound() const;

 private:
  explicit PhiFamily(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Value and partials of phi at (b2, s). Requires 0 <= s^2 <= b2 < domain_bound^2.
PhiJet eval_jet(const PhiFamily& family, double b2, double s);

struct ComplexJet {
  std::complex<double> Phi, Phi1, Phi2, Phi12, Phi22;
};

/// Phi = (sqrt(e^{ip} + b^2 - s^2) - i s) / (e^{ip} + b^2) with the principal square root.
/// Throws BranchError when e^{ip} + b^2 - s^2 lies on the closed negative real axis.
ComplexJet bryant_Phi(double p, double b2, double s);

/// Regularity bound b_o of the Bryant family; +inf for |p| <= pi/2.
double bryant_b_o(double p);

PhiJet lemma_c_phi(const FProfile& f, const GProfile& g, double b2, double s);

/// phi_mu(b^2, s) = sqrt(1+mu(b^2-s^2))/(1+mu b^2) * phi(B, S) with the chain-rule jet.
PhiJet mu_transform(const PhiFamily& base, double mu, double b2, double s);

}  // namespace finsler
