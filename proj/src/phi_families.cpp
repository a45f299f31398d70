#include "finsler/phi_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "finsler/errors.hpp"
#include "finsler/quadrature.hpp"

namespace finsler {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Validates (b2, s) against |s| <= b < bound and returns t = b^2 - s^2 >= 0.
double check_args(double b2, double s, double bound, const char* who) {
  if (!(b2 >= 0.0) || !std::isfinite(s)) {
    throw DomainError(std::string(who) + ": b^2 must be nonnegative and s finite");
  }
  const double t = b2 - s * s;
  if (t < -1e-12 * std::max(1.0, b2)) {
    throw DomainError(std::string(who) + ": s^2 exceeds b^2");
  }
  if (std::isfinite(bound) && b2 >= bound * bound) {
    throw DomainError(std::string(who) + ": b^2 = " + fmt(b2) + " outside domain b < " +
                      fmt(bound));
  }
  return std::max(t, 0.0);
}

// Image of a bound on b under the argument map b^2 -> b^2/(1+mu b^2), intersected
// with the positivity constraint 1 + mu b^2 > 0.
double transformed_bound(double base_bound, double mu) {
  double bound = mu < 0.0 ? 1.0 / std::sqrt(-mu) : kInf;
  if (std::isfinite(base_bound)) {
    const double d = 1.0 - mu * base_bound * base_bound;
    if (d > 0.0) bound = std::min(bound, base_bound / std::sqrt(d));
  }
  return bound;
}

// I = int_0^s f'(b^2 - sigma^2) dsigma and J = dI/d(b^2).
struct SIntegrals {
  double I;
  double J;
};

SIntegrals closed_form_integrals(FProfile::Kind kind, double c, double s) {
  using K = FProfile::Kind;
  switch (kind) {
    case K::InvSqrtOneMinusT: {
      const double k = 1.0 - c;
      const double q = k + s * s;
      const double sq = std::sqrt(q);
      return {s / (2.0 * k * sq), 0.5 * s * (1.0 / (k * k * sq) + 1.0 / (2.0 * k * q * sq))};
    }
    case K::OnePlusT:
      return {s, 0.0};
    case K::SqrtOneMinusT: {
      const double k = 1.0 - c;
      return {-0.5 * std::asinh(s / std::sqrt(k)), -s / (4.0 * k * std::sqrt(k + s * s))};
    }
    case K::SqrtOnePlusT: {
      const double m = 1.0 + c;
      return {0.5 * std::asin(s / std::sqrt(m)), -s / (4.0 * m * std::sqrt(m - s * s))};
    }
    case K::LogTwoPlusT: {
      const double m = 2.0 + c;
      const double rm = std::sqrt(m);
      const double at = std::atanh(s / rm);
      return {at / rm, -(s / (2.0 * m * (m - s * s)) + at / (2.0 * m * rm))};
    }
    case K::LogTwoMinusT: {
      const double k = 2.0 - c;
      const double rk = std::sqrt(k);
      const double at = std::atan(s / rk);
      return {-at / rk, -(s / (2.0 * k * (k + s * s)) + at / (2.0 * k * rk))};
    }
    case K::OnePlusArctanT: {
      // 1/(1+t^2) = Im 1/(t - i); integrate the complex rational function exactly.
      const cplx w(c, -1.0);
      const cplx rw = std::sqrt(w);
      const cplx at = std::atanh(s / rw);
      const double I = (at / rw).imag();
      const double J = -(s / (2.0 * w * (w - s * s)) + at / (2.0 * w * rw)).imag();
      return {I, J};
    }
    case K::Custom:
      break;
  }
  throw Error("closed_form_integrals: custom profile has no closed form");
}

PhiJet bryant_real_jet(double p, double b2, double s) {
  const ComplexJet cj = bryant_Phi(p, b2, s);
  return {cj.Phi.real(), cj.Phi1.real(), cj.Phi2.real(), cj.Phi12.real(), cj.Phi22.real()};
}

}  // namespace

// ---------------------------------------------------------------------------
// FProfile

FProfile::FProfile(Kind kind) : kind_(kind) {
  switch (kind) {
    case Kind::InvSqrtOneMinusT:
      name_ = "inv_sqrt_one_minus_t";
      t_max_ = 1.0;
      break;
    case Kind::OnePlusT:
      name_ = "one_plus_t";
      break;
    case Kind::SqrtOneMinusT:
      name_ = "sqrt_one_minus_t";
      t_max_ = 1.0;
      break;
    case Kind::SqrtOnePlusT:
      name_ = "sqrt_one_plus_t";
      break;
    case Kind::LogTwoPlusT:
      name_ = "log_two_plus_t";
      break;
    case Kind::LogTwoMinusT:
      name_ = "log_two_minus_t";
      t_max_ = 2.0;
      break;
    case Kind::OnePlusArctanT:
      name_ = "one_plus_arctan_t";
      break;
    case Kind::Custom:
      throw ConfigError("FProfile: use FProfile::custom for user profiles");
  }
}

FProfile FProfile::custom(std::string name, Fn f, Fn df, Fn d2f, double t_max) {
  if (!f || !df || !d2f) throw ConfigError("FProfile::custom: f, f', f'' are all required");
  FProfile out;
  out.kind_ = Kind::Custom;
  out.name_ = std::move(name);
  out.t_max_ = t_max;
  out.f_ = std::move(f);
  out.df_ = std::move(df);
  out.d2f_ = std::move(d2f);
  return out;
}

FProfile FProfile::from_name(const std::string& name) {
  for (Kind k : {Kind::InvSqrtOneMinusT, Kind::OnePlusT, Kind::SqrtOneMinusT, Kind::SqrtOnePlusT,
                 Kind::LogTwoPlusT, Kind::LogTwoMinusT, Kind::OnePlusArctanT}) {
    FProfile f(k);
    if (f.name() == name) return f;
  }
  throw ConfigError("unknown f profile '" + name + "'");
}

double FProfile::value(double t) const {
  switch (kind_) {
    case Kind::InvSqrtOneMinusT: return 1.0 / std::sqrt(1.0 - t);
    case Kind::OnePlusT: return 1.0 + t;
    case Kind::SqrtOneMinusT: return std::sqrt(1.0 - t);
    case Kind::SqrtOnePlusT: return std::sqrt(1.0 + t);
    case Kind::LogTwoPlusT: return std::log(2.0 + t);
    case Kind::LogTwoMinusT: return std::log(2.0 - t);
    case Kind::OnePlusArctanT: return 1.0 + std::atan(t);
    case Kind::Custom: return f_(t);
  }
  return 0.0;
}

double FProfile::d1(double t) const {
  switch (kind_) {
    case Kind::InvSqrtOneMinusT: return 0.5 * std::pow(1.0 - t, -1.5);
    case Kind::OnePlusT: return 1.0;
    case Kind::SqrtOneMinusT: return -0.5 / std::sqrt(1.0 - t);
    case Kind::SqrtOnePlusT: return 0.5 / std::sqrt(1.0 + t);
    case Kind::LogTwoPlusT: return 1.0 / (2.0 + t);
    case Kind::LogTwoMinusT: return -1.0 / (2.0 - t);
    case Kind::OnePlusArctanT: return 1.0 / (1.0 + t * t);
    case Kind::Custom: return df_(t);
  }
  return 0.0;
}

double FProfile::d2(double t) const {
  switch (kind_) {
    case Kind::InvSqrtOneMinusT: return 0.75 * std::pow(1.0 - t, -2.5);
    case Kind::OnePlusT: return 0.0;
    case Kind::SqrtOneMinusT: return -0.25 * std::pow(1.0 - t, -1.5);
    case Kind::SqrtOnePlusT: return -0.25 * std::pow(1.0 + t, -1.5);
    case Kind::LogTwoPlusT: return -1.0 / ((2.0 + t) * (2.0 + t));
    case Kind::LogTwoMinusT: return -1.0 / ((2.0 - t) * (2.0 - t));
    case Kind::OnePlusArctanT: {
      const double q = 1.0 + t * t;
      return -2.0 * t / (q * q);
    }
    case Kind::Custom: return d2f_(t);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// GProfile

GProfile GProfile::randers_navigation() {
  GProfile g;
  g.kind_ = Kind::RandersNavigation;
  g.name_ = "randers_navigation";
  g.b2_max_ = 1.0;
  return g;
}

GProfile GProfile::funk() {
  GProfile g;
  g.kind_ = Kind::Funk;
  g.name_ = "funk";
  g.b2_max_ = 1.0;
  return g;
}

GProfile GProfile::berwald() {
  GProfile g;
  g.kind_ = Kind::Berwald;
  g.name_ = "berwald";
  return g;
}

GProfile GProfile::affine(double c0, double c1) {
  GProfile g;
  g.kind_ = Kind::Affine;
  g.name_ = "affine(" + fmt(c0) + "," + fmt(c1) + ")";
  g.c0_ = c0;
  g.c1_ = c1;
  return g;
}

GProfile GProfile::custom(std::string name, Fn g, Fn dg, double b2_max) {
  if (!g || !dg) throw ConfigError("GProfile::custom: g and g' are required");
  GProfile out;
  out.kind_ = Kind::Custom;
  out.name_ = std::move(name);
  out.b2_max_ = b2_max;
  out.g_ = std::move(g);
  out.dg_ = std::move(dg);
  return out;
}

GProfile GProfile::from_name(const std::string& name) {
  if (name == "zero") return zero();
  if (name == "randers_navigation") return randers_navigation();
  if (name == "funk") return funk();
  if (name == "berwald") return berwald();
  throw ConfigError("unknown g profile '" + name + "'");
}

double GProfile::value(double b2) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::RandersNavigation: return -1.0 / (1.0 - b2);
    case Kind::Funk: return 1.0 / (1.0 - b2);
    case Kind::Berwald: return 2.0 * std::sqrt(1.0 + b2);
    case Kind::Affine: return c0_ + c1_ * b2;
    case Kind::Custom: return g_(b2);
  }
  return 0.0;
}

double GProfile::d1(double b2) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::RandersNavigation: return -1.0 / ((1.0 - b2) * (1.0 - b2));
    case Kind::Funk: return 1.0 / ((1.0 - b2) * (1.0 - b2));
    case Kind::Berwald: return 1.0 / std::sqrt(1.0 + b2);
    case Kind::Affine: return c1_;
    case Kind::Custom: return dg_(b2);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// PhiFamily

PhiFamily PhiFamily::constant() { return PhiFamily(phi_kind::Constant{}); }
PhiFamily PhiFamily::randers() { return PhiFamily(phi_kind::Randers{}); }
PhiFamily PhiFamily::berwald_square() { return PhiFamily(phi_kind::BerwaldSquare{}); }

PhiFamily PhiFamily::bryant(double p) {
  if (!(p > -kPi && p < kPi)) throw DomainError("Bryant family requires -pi < p < pi");
  return PhiFamily(phi_kind::Bryant{p});
}

PhiFamily PhiFamily::lemma_c(FProfile f, GProfile g) {
  return PhiFamily(phi_kind::LemmaC{std::move(f), std::move(g)});
}

PhiFamily PhiFamily::mu_transformed(const PhiFamily& base, double mu) {
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
  return PhiFamily(phi_kind::MuTransformed{std::make_shared<const PhiFamily>(base), mu});
}

std::string PhiFamily::name() const {
  return std::visit(
      overloaded{
          [](const phi_kind::Constant&) -> std::string { return "constant"; },
          [](const phi_kind::Randers&) -> std::string { return "randers"; },
          [](const phi_kind::BerwaldSquare&) -> std::string { return "berwald_square"; },
          [](const phi_kind::Bryant& k) -> std::string { return "bryant(p=" + fmt(k.p) + ")"; },
          [](const phi_kind::LemmaC& k) -> std::string {
            return "lemma_c(f=" + k.f.name() + ",g=" + k.g.name() + ")";
          },
          [](const phi_kind::MuTransformed& k) -> std::string {
            return "mu_transformed(mu=" + fmt(k.mu) + "," + k.base->name() + ")";
          },
      },
      kind_);
}

double PhiFamily::domain_bound() const {
  return std::visit(
      overloaded{
          [](const phi_kind::LemmaC& k) {
            return std::sqrt(std::min(k.f.t_max(), k.g.b2_max()));
          },
          [](const phi_kind::MuTransformed& k) {
            return transformed_bound(k.base->domain_bound(), k.mu);
          },
          [](const auto&) { return kInf; },
      },
      kind_);
}

double PhiFamily::regularity_bound() const {
  return std::visit(
      overloaded{
          [](const phi_kind::Constant&) { return kInf; },
          [](const phi_kind::Randers&) { return 1.0; },
          [](const phi_kind::BerwaldSquare&) { return kInf; },
          [](const phi_kind::Bryant& k) { return bryant_b_o(k.p); },
          [this](const phi_kind::LemmaC&) { return domain_bound(); },
          [this](const phi_kind::MuTransformed& k) {
            return std::min(domain_bound(), transformed_bound(k.base->regularity_bound(), k.mu));
          },
      },
      kind_);
}

// ---------------------------------------------------------------------------
// Evaluators

ComplexJet bryant_Phi(double p, double b2, double s) {
  if (!(p > -kPi && p < kPi)) throw DomainError("bryant_Phi: requires -pi < p < pi");
  check_args(b2, s, kInf, "bryant_Phi");
  const cplx e = std::polar(1.0, p);
  const cplx w = e + b2 - s * s;
  if (w.imag() == 0.0 && w.real() <= 0.0) {
    throw BranchError("bryant_Phi: e^{ip} + b^2 - s^2 lies on the square-root branch cut");
  }
  const cplx I(0.0, 1.0);
  const cplx r = std::sqrt(w);
  const cplx z = r + I * s;
  const cplx z2 = z * z;
  const cplx z3 = z2 * z;
  const cplx zs = I - s / r;  // dz/ds
  ComplexJet out;
  out.Phi = 1.0 / z;
  out.Phi1 = -1.0 / (2.0 * r * z2);
  out.Phi2 = -zs / z2;
  out.Phi22 = 2.0 * zs * zs / z3 + (e + b2) / (r * r * r * z2);
  out.Phi12 = 0.5 * (-s / (r * r * r * z2) + 2.0 * zs / (r * z3));
  return out;
}

double bryant_b_o(double p) {
  const double ap = std::abs(p);
  if (!(ap < kPi)) throw DomainError("bryant_b_o: requires |p| < pi");
  if (ap <= 0.5 * kPi) return kInf;
  return std::sqrt(0.5 / std::cos(2.0 * kPi / 3.0 - ap / 3.0));
}

PhiJet lemma_c_phi(const FProfile& f, const GProfile& g, double b2, double s) {
  const double bound = std::sqrt(std::min(f.t_max(), g.b2_max()));
  const double t = check_args(b2, s, bound, "lemma_c_phi");

  SIntegrals ij{0.0, 0.0};
  if (s != 0.0) {
    if (f.kind() == FProfile::Kind::Custom) {
      const GaussLegendre& rule = gauss_legendre_32();
      ij.I = rule.integrate([&](double sig) { return f.d1(b2 - sig * sig); }, 0.0, s);
      ij.J = rule.integrate([&](double sig) { return f.d2(b2 - sig * sig); }, 0.0, s);
    } else {
      ij = closed_form_integrals(f.kind(), b2, s);
    }
  }

  const double fp = f.d1(t);
  const double gv = g.value(b2);
  const double gp = g.d1(b2);
  PhiJet jet;
  jet.phi = f.value(t) + 2.0 * s * ij.I + gv * s;
  jet.phi2 = 2.0 * ij.I + gv;
  jet.phi22 = 2.0 * fp;
  jet.phi1 = fp + 2.0 * s * ij.J + gp * s;
  jet.phi12 = 2.0 * ij.J + gp;
  return jet;
}

PhiJet mu_transform(const PhiFamily& base, double mu, double b2, double s) {
  check_args(b2, s, kInf, "mu_transform");
  const double u = 1.0 + mu * b2;
  const double v = 1.0 + mu * (b2 - s * s);
  if (!(u > 0.0) || !(v > 0.0)) {
    throw DomainError("mu_transform: 1 + mu b^2 and 1 + mu (b^2 - s^2) must be positive");
  }
  const double su = std::sqrt(u);
  const double sv = std::sqrt(v);

  const double B = b2 / u;
  const double S = s / (su * sv);
  const PhiJet bj = eval_jet(base, B, S);

  // A = sqrt(v)/u and its partials.
  const double A = sv / u;
  const double A_c = 0.5 * mu / (sv * u) - mu * sv / (u * u);
  const double A_s = -mu * s / (sv * u);
  const double A_ss = -mu / (sv * u) - mu * mu * s * s / (v * sv * u);
  const double A_cs = mu * mu * s * (0.5 / (v * sv * u) + 1.0 / (sv * u * u));

  const double B_c = 1.0 / (u * u);

  const double S_s = su / (v * sv);
  const double S_ss = 3.0 * mu * s * su / (v * v * sv);
  const double S_c = -0.5 * mu * s * (1.0 / (u * su * sv) + 1.0 / (su * v * sv));
  const double S_cs = 0.5 * mu / (su * v * sv) - 1.5 * mu * su / (v * v * sv);

  const double inner_c = bj.phi1 * B_c + bj.phi2 * S_c;  // d/dc of phi(B, S)

  PhiJet out;
  out.phi = A * bj.phi;
  out.phi1 = A_c * bj.phi + A * inner_c;
  out.phi2 = A_s * bj.phi + A * bj.phi2 * S_s;
  out.phi12 = A_cs * bj.phi + A_c * bj.phi2 * S_s + A_s * inner_c +
              A * ((bj.phi12 * B_c + bj.phi22 * S_c) * S_s + bj.phi2 * S_cs);
  out.phi22 = A_ss * bj.phi + 2.0 * A_s * bj.phi2 * S_s +
              A * (bj.phi22 * S_s * S_s + bj.phi2 * S_ss);
  return out;
}

PhiJet eval_jet(const PhiFamily& family, double b2, double s) {
  return std::visit(
      overloaded{
          [&](const phi_kind::Constant&) {
            check_args(b2, s, kInf, "eval_jet");
            return PhiJet{1.0, 0.0, 0.0, 0.0, 0.0};
          },
          [&](const phi_kind::Randers&) {
            check_args(b2, s, kInf, "eval_jet");
            return PhiJet{1.0 + s, 0.0, 1.0, 0.0, 0.0};
          },
          [&](const phi_kind::BerwaldSquare&) {
            check_args(b2, s, kInf, "eval_jet");
            const double u = std::sqrt(1.0 + b2);
            const double w = u + s;
            return PhiJet{w * w, w / u, 2.0 * w, 1.0 / u, 2.0};
          },
          [&](const phi_kind::Bryant& k) { return bryant_real_jet(k.p, b2, s); },
          [&](const phi_kind::LemmaC& k) { return lemma_c_phi(k.f, k.g, b2, s); },
          [&](const phi_kind::MuTransformed& k) { return mu_transform(*k.base, k.mu, b2, s); },
      },
      family.kind());
}

}  // namespace finsler
