#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "finsler/errors.hpp"
#include "finsler/phi_families.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace finsler;
using fixtures::kPi;

TEST_CASE("constant family has a trivial jet") {
  const PhiJet j = eval_jet(PhiFamily::constant(), 0.25, 0.1);
  CHECK(j.phi == 1.0);
  CHECK(j.phi1 == 0.0);
  CHECK(j.phi2 == 0.0);
  CHECK(j.phi12 == 0.0);
  CHECK(j.phi22 == 0.0);
}

TEST_CASE("berwald square at the origin") {
  const PhiJet j = eval_jet(PhiFamily::berwald_square(), 0.0, 0.0);
  CHECK(j.phi == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j.phi2 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(j.phi22 == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("randers family is 1 + s") {
  const PhiJet j = eval_jet(PhiFamily::randers(), 0.25, -0.3);
  CHECK(j.phi == doctest::Approx(0.7));
  CHECK(j.phi2 == 1.0);
  CHECK(j.phi1 == 0.0);
  CHECK(j.phi22 == 0.0);
}

TEST_CASE("bryant value matches direct complex arithmetic") {
  const double p = kPi / 3;
  const PhiJet j = eval_jet(PhiFamily::bryant(p), 0.5, 0.3);
  // mpmath, 30 digits: 0.652139590564884708761
  CHECK(std::abs(j.phi - 0.65213959056488470876) < 1e-15);
  CHECK(std::abs(j.phi - std::real(oracle::bryant_direct(p, 0.5, 0.3))) < 1e-15);
}

TEST_CASE("bryant_Phi reference values") {
  CHECK(std::abs(bryant_Phi(0.0, 0.0, 0.0).Phi - std::complex<double>(1.0, 0.0)) < 1e-16);

  const ComplexJet c = bryant_Phi(kPi / 2, 1.0, 0.0);
  const std::complex<double> expected(0.776886987015018653672, -0.321797126452791312368);
  CHECK(std::abs(c.Phi - expected) < 1e-15);
  const std::complex<double> e = std::polar(1.0, kPi / 2);
  CHECK(std::abs(c.Phi - 0.0 * c.Phi2 - 1.0 / std::sqrt(e + 1.0)) < 1e-12);
}

TEST_CASE("bryant_Phi identities on a grid") {
  const std::complex<double> I(0.0, 1.0);
  for (double p : {-0.8 * kPi, -kPi / 2, -0.3, 0.3, kPi / 3, kPi / 2, 0.9 * kPi}) {
    const std::complex<double> e = std::polar(1.0, p);
    for (double b = 0.05; b < 1.5; b += 0.11) {
      for (double u = -0.95; u <= 0.95; u += 0.19) {
        const double s = u * b, b2 = b * b;
        const ComplexJet c = bryant_Phi(p, b2, s);
        const std::complex<double> w = e + b2 - s * s;
        CAPTURE(p);
        CAPTURE(b);
        CAPTURE(s);
        CHECK(std::abs(c.Phi - s * c.Phi2 - std::pow(w, -0.5)) < 1e-12);
        CHECK(std::abs(c.Phi - s * c.Phi2 + (b2 - s * s) * c.Phi22 - e * std::pow(w, -1.5)) <
              1e-12);
        CHECK(std::abs(c.Phi2 + 2.0 * s * c.Phi1 + I * c.Phi * c.Phi) < 1e-12);
        CHECK(std::abs(c.Phi - oracle::bryant_direct(p, b2, s)) < 1e-14);
      }
    }
  }
}

TEST_CASE("bryant Phi_2 + 2 s Phi_1 = -i Phi^2 at the reference point") {
  const ComplexJet c = bryant_Phi(kPi / 3, 0.4, 0.2);
  CHECK(std::abs(c.Phi2 + 2.0 * 0.2 * c.Phi1 + std::complex<double>(0, 1) * c.Phi * c.Phi) <
        1e-12);
}

TEST_CASE("argument of e^{ip} + b^2 - s^2 lies in (0, p]") {
  for (double p : {0.1, kPi / 4, kPi / 2, 0.9 * kPi}) {
    for (double b = 0.0; b < 3.0; b += 0.1) {
      for (double u = -1.0; u <= 1.0; u += 0.1) {
        const double s = u * b;
        const double arg = std::arg(std::polar(1.0, p) + b * b - s * s);
        CHECK(arg > 0.0);
        CHECK(arg <= p + 1e-15);
      }
    }
  }
}

TEST_CASE("bryant parameter range") {
  CHECK_THROWS_AS(PhiFamily::bryant(kPi), DomainError);
  CHECK_THROWS_AS(PhiFamily::bryant(-kPi), DomainError);
  const PhiJet j = eval_jet(PhiFamily::bryant(0.0), 0.3, 0.2);
  CHECK(j.phi == doctest::Approx(std::sqrt(1.0 + 0.3 - 0.04) / 1.3).epsilon(1e-15));
}

TEST_CASE("bryant_b_o closed form") {
  CHECK(std::isinf(bryant_b_o(kPi / 4)));
  CHECK(std::isinf(bryant_b_o(-kPi / 2)));
  CHECK(bryant_b_o(kPi - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  // mpmath: 1.1087365186495477860, also the s = 0 sign flip of the third inequality.
  CHECK(std::abs(bryant_b_o(0.9 * kPi) - 1.1087365186495477860) < 1e-14);
  CHECK(bryant_b_o(-0.9 * kPi) == bryant_b_o(0.9 * kPi));
  CHECK_THROWS_AS(bryant_b_o(kPi), DomainError);
  CHECK(PhiFamily::bryant(0.9 * kPi).regularity_bound() == bryant_b_o(0.9 * kPi));
  CHECK(std::isinf(PhiFamily::bryant(0.9 * kPi).domain_bound()));
}

TEST_CASE("bryant_b_o agrees with the sign of the third inequality") {
  const double p = 0.9 * kPi;
  const PhiFamily fam = PhiFamily::bryant(p);
  const double bo = bryant_b_o(p);
  auto ineq2 = [&](double b, double s) {
    const PhiJet j = eval_jet(fam, b * b, s);
    return j.phi - s * j.phi2 + (b * b - s * s) * j.phi22;
  };
  double min_inside = 1e300;
  for (int i = 0; i <= 200; ++i) {
    const double b = (bo - 0.01) * i / 200.0;
    for (int k = 0; k <= 200; ++k) min_inside = std::min(min_inside, ineq2(b, -b + 2 * b * k / 200.0));
  }
  CHECK(min_inside > 0.0);
  double min_outside = 1e300;
  const double b = bo + 0.05;
  for (int k = 0; k <= 200; ++k) min_outside = std::min(min_outside, ineq2(b, -b + 2 * b * k / 200.0));
  CHECK(min_outside < 0.0);
}

TEST_CASE("jet partials agree with central differences") {
  const double h = 1e-5;
  for (const auto& [label, fam] : fixtures::shipped_families()) {
    CAPTURE(label);
    double worst = 0.0;
    for (double b = 0.1; b <= 0.5; b += 0.1) {
      for (double u = -0.8; u <= 0.8; u += 0.4) {
        const double b2 = b * b, s = u * b;
        const PhiJet j = eval_jet(fam, b2, s);
        const PhiJet bp = eval_jet(fam, b2 + h, s), bm = eval_jet(fam, b2 - h, s);
        const PhiJet sp = eval_jet(fam, b2, s + h), sm = eval_jet(fam, b2, s - h);
        auto err = [](double exact, double fd) { return std::abs(exact - fd) / std::max(1.0, std::abs(exact)); };
        worst = std::max(worst, err(j.phi1, (bp.phi - bm.phi) / (2 * h)));
        worst = std::max(worst, err(j.phi2, (sp.phi - sm.phi) / (2 * h)));
        worst = std::max(worst, err(j.phi12, (bp.phi2 - bm.phi2) / (2 * h)));
        worst = std::max(worst, err(j.phi22, (sp.phi2 - sm.phi2) / (2 * h)));
      }
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("phi is positive on the shipped test region") {
  for (const auto& [label, fam] : fixtures::shipped_families()) {
    CAPTURE(label);
    for (double b = 0.0; b <= 0.5; b += 0.05) {
      for (double u = -1.0; u <= 1.0; u += 0.25) CHECK(eval_jet(fam, b * b, u * b).phi > 0.0);
    }
  }
}

TEST_CASE("lemma-c reference values") {
  const PhiJet a = lemma_c_phi(FProfile(FProfile::Kind::OnePlusT), GProfile::zero(), 0.3, 0.1);
  CHECK(a.phi == doctest::Approx(1.31).epsilon(1e-15));

  const PhiJet b =
      lemma_c_phi(FProfile(FProfile::Kind::InvSqrtOneMinusT), GProfile::zero(), 0.2, 0.0);
  CHECK(b.phi == doctest::Approx(1.0 / std::sqrt(0.8)).epsilon(1e-15));

  // 30-digit quadrature of the defining integral.
  const PhiJet c =
      lemma_c_phi(FProfile(FProfile::Kind::OnePlusArctanT), GProfile::zero(), 0.3, 0.2);
  CHECK(std::abs(c.phi - 1.32828623541542477785) < 1e-14);
}

TEST_CASE("lemma-c at s = 0 reduces to f(b^2) and g(b^2)") {
  const GProfile g = GProfile::affine(0.3, 0.5);
  for (auto k : fixtures::f_kinds()) {
    const FProfile f(k);
    CAPTURE(f.name());
    CHECK(f.value(0.0) > 0.0);
    const PhiJet j = lemma_c_phi(f, g, 0.2, 0.0);
    CHECK(j.phi == doctest::Approx(f.value(0.2)).epsilon(1e-15));
    CHECK(j.phi2 == doctest::Approx(g.value(0.2)).epsilon(1e-15));
  }
}

TEST_CASE("lemma-c regularity identities") {
  const GProfile g = GProfile::randers_navigation();
  for (auto k : fixtures::f_kinds()) {
    const FProfile f(k);
    CAPTURE(f.name());
    for (double b2 : {0.05, 0.2, 0.4}) {
      for (double u : {-0.9, -0.3, 0.5, 1.0}) {
        const double s = u * std::sqrt(b2), t = b2 - s * s;
        const PhiJet j = lemma_c_phi(f, g, b2, s);
        CHECK(j.phi - s * j.phi2 == doctest::Approx(f.value(t)).epsilon(1e-12));
        CHECK(j.phi - s * j.phi2 + t * j.phi22 ==
              doctest::Approx(f.value(t) + 2 * t * f.d1(t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("quadrature fallback reproduces the closed-form profiles") {
  for (auto k : fixtures::f_kinds()) {
    const FProfile shipped(k);
    const FProfile custom = FProfile::custom(
        "copy", [shipped](double t) { return shipped.value(t); },
        [shipped](double t) { return shipped.d1(t); }, [shipped](double t) { return shipped.d2(t); },
        shipped.t_max());
    CAPTURE(shipped.name());
    for (double b2 : {0.1, 0.3}) {
      for (double u : {-0.7, 0.4, 1.0}) {
        const double s = u * std::sqrt(b2);
        const PhiJet a = lemma_c_phi(shipped, GProfile::zero(), b2, s);
        const PhiJet c = lemma_c_phi(custom, GProfile::zero(), b2, s);
        CHECK(std::abs(a.phi - c.phi) < 1e-12);
        CHECK(std::abs(a.phi1 - c.phi1) < 1e-12);
        CHECK(std::abs(a.phi12 - c.phi12) < 1e-12);
      }
    }
  }
}

TEST_CASE("named lemma-c realizations") {
  const PhiFamily funk =
      PhiFamily::lemma_c(FProfile(FProfile::Kind::InvSqrtOneMinusT), GProfile::funk());
  const PhiFamily bw = PhiFamily::lemma_c(FProfile(FProfile::Kind::OnePlusT), GProfile::berwald());
  for (double b2 : {0.1, 0.5}) {
    for (double u : {-1.0, 0.0, 0.6}) {
      const double s = u * std::sqrt(b2);
      CHECK(eval_jet(funk, b2, s).phi ==
            doctest::Approx((std::sqrt(1 - b2 + s * s) + s) / (1 - b2)).epsilon(1e-14));
      const PhiJet x = eval_jet(bw, b2, s), y = eval_jet(PhiFamily::berwald_square(), b2, s);
      CHECK(x.phi == doctest::Approx(y.phi).epsilon(1e-14));
      CHECK(x.phi1 == doctest::Approx(y.phi1).epsilon(1e-13));
      CHECK(x.phi12 == doctest::Approx(y.phi12).epsilon(1e-13));
    }
  }
}

TEST_CASE("lemma-c domain errors") {
  const FProfile f(FProfile::Kind::InvSqrtOneMinusT);
  CHECK_THROWS_AS(lemma_c_phi(f, GProfile::zero(), 1.2, 0.0), DomainError);
  CHECK_THROWS_AS(lemma_c_phi(f, GProfile::zero(), 0.1, 0.5), DomainError);
  CHECK(PhiFamily::lemma_c(f).domain_bound() == 1.0);
  CHECK_THROWS_AS(eval_jet(PhiFamily::constant(), -0.1, 0.0), DomainError);
}

TEST_CASE("mu transform of the constant family") {
  for (double mu : {-0.5, 0.5, 1.0}) {
    for (double b2 : {0.0, 0.2, 0.6}) {
      for (double u : {-1.0, 0.0, 0.5}) {
        const double s = u * std::sqrt(b2);
        const double expected = std::sqrt(1 + mu * (b2 - s * s)) / (1 + mu * b2);
        CHECK(mu_transform(PhiFamily::constant(), mu, b2, s).phi ==
              doctest::Approx(expected).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("mu transform with mu = 0 is the identity") {
  for (const auto& [label, fam] : fixtures::shipped_families()) {
    CAPTURE(label);
    const PhiJet a = eval_jet(fam, 0.2, 0.3), b = mu_transform(fam, 0.0, 0.2, 0.3);
    CHECK(a.phi == b.phi);
    CHECK(a.phi1 == doctest::Approx(b.phi1).epsilon(1e-14));
    CHECK(a.phi2 == doctest::Approx(b.phi2).epsilon(1e-14));
    CHECK(a.phi12 == doctest::Approx(b.phi12).epsilon(1e-14));
    CHECK(a.phi22 == doctest::Approx(b.phi22).epsilon(1e-14));
  }
}

TEST_CASE("mu transform composes on a 20x20 grid") {
  for (const auto& [label, fam] : fixtures::shipped_families()) {
    CAPTURE(label);
    const PhiFamily two = PhiFamily::mu_transformed(PhiFamily::mu_transformed(fam, 0.2), 0.3);
    const PhiFamily one = PhiFamily::mu_transformed(fam, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double b = 0.01 + 0.5 * i / 19.0;
      for (int k = 0; k < 20; ++k) {
        const double s = -b + 2 * b * k / 19.0;
        worst = std::max(worst, std::abs(eval_jet(two, b * b, s).phi - eval_jet(one, b * b, s).phi));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("mu transform rejects nonpositive denominators") {
  CHECK_THROWS_AS(mu_transform(PhiFamily::constant(), -2.0, 0.6, 0.0), DomainError);
  CHECK_THROWS_AS(eval_jet(PhiFamily::mu_transformed(PhiFamily::constant(), -2.0), 0.6, 0.1),
                  DomainError);
}

TEST_CASE("profile lookup by name") {
  for (auto k : fixtures::f_kinds()) {
    const FProfile f(k);
    CHECK(FProfile::from_name(f.name()).kind() == k);
    CHECK(f.d1(0.1) == doctest::Approx(oracle::d1([&](double t) { return f.value(t); }, 0.1)).epsilon(1e-8));
    CHECK(f.d2(0.1) == doctest::Approx(oracle::d1([&](double t) { return f.d1(t); }, 0.1)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(FProfile::from_name("nope"), ConfigError);
  CHECK_THROWS_AS(GProfile::from_name("nope"), ConfigError);
  CHECK(GProfile::from_name("berwald").value(0.0) == 2.0);
}
