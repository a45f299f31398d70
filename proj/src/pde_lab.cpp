#include "finsler/pde_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "finsler/errors.hpp"
#include "finsler/riemann_data.hpp"

namespace finsler {

namespace {

double resolve_b_max(const PhiFamily& family, const PdeGrid& grid) {
  return grid.b_max > 0.0 ? grid.b_max : default_pde_b_max(family);
}

// Calls visit(b2, s) on every interior node.
void for_each_node(const PdeGrid& grid, double b_max,
                   const std::function<void(double, double)>& visit) {
  if (grid.n < 2) throw ConfigError("PDE grid must have at least 2 nodes per axis");
  if (!(b_max > grid.margin)) throw ConfigError("PDE grid b_max must exceed the margin");
  for (int i = 0; i < grid.n; ++i) {
    const double b = grid.margin + (b_max - grid.margin) * i / (grid.n - 1);
    const double s_max = std::max(b - grid.margin, 0.0);
    for (int j = 0; j < grid.n; ++j) {
      const double s = -s_max + 2.0 * s_max * j / (grid.n - 1);
      visit(b * b, s);
    }
  }
}

}  // namespace

double pde_residual(const PhiJet& jet, double s) {
  return std::abs(jet.phi22 - 2.0 * (jet.phi1 - s * jet.phi12));
}

double pde_residual(const PhiFamily& family, double b2, double s) {
  return pde_residual(eval_jet(family, b2, s), s);
}

PhiJet classical_square_jet(double s) {
  const double w = 1.0 + s;
  return {w * w, 0.0, 2.0 * w, 0.0, 2.0};
}

double pde_residual_classical(double b2, double s) {
  if (!(b2 >= 0.0) || s * s > b2) throw DomainError("pde_residual_classical: need s^2 <= b^2");
  return pde_residual(classical_square_jet(s), s);
}

double default_pde_b_max(const PhiFamily& family) {
  return std::min(0.9 * family.domain_bound(), 1.0);
}

PdeReport pde_grid_report(const PhiFamily& family, const PdeGrid& grid) {
  PdeReport rep;
  rep.family = family.name();
  rep.grid = grid.n;
  rep.b_max = resolve_b_max(family, grid);
  for_each_node(grid, rep.b_max, [&](double b2, double s) {
    try {
      const double r = pde_residual(family, b2, s);
      if (r > rep.max_residual || !std::isfinite(r)) {
        rep.max_residual = std::isfinite(r) ? r : kInf;
        rep.argmax_b2 = b2;
        rep.argmax_s = s;
      }
    } catch (const DomainError&) {
      ++rep.skipped;
    }
  });
  return rep;
}

GroupLawReport verify_group_laws(const PhiFamily& base, double mu, double nu,
                                 const PdeGrid& grid) {
  const PhiFamily t0 = PhiFamily::mu_transformed(base, 0.0);
  const PhiFamily composed = PhiFamily::mu_transformed(PhiFamily::mu_transformed(base, nu), mu);
  const PhiFamily direct = PhiFamily::mu_transformed(base, mu + nu);
  const double b_max = grid.b_max > 0.0 ? grid.b_max : std::min(default_pde_b_max(base), 0.8);

  GroupLawReport rep;
  for_each_node(grid, b_max, [&](double b2, double s) {
    try {
      const double phi = eval_jet(base, b2, s).phi;
      rep.identity_deviation =
          std::max(rep.identity_deviation, std::abs(eval_jet(t0, b2, s).phi - phi));
      const double lhs = eval_jet(composed, b2, s).phi;
      const double rhs = eval_jet(direct, b2, s).phi;
      rep.composition_deviation = std::max(rep.composition_deviation, std::abs(lhs - rhs));
    } catch (const Error&) {
      ++rep.skipped;
    }
  });
  return rep;
}

PdeReport verify_solution_closure(const PhiFamily& base, double mu, const PdeGrid& grid) {
  const PhiFamily transformed = PhiFamily::mu_transformed(base, mu);
  PdeGrid g = grid;
  if (g.b_max <= 0.0) g.b_max = std::min(default_pde_b_max(base), default_pde_b_max(transformed));
  return pde_grid_report(transformed, g);
}

double equivalence_of_representations(const PhiFamily& phi, double mu, double nu, const Vec& x,
                                      const Vec& y) {
  if (y.squaredNorm() == 0.0) throw DegenerateDirection("y must be nonzero");
  const Vec zero = Vec::Zero(x.size());
  const double x2 = x.squaredNorm();

  const double alpha_nu = alpha_mu_at(nu, x, y);
  const double beta_nu = beta_thm3_at(nu, 1.0, zero, x, y);
  const double b2_nu = x2 / (1.0 + nu * x2);
  const double lhs =
      alpha_nu * eval_jet(PhiFamily::mu_transformed(phi, mu), b2_nu, beta_nu / alpha_nu).phi;

  const double ynorm = y.norm();
  const double rhs =
      ynorm * eval_jet(PhiFamily::mu_transformed(phi, mu + nu), x2, x.dot(y) / ynorm).phi;
  return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace finsler
