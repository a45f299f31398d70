#pragma once

// The projective-flatness equation phi_22 = 2(phi_1 - s phi_12), its Lemma-C solutions and
// the transformation group T_mu acting on them.
//
// Residuals are absolute: all shipped phi are O(1) on the tested grids.

#include <string>

#include "finsler/phi_families.hpp"
#include "finsler/types.hpp"

namespace finsler {

/// Interior (b, s) grid: n x n nodes with margin <= b <= b_max and |s| <= b - margin.
struct PdeGrid {
  int n = 101;
  double b_max = 0.0;  // <= 0 selects min(0.9 * domain_bound, 1)
  double margin = 1e-3;
};

struct PdeReport {
  std::string family;
  int grid = 0;
  double b_max = 0.0;
  double max_residual = 0.0;
  double argmax_b2 = 0.0;
  double argmax_s = 0.0;
  int skipped = 0;
};

struct GroupLawReport {
  double identity_deviation = 0.0;
  double composition_deviation = 0.0;
  int skipped = 0;
};

double pde_residual(const PhiJet& jet, double s);
double pde_residual(const PhiFamily& family, double b2, double s);

/// Jet of the classical (alpha, beta)-function phi(s) = (1 + s)^2 (no b^2 dependence).
PhiJet classical_square_jet(double s);
double pde_residual_classical(double b2, double s);

/// b_max actually used for a family when the grid leaves it unset.
double default_pde_b_max(const PhiFamily& family);

PdeReport pde_grid_report(const PhiFamily& family, const PdeGrid& grid = {});

/// max |T_0(phi) - phi| and max |T_mu(T_nu(phi)) - T_{mu+nu}(phi)| over the grid.
/// Nodes outside any of the transformed domains are skipped and counted.
GroupLawReport verify_group_laws(const PhiFamily& base, double mu, double nu,
                                 const PdeGrid& grid = {});

/// PDE residual of T_mu(base) over the grid.
PdeReport verify_solution_closure(const PhiFamily& base, double mu, const PdeGrid& grid = {});

/// Relative difference between alpha_nu phi_mu(b_nu^2, beta_nu/alpha_nu) and
/// |y| phi_{mu+nu}(|x|^2, <x,y>/|y|) for the lambda = 1, a = 0 data.
double equivalence_of_representations(const PhiFamily& phi, double mu, double nu, const Vec& x,
                                      const Vec& y);

}  // namespace finsler
