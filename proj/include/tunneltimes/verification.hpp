#pragma once

// Invariant checks over parameter grids. Each returns the worst value found
// and the tolerance it was held to.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tunneltimes/scattering.hpp"

namespace tunneltimes {

struct CheckResult {
  std::string name;
  bool passed;
  double achieved;
  double required;
  std::string detail;  // where the worst case occurred
};

struct ParameterPoint {
  double n;
  double wl;
};

/// n = 0.01, 0.02, ..., 0.99 crossed with wL in {2 pi, 4 pi, 8 pi}.
std::vector<ParameterPoint> standard_grid();

/// n uniform in [0.01, 0.99], wL uniform in [pi, 8 pi], from mt19937_64(seed).
std::vector<ParameterPoint> random_points(std::uint64_t seed, int count);

CheckResult check_decomposition(const std::vector<ParameterPoint>& grid, double tol = 1e-12);
CheckResult check_unitarity_closed(const std::vector<ParameterPoint>& grid, double tol = 1e-12);
CheckResult check_unitarity_solve(const std::vector<ParameterPoint>& grid, double tol = 1e-12);
CheckResult check_unimodularity_closed(const std::vector<ParameterPoint>& grid, double tol = 1e-12);
CheckResult check_unimodularity_solve(const std::vector<ParameterPoint>& grid, double tol = 1e-12);
CheckResult check_standard_derivative(const std::vector<ParameterPoint>& grid, ThetaVariant variant = ThetaVariant::rho_l,
                                      double tol = 1e-6);
CheckResult check_symmetric_derivative(const std::vector<ParameterPoint>& grid, double tol = 1e-6);
CheckResult check_dwell_quadrature(const std::vector<ParameterPoint>& points, double tol = 1e-8);
CheckResult check_coefficient_identity(const std::vector<ParameterPoint>& points, double tol = 1e-10);

/// Residual of the energy-derivative balance at dE = rel_step * E.
CheckResult check_variational(const std::vector<ParameterPoint>& points, double rel_step = 1e-5, double tol = 1e-6);

/// Ratio of residuals at rel_step and rel_step / 2; second order gives ~4.
CheckResult check_variational_order(const std::vector<ParameterPoint>& points, double rel_step = 1e-3,
                                    double min_ratio = 3.0);

/// psi(-x) = +-psi(x) for the synthesized collision at face arrival.
CheckResult check_parity(Branch sign, double tol = 1e-10);

/// Every check above at its default tolerance.
std::vector<CheckResult> run_verification_suite(std::uint64_t seed, ThetaVariant variant = ThetaVariant::rho_l);

}  // namespace tunneltimes
