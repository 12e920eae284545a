#include "tunneltimes/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "tunneltimes/parallel.hpp"
#include "tunneltimes/wavepacket.hpp"

namespace tunneltimes {

namespace {

struct Worst {
  double value = 0.0;
  ParameterPoint where{0.0, 0.0};
};

// Largest metric(point) over the grid, evaluated in parallel.
Worst worst_over(const std::vector<ParameterPoint>& grid, const std::function<double(const ParameterPoint&)>& metric) {
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = metric(grid[i]);
  });
  Worst w;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // NaN counts as the worst possible value
    if (!(values[i] <= w.value)) {
      w.value = std::isnan(values[i]) ? INFINITY : values[i];
      w.where = grid[i];
    }
  }
  return w;
}

CheckResult make_result(std::string name, const Worst& w, double tol) {
  std::ostringstream detail;
  detail.precision(6);
  detail << "worst at n=" << w.where.n << " wL=" << w.where.wl;
  return CheckResult{std::move(name), w.value <= tol, w.value, tol, detail.str()};
}

Kinematics at(const ParameterPoint& p) { return kinematics_at(dimensionless_barrier(p.wl), p.n); }

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

std::vector<ParameterPoint> standard_grid() {
  std::vector<ParameterPoint> grid;
  for (double wl : {2.0 * std::numbers::pi, 4.0 * std::numbers::pi, 8.0 * std::numbers::pi}) {
    for (int i = 1; i <= 99; ++i) grid.push_back({0.01 * i, wl});
  }
  return grid;
}

std::vector<ParameterPoint> random_points(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> n_dist(0.01, 0.99);
  std::uniform_real_distribution<double> wl_dist(std::numbers::pi, 8.0 * std::numbers::pi);
  std::vector<ParameterPoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double n = n_dist(rng);
    points.push_back({n, wl_dist(rng)});
  }
  return points;
}

CheckResult check_decomposition(const std::vector<ParameterPoint>& grid, double tol) {
  const Worst w = worst_over(grid, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    const double total = symmetric_phase_time(kin);
    return relative(dwell_time_closed(kin) + self_interference_time(kin), total);
  });
  return make_result("decomposition_identity", w, tol);
}

CheckResult check_unitarity_closed(const std::vector<ParameterPoint>& grid, double tol) {
  const Worst w = worst_over(grid, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    return std::abs(std::norm(reflection_amplitude(kin)) + std::norm(transmission_amplitude(kin)) - 1.0);
  });
  return make_result("unitarity_closed_form", w, tol);
}

CheckResult check_unitarity_solve(const std::vector<ParameterPoint>& grid, double tol) {
  const Worst w = worst_over(grid, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    double worst = 0.0;
    for (Side side : {Side::left, Side::right}) {
      const ChannelAmplitudes a = solve_stationary(dimensionless_barrier(p.wl), kin.k, side);
      worst = std::max(worst, std::abs(std::norm(a.R) + std::norm(a.T) - 1.0));
    }
    return worst;
  });
  return make_result("unitarity_linear_solve", w, tol);
}

CheckResult check_unimodularity_closed(const std::vector<ParameterPoint>& grid, double tol) {
  const Worst w = worst_over(grid, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    return std::max(std::abs(std::abs(superposed_closed_form(kin, Branch::plus)) - 1.0),
                    std::abs(std::abs(superposed_closed_form(kin, Branch::minus)) - 1.0));
  });
  return make_result("unimodularity_closed_form", w, tol);
}

CheckResult check_unimodularity_solve(const std::vector<ParameterPoint>& grid, double tol) {
  const Worst w = worst_over(grid, [](const ParameterPoint& p) {
    const BarrierSpec b = dimensionless_barrier(p.wl);
    const double k = std::sqrt(p.n) * b.w;
    const ChannelAmplitudes left = solve_stationary(b, k, Side::left);
    const ChannelAmplitudes right = solve_stationary(b, k, Side::right);
    // the outgoing wave on the right face carries T_L + R_R (and R_L + T_R on the left)
    return std::max({std::abs(std::abs(left.T + right.R) - 1.0), std::abs(std::abs(left.T - right.R) - 1.0),
                     std::abs(std::abs(left.R + right.T) - 1.0), std::abs(std::abs(left.R - right.T) - 1.0)});
  });
  return make_result("unimodularity_linear_solve", w, tol);
}

CheckResult check_standard_derivative(const std::vector<ParameterPoint>& grid, ThetaVariant variant, double tol) {
  const Worst w = worst_over(grid, [variant](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    return relative(standard_phase_time_numeric(kin, variant).value, standard_phase_time(kin));
  });
  return make_result(variant == ThetaVariant::rho_l ? "derivative_standard" : "derivative_standard[tanh 2rhoL]", w,
                     tol);
}

CheckResult check_symmetric_derivative(const std::vector<ParameterPoint>& grid, double tol) {
  const Worst w = worst_over(grid, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    return relative(phase_time_numeric(kin, Branch::plus).value, symmetric_phase_time(kin));
  });
  return make_result("derivative_symmetric", w, tol);
}

CheckResult check_dwell_quadrature(const std::vector<ParameterPoint>& points, double tol) {
  const Worst w = worst_over(points, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    return relative(dwell_time_numeric(kin, Tolerance{1e-13, 1e-13, 60}), dwell_time_closed(kin));
  });
  return make_result("dwell_quadrature", w, tol);
}

CheckResult check_coefficient_identity(const std::vector<ParameterPoint>& points, double tol) {
  const Worst w = worst_over(points, [](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    const BarrierSpec b = dimensionless_barrier(p.wl);
    const ChannelAmplitudes left = solve_stationary(b, kin.k, Side::left);
    const double a = kin.alpha.real();
    // 2n / (2n - 1 + cosh a), written with e^{-a} so large a does not overflow
    const double expected = 4.0 * p.n * std::exp(-a) / (2.0 * (2.0 * p.n - 1.0) * std::exp(-a) + 1.0 + std::exp(-2.0 * a));
    return relative(std::norm(left.beta + left.gamma), expected);
  });
  return make_result("coefficient_identity", w, tol);
}

CheckResult check_variational(const std::vector<ParameterPoint>& points, double rel_step, double tol) {
  const Worst w = worst_over(points, [rel_step](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    return variational_check(kin, rel_step * kin.energy()).residual;
  });
  return make_result("variational_balance", w, tol);
}

CheckResult check_variational_order(const std::vector<ParameterPoint>& points, double rel_step, double min_ratio) {
  // worst = smallest reduction, reported as 1/ratio so that larger is worse
  const Worst w = worst_over(points, [rel_step](const ParameterPoint& p) {
    const Kinematics kin = at(p);
    const double coarse = variational_check(kin, rel_step * kin.energy()).residual;
    const double fine = variational_check(kin, 0.5 * rel_step * kin.energy()).residual;
    return fine / coarse;
  });
  CheckResult r = make_result("variational_second_order", w, 1.0 / min_ratio);
  std::ostringstream detail;
  detail.precision(6);
  detail << r.detail << " (halving ratio " << 1.0 / w.value << ")";
  r.detail = detail.str();
  return r;
}

CheckResult check_parity(Branch sign, double tol) {
  const BarrierSpec b = dimensionless_barrier(4.0 * std::numbers::pi);
  const PacketSpec spec = make_packet(b, 0.5, 0.05, 0.0,
                                      sign == Branch::plus ? Symmetrization::plus : Symmetrization::minus);
  const KDistribution g = build_distribution(spec, b, 401);
  const SpatialGrid grid = aligned_grid(b, 150.0, 4096);
  const FieldSnapshot s = synthesize_field(g, b, face_arrival_time(spec, b), spec.symmetrization, grid);
  const double pm = sign == Branch::plus ? 1.0 : -1.0;
  const double scale = s.psi.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grid.N; ++i) {
    worst = std::max(worst, std::abs(s.psi(grid.N - 1 - i) - pm * s.psi(i)) / scale);
  }
  return CheckResult{sign == Branch::plus ? "parity_plus" : "parity_minus", worst <= tol, worst, tol,
                     "n=0.5 wL=4pi at face arrival"};
}

std::vector<CheckResult> run_verification_suite(std::uint64_t seed, ThetaVariant variant) {
  const std::vector<ParameterPoint> grid = standard_grid();
  const std::vector<ParameterPoint> random = random_points(seed, 50);
  const std::vector<ParameterPoint> variational_points{{0.25, 2.0 * std::numbers::pi},
                                                      {0.5, 4.0 * std::numbers::pi},
                                                      {0.75, 4.0 * std::numbers::pi}};
  return {check_unitarity_closed(grid),
          check_unitarity_solve(grid),
          check_unimodularity_closed(grid),
          check_unimodularity_solve(grid),
          check_decomposition(grid),
          check_standard_derivative(grid, variant),
          check_symmetric_derivative(grid),
          check_dwell_quadrature(random),
          check_coefficient_identity(random),
          check_variational(variational_points),
          check_variational_order(variational_points),
          check_parity(Branch::plus),
          check_parity(Branch::minus)};
}

}  // namespace tunneltimes
