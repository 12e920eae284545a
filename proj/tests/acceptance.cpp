// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracle_values.hpp"
#include "tunneltimes/scattering.hpp"
#include "tunneltimes/verification.hpp"
#include "tunneltimes/wavepacket.hpp"

using namespace tunneltimes;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string summary;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Kinematics point(double n, double wl) { return kinematics_at(dimensionless_barrier(wl), n); }

Outcome from_checks(const std::vector<CheckResult>& checks) {
  Outcome out{true, ""};
  for (const CheckResult& c : checks) {
    out.passed = out.passed && c.passed;
    out.summary += (out.summary.empty() ? "" : "; ") + c.name + " " + sci(c.achieved) + " (<= " + sci(c.required) +
                   (c.passed ? ")" : ", " + c.detail + ")");
  }
  return out;
}

Outcome decomposition() { return from_checks({check_decomposition(standard_grid())}); }

Outcome unimodularity() {
  const auto grid = standard_grid();
  return from_checks({check_unimodularity_closed(grid), check_unimodularity_solve(grid), check_unitarity_closed(grid),
                      check_unitarity_solve(grid)});
}

Outcome dwell_equivalence() {
  const auto points = random_points(20240917, 50);
  return from_checks({check_dwell_quadrature(points), check_coefficient_identity(points)});
}

Outcome derivative_consistency() {
  const auto grid = standard_grid();
  return from_checks({check_symmetric_derivative(grid), check_standard_derivative(grid)});
}

Outcome hartman() {
  const Kinematics kin = point(0.5, 16 * kPi);
  const double limit = 2.0 / kin.alpha.real();
  const double standard = standard_phase_time(kin) / kin.tau_k;
  const double symmetric = symmetric_phase_time(kin) / kin.tau_k;
  const double d1 = rel(standard, limit);
  const double d2 = rel(symmetric, limit);
  const double d3 = rel(standard, symmetric);
  const double tol = 1e-3;
  return {d1 < tol && d2 < tol && d3 < tol, "t_T vs 2/alpha " + sci(d1) + ", t_T_phi vs 2/alpha " + sci(d2) +
                                                ", t_T vs t_T_phi " + sci(d3) + " (each < 1e-3)"};
}

Outcome limits() {
  double worst_phase = 0.0;
  double worst_interference = 0.0;
  for (double wl : {2 * kPi, 4 * kPi, 8 * kPi}) {
    const Kinematics kin = point(1.0 - 1e-6, wl);
    worst_phase = std::max(worst_phase, rel(symmetric_phase_time(kin) / kin.tau_k, 2.0));
    worst_interference = std::max(worst_interference, std::abs(self_interference_time(kin) / kin.tau_k));
  }
  return {worst_phase < 1e-3 && worst_interference < 1e-3,
          "|t_T_phi/tau_k - 2|/2 = " + sci(worst_phase) + ", |t_I_phi/tau_k| = " + sci(worst_interference) +
              " at n = 1 - 1e-6 (each < 1e-3)"};
}

Outcome spot_values() {
  const Kinematics kin = point(0.5, 4 * kPi);
  const double values[5] = {standard_phase_time(kin) / kin.tau_k, symmetric_phase_time(kin) / kin.tau_k,
                            dwell_time_closed(kin) / kin.tau_k, self_interference_time(kin) / kin.tau_k,
                            transmission_magnitude(kin)};
  const double oracles[5] = {oracle::kStandardTimeHalf4Pi, oracle::kSymmetricTimeHalf4Pi, oracle::kDwellTimeHalf4Pi,
                             oracle::kSelfInterferenceHalf4Pi, oracle::kAbsTHalf4Pi};
  const char* names[5] = {"t_T", "t_T_phi", "t_D_phi", "t_I_phi", "|T|"};
  Outcome out{true, ""};
  for (int i = 0; i < 5; ++i) {
    const double d = rel(values[i], oracles[i]);
    out.passed = out.passed && d < 1e-6;
    std::ostringstream s;
    s.precision(7);
    s << names[i] << "=" << values[i] << " (" << sci(d) << ")";
    out.summary += (i ? ", " : "") + s.str();
  }
  out.summary += "; relative to mpmath oracle, each < 1e-6";
  return out;
}

Outcome central_claim() {
  const BarrierSpec b = dimensionless_barrier(4 * kPi);
  std::vector<double> errors;
  double identity_gap = 0.0;
  double delay = 0.0;
  double t_phi = 0.0;
  for (double sigma : {0.02, 0.01}) {
    const CollisionRun run = run_collision(b, make_packet(b, 0.5, sigma));
    errors.push_back(rel(run.estimate.delay, run.prediction.phase_time_k0));
    if (sigma == 0.01) {
      identity_gap = std::abs(run.estimate.delay - run.prediction.centroid_identity) / run.prediction.phase_time_k0;
      delay = run.estimate.delay;
      t_phi = run.prediction.phase_time_k0;
    }
  }
  const double shrink = errors[0] / errors[1];
  const bool ok = errors[1] < 1e-2 && identity_gap < 1e-6 && shrink > 3.0 && shrink < 5.0;
  std::ostringstream s;
  s.precision(8);
  s << "delay " << delay << " vs t_T_phi(k0) " << t_phi << ": rel " << sci(errors[1])
    << " (< 1e-2); vs |g|^2-weighted identity " << sci(identity_gap) << " (< 1e-6); error ratio sigma 0.02/0.01 = "
    << sci(shrink) << " (~4)";
  return {ok, s.str()};
}

Outcome cross_method() {
  const BarrierSpec b = dimensionless_barrier(4 * kPi);
  const PacketSpec spec = make_packet(b, 0.5, 0.06);
  const KDistribution g = build_distribution(spec, b);
  const SpatialGrid grid = aligned_grid(b, 220.0, 16384);
  const double t_start = start_time(spec, b);
  const FieldSnapshot initial = synthesize_field(g, b, t_start, Symmetrization::plus, grid);
  const double t_exit = -face_arrival_time(spec, b);
  const double travel = spec.approach_offset / spec.k0;
  const std::vector<double> times{t_exit + 0.8 * travel, t_exit + travel, t_exit + 1.2 * travel};
  const double dx = grid.dx();
  const std::vector<FieldSnapshot> evolved = td_propagate(initial, b, 4.0 * b.m * dx * dx, times, g.k.maxCoeff());
  double worst = 0.0;
  double drift = 0.0;
  for (const FieldSnapshot& s : evolved) {
    worst = std::max(worst, compare_fields(s, synthesize_field(g, b, s.t, Symmetrization::plus, grid)));
    drift = std::max(drift, std::abs(s.norm() - initial.norm()));
  }
  return {worst < 1e-4 && drift < 1e-10, "max L2 distance " + sci(worst) + " (< 1e-4) over 3 post-collision times; norm drift " +
                                             sci(drift) + " (< 1e-10); N = 16384, dx = " + sci(dx)};
}

std::vector<double> grid_between(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double n = lo + step * i;
    if (n > hi + 1e-12) break;
    out.push_back(n);
  }
  return out;
}

Outcome scan_below_one() {
  const std::vector<double> ns = grid_between(0.01, 0.99, 0.01);
  bool empty = true;
  for (double wl : {kPi, 2 * kPi, 4 * kPi}) empty = empty && superluminal_scan(wl, ns).joint_empty_below_one;
  return {empty, std::string("joint region {|T|^2 > 1/2, t_T_phi < tau_k} ") + (empty ? "empty" : "NOT empty") +
                     " for n in [0.01, 0.99] at wL = pi, 2pi, 4pi"};
}

Outcome scan_onset() {
  const std::vector<double> ns = grid_between(1.01, 4.0, 0.01);
  bool ok = true;
  std::string summary;
  for (double wl : {kPi, 2 * kPi, 4 * kPi}) {
    const ScanReport r = superluminal_scan(wl, ns);
    const bool only_above_two = !r.joint_onset || *r.joint_onset > 2.0;
    ok = ok && only_above_two;
    summary += (summary.empty() ? "" : "; ") + std::string("wL=") + sci(wl) + ": onset " +
               (r.joint_onset ? sci(*r.joint_onset) : std::string("none")) + ", weak-inequality onset " +
               (r.weak_joint_onset ? sci(*r.weak_joint_onset) : std::string("none"));
  }
  return {ok, summary + " (required: onset only for n > 2)"};
}

Outcome variational() {
  const std::vector<ParameterPoint> points{{0.25, 2 * kPi}, {0.5, 4 * kPi}, {0.75, 4 * kPi}};
  return from_checks({check_variational(points, 1e-5), check_variational_order(points, 1e-3)});
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1", "decomposition identity", 1.0, decomposition},
      {"2", "unimodularity and unitarity", 1.0, unimodularity},
      {"3", "dwell-time equivalence", 5.0, dwell_equivalence},
      {"4", "derivative consistency", 5.0, derivative_consistency},
      {"5", "Hartman saturation", 1.0, hartman},
      {"6", "barrier-top limits", 1.0, limits},
      {"7", "oracle spot values", 1.0, spot_values},
      {"8", "centroid delay = symmetric phase time", 60.0, central_claim},
      {"9", "spectral vs split-operator propagation", 120.0, cross_method},
      {"10a", "superluminality scan: no joint region below n = 1", 5.0, scan_below_one},
      {"10b", "superluminality scan: onset only above n = 2", 5.0, scan_onset},
      {"11", "variational check", 1.0, variational},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool passed = outcome.passed && in_time;
    if (!passed) ++failures;
    std::cout << (passed ? "PASS" : "FAIL") << " criterion " << c.id << " [" << c.title << "]: " << outcome.summary
              << " | " << sci(seconds) << " s (budget " << c.budget_seconds << " s" << (in_time ? "" : ", EXCEEDED")
              << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
