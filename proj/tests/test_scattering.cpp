#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle_values.hpp"
#include "tunneltimes/errors.hpp"
#include "tunneltimes/scattering.hpp"

using namespace tunneltimes;

namespace {

constexpr double kPi = std::numbers::pi;

Kinematics point(double n, double wl) { return kinematics_at(dimensionless_barrier(wl), n); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("oracle values at n = 1/2, wL = 4 pi") {
  const Kinematics kin = point(0.5, 4 * kPi);
  CHECK(rel(kin.alpha.real(), oracle::kAlphaHalf4Pi) < 1e-14);
  CHECK(rel(standard_phase_time(kin) / kin.tau_k, oracle::kStandardTimeHalf4Pi) < 1e-12);
  CHECK(rel(symmetric_phase_time(kin) / kin.tau_k, oracle::kSymmetricTimeHalf4Pi) < 1e-12);
  CHECK(rel(dwell_time_closed(kin) / kin.tau_k, oracle::kDwellTimeHalf4Pi) < 1e-12);
  CHECK(rel(self_interference_time(kin) / kin.tau_k, oracle::kSelfInterferenceHalf4Pi) < 1e-12);
  CHECK(rel(transmission_magnitude(kin), oracle::kAbsTHalf4Pi) < 1e-12);
  CHECK(rel(phi_phase(kin, Branch::plus), oracle::kPhiPlusHalf4Pi) < 1e-12);
  CHECK(rel(phi_phase(kin, Branch::minus), oracle::kPhiMinusHalf4Pi) < 1e-12);
  CHECK(rel(one_way_dwell_time(kin), oracle::kOneWayDwellHalf4Pi) < 1e-10);
  CHECK(rel(antisymmetric_phase_time(kin) / kin.tau_k, oracle::kAntisymmetricTimeHalf4Pi) < 1e-7);
}

TEST_CASE("other oracle pins") {
  const Kinematics pi_point = point(0.5, kPi);
  CHECK(rel(standard_phase_time(pi_point) / pi_point.tau_k, oracle::kStandardTimeHalfPi) < 1e-12);

  const Kinematics quarter = point(0.25, 4 * kPi);
  CHECK(std::abs(transmission_phase(quarter) - oracle::kThetaTransQuarter4Pi) < 1e-12);

  const Kinematics edge = point(1.0 - 1e-6, 4 * kPi);
  CHECK(rel(symmetric_phase_time(edge) / edge.tau_k, oracle::kSymmetricTimeNearOne4Pi) < 1e-9);
  CHECK(rel(self_interference_time(edge) / edge.tau_k, oracle::kSelfInterferenceNearOne4Pi) < 1e-6);

  const Kinematics far = point(0.5, 16 * kPi);
  CHECK(rel(standard_phase_time(far) / far.tau_k, oracle::kStandardTimeHalf16Pi) < 1e-12);
  CHECK(rel(symmetric_phase_time(far) / far.tau_k, oracle::kSymmetricTimeHalf16Pi) < 1e-12);
}

TEST_CASE("closed forms agree with the continuity-condition solve") {
  for (double wl : {1.0, 2 * kPi, 8 * kPi}) {
    for (double n : {0.02, 0.3, 0.5, 0.77, 0.98}) {
      const Kinematics kin = point(n, wl);
      const BarrierSpec b = dimensionless_barrier(wl);
      const ChannelAmplitudes left = solve_stationary(b, kin.k, Side::left);
      const ChannelAmplitudes right = solve_stationary(b, kin.k, Side::right);
      CHECK(std::abs(left.R - reflection_amplitude(kin)) < 1e-12);
      CHECK(std::abs(left.T - transmission_amplitude(kin)) < 1e-12 * std::max(1.0, std::abs(left.T)) + 1e-15);
      // mirror symmetry of the barrier
      CHECK(std::abs(left.R - right.R) < 1e-12);
      CHECK(std::abs(left.T - right.T) < 1e-14);
      for (Branch s : {Branch::plus, Branch::minus}) {
        const cplx S = superpose_scattered(kin, s).S;
        CHECK(std::abs(S - superposed_closed_form(kin, s)) < 1e-12);
        CHECK(std::abs(std::abs(S) - 1.0) < 1e-12);
      }
      CHECK(std::abs(transmission_magnitude(kin) - std::abs(left.T)) < 1e-12);
    }
  }
}

TEST_CASE("theta phase") {
  const Kinematics kin = point(0.3, 3.0);
  const double theta = theta_phase(kin);
  CHECK(theta > 0.0);
  CHECK(theta < kPi);
  CHECK(theta == doctest::Approx(2.0 * std::atan(kin.rho.real() / kin.k)).epsilon(1e-14));
  CHECK(theta_phase(point(1e-10, 3.0)) == doctest::Approx(kPi).epsilon(1e-4));
  CHECK_THROWS_AS(theta_phase(point(1.5, 3.0)), DomainError);
}

TEST_CASE("time bundle identity and positivity") {
  for (double n = 0.01; n < 1.0; n += 0.07) {
    const TimeBundle t = time_bundle(point(n, 4 * kPi));
    CHECK(t.t_T > 0.0);
    CHECK(t.t_T_phi > 0.0);
    CHECK(t.t_D_phi > 0.0);
    CHECK(t.t_I_phi > 0.0);
    CHECK(rel(t.t_D_phi + t.t_I_phi, t.t_T_phi) < 1e-12);
  }
}

TEST_CASE("self-interference from the phase matches the closed form") {
  for (double n : {0.1, 0.5, 0.9}) {
    const Kinematics kin = point(n, 4 * kPi);
    CHECK(rel(self_interference_from_phase(kin), self_interference_time(kin)) < 1e-10);
  }
}

TEST_CASE("barrier-top limits and continuation above the barrier") {
  const Kinematics top = point(1.0, 4 * kPi);
  CHECK(symmetric_phase_time(top) / top.tau_k == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(self_interference_time(top) == doctest::Approx(0.0));
  const double below = standard_phase_time(point(1.0 - 1e-7, 4 * kPi));
  const double above = standard_phase_time(point(1.0 + 1e-7, 4 * kPi));
  // t_T varies by ~1e-5 relative over n = 1 +- 1e-7 at this wL
  CHECK(standard_phase_time(top) == doctest::Approx(below).epsilon(1e-4));
  CHECK(standard_phase_time(top) == doctest::Approx(above).epsilon(1e-4));
  const double t_series = standard_phase_time(point(1.0 - 5e-9, 4 * kPi));  // |alpha| just below 1e-3
  const double t_direct = standard_phase_time(point(1.0 - 8e-9, 4 * kPi));  // just above
  CHECK(t_series == doctest::Approx(t_direct).epsilon(1e-6));

  const Kinematics high = point(2.5, 4 * kPi);
  const TimeBundle t = time_bundle(high);
  CHECK(std::isfinite(t.t_T));
  CHECK(rel(t.t_D_phi + t.t_I_phi, t.t_T_phi) < 1e-12);
  CHECK(transmission_magnitude(high) <= 1.0);
}

TEST_CASE("standard phase time: derivative consistency and the tanh argument") {
  for (double n : {0.1, 0.5, 0.9}) {
    const Kinematics kin = point(n, 2 * kPi);
    CHECK(rel(standard_phase_time_numeric(kin).value, standard_phase_time(kin)) < 1e-6);
    CHECK(rel(standard_phase_time_numeric(kin, ThetaVariant::two_rho_l).value, standard_phase_time(kin)) > 1e-5);
  }
  // a thin barrier separates tanh(rho L) from tanh(2 rho L) clearly
  const Kinematics thin = point(0.9, 1.0);
  CHECK(rel(standard_phase_time_numeric(thin, ThetaVariant::two_rho_l).value, standard_phase_time(thin)) > 1e-2);
}

TEST_CASE("phase sweeps are continuous") {
  const BarrierSpec b = dimensionless_barrier(8 * kPi);
  std::vector<double> ks;
  for (int i = 1; i < 400; ++i) ks.push_back(0.0025 * i);
  const std::vector<double> phi = phi_phase_sweep(b, ks, Branch::plus);
  const std::vector<double> Theta = transmission_phase_sweep(b, ks);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    CHECK(std::abs(phi[i] - phi[i - 1]) < 0.5);
    CHECK(std::abs(Theta[i] - Theta[i - 1]) < 0.5);
  }
}

TEST_CASE("dwell quadrature and coefficient identity") {
  for (double n : {0.05, 0.5, 0.95}) {
    const Kinematics kin = point(n, 3.0);
    CHECK(rel(dwell_time_numeric(kin), dwell_time_closed(kin)) < 1e-8);
    const ChannelAmplitudes left = solve_stationary(dimensionless_barrier(3.0), kin.k, Side::left);
    const double a = kin.alpha.real();
    CHECK(rel(std::norm(left.beta + left.gamma), 2 * n / (2 * n - 1 + std::cosh(a))) < 1e-10);
  }
  CHECK_THROWS_AS(dwell_time_numeric(point(1.5, 3.0)), DomainError);
}

TEST_CASE("interior wave argument checks") {
  const Kinematics kin = point(0.5, 2.0);
  const BarrierSpec b = dimensionless_barrier(2.0);
  const ChannelAmplitudes left = solve_stationary(b, kin.k, Side::left);
  const ChannelAmplitudes right = solve_stationary(b, kin.k, Side::right);
  CHECK_THROWS_AS(interior_wave(right, left, kin, 0.0), DomainError);
  CHECK_THROWS_AS(interior_wave(left, right, kin, 1.5), DomainError);
  // symmetric combination is even in x
  CHECK(std::abs(interior_wave(left, right, kin, 0.4) - interior_wave(left, right, kin, -0.4)) < 1e-14);
}

TEST_CASE("solve_stationary rejects the degenerate barrier top") {
  const BarrierSpec b = dimensionless_barrier(2.0);
  CHECK_THROWS_AS(solve_stationary(b, b.w, Side::left), DomainError);
}

TEST_CASE("variational balance") {
  const Kinematics kin = point(0.5, 4 * kPi);
  const VariationalReport r = variational_check(kin, 1e-5 * kin.energy());
  CHECK(r.residual < 1e-6);
  CHECK(rel(r.boundary_dwell, dwell_time_closed(kin)) < 1e-6);
  const double coarse = variational_check(kin, 1e-3 * kin.energy()).residual;
  const double fine = variational_check(kin, 5e-4 * kin.energy()).residual;
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
  CHECK_THROWS_AS(variational_check(kin, 0.0), DomainError);
}

TEST_CASE("superluminal scan") {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(0.01 * i);
  const ScanReport below = superluminal_scan(4 * kPi, grid);
  CHECK(below.joint_empty_below_one);
  CHECK_FALSE(below.joint_onset.has_value());
  for (std::size_t i = 1; i < below.rows.size(); ++i) CHECK(below.rows[i].T2 > below.rows[i - 1].T2);
  const ScanRow& half = below.rows[49];
  CHECK(half.n == doctest::Approx(0.5));
  CHECK(half.T2 == doctest::Approx(7.6556e-8).epsilon(1e-3));
  CHECK_FALSE(half.flag_T);
  CHECK(half.flag_fast);

  std::vector<double> above;
  for (int i = 1; i <= 300; ++i) above.push_back(1.0 + 0.01 * i);
  const ScanReport high = superluminal_scan(kPi, above);
  REQUIRE(high.weak_joint_onset.has_value());
  CHECK(*high.weak_joint_onset >= 2.0);
  // weak |T|^2 condition wL / (2 sqrt n) < 1 needs n > 4 pi^2 here
  CHECK_FALSE(superluminal_scan(4 * kPi, above).weak_joint_onset.has_value());
}
