#include "tunneltimes/scattering.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "tunneltimes/errors.hpp"

namespace tunneltimes {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_tunneling(const Kinematics& kin, const char* op) {
  if (!(kin.n > 0.0 && kin.n < 1.0)) {
    throw DomainError(std::string(op) + " requires 0 < n < 1, got n = " + std::to_string(kin.n));
  }
}

// Evaluates a *_ratio template on the real or complex branch of alpha.
template <typename RealFn, typename ComplexFn>
double dispatch_ratio(const Kinematics& kin, RealFn&& real_fn, ComplexFn&& complex_fn, const char* what) {
  if (kin.n <= 1.0) return real_fn(kin.alpha.real());
  return real_by_continuation(complex_fn(kin.alpha), what);
}

double phase_for(const BarrierSpec& b, double k, Branch sign) { return phi_phase(kinematics(b, k), sign); }

}  // namespace

BarrierSpec barrier_of(const Kinematics& kin) { return BarrierSpec{kin.w * kin.w / (2.0 * kin.m), kin.L, kin.m, kin.w}; }

double transmission_magnitude(const Kinematics& kin) {
  // w^4 sinh^2(rho L) / (4 k^2 rho^2) = wL^2 sinhc(alpha)^2 / (4 n)
  const double sc = kin.n <= 1.0 ? sinhc(kin.alpha.real())
                                 : real_by_continuation(sinhc(kin.alpha), "sinh(alpha)/alpha");
  const double wl = kin.wl();
  return 1.0 / std::sqrt(1.0 + wl * wl * sc * sc / (4.0 * kin.n));
}

double transmission_phase(const Kinematics& kin, ThetaVariant variant) {
  // (2k^2 - w^2) tanh(s rho L) / (2 k rho) = (2n - 1) s wL sinhc(s alpha) / (2 sqrt(n) cosh(s alpha))
  const double s = variant == ThetaVariant::rho_l ? 1.0 : 2.0;
  const double scale = (2.0 * kin.n - 1.0) * s * kin.wl();
  const double den_scale = 2.0 * std::sqrt(kin.n);
  if (kin.n <= 1.0) {
    const double a = s * kin.alpha.real();
    if (a > 20.0) return std::atan2(scale * std::tanh(a) / a, den_scale);
    return std::atan2(scale * sinhc(a), den_scale * std::cosh(a));
  }
  const cplx a = s * kin.alpha;
  const double num = real_by_continuation(sinhc(a), "sinh(alpha)/alpha");
  const double den = real_by_continuation(std::cosh(a), "cosh(alpha)");
  return std::atan2(scale * num, den_scale * den);
}

std::vector<double> transmission_phase_sweep(const BarrierSpec& b, std::span<const double> ks, ThetaVariant variant) {
  std::vector<double> raw;
  raw.reserve(ks.size());
  for (double k : ks) raw.push_back(transmission_phase(kinematics(b, k), variant));
  return unwrap_phase(raw);
}

double standard_phase_time(const Kinematics& kin) {
  const double n = kin.n;
  const double wl = kin.wl();
  return kin.tau_k * dispatch_ratio(
                         kin, [&](double a) { return standard_time_ratio(a, n, wl); },
                         [&](cplx a) { return standard_time_ratio(a, n, wl); }, "standard phase time");
}

Estimate standard_phase_time_numeric(const Kinematics& kin, ThetaVariant variant) {
  const BarrierSpec b = barrier_of(kin);
  const double k0 = kin.k;
  // unwrap relative to the value at k0 so that a branch jump inside the stencil cannot leak in
  const double center = transmission_phase(kin, variant);
  auto theta = [&](double k) {
    double value = transmission_phase(kinematics(b, k), variant);
    while (value - center > std::numbers::pi) value -= 2.0 * std::numbers::pi;
    while (value - center <= -std::numbers::pi) value += 2.0 * std::numbers::pi;
    return value;
  };
  const Estimate d = differentiate(theta, k0);
  return {kin.m / k0 * d.value, kin.m / k0 * d.error};
}

ChannelAmplitudes solve_stationary(const BarrierSpec& b, double k, Side side) {
  const Kinematics kin = kinematics(b, k);
  if (kin.rho == cplx(0.0, 0.0)) {
    throw DomainError("solve_stationary: n = 1 makes the interior basis degenerate");
  }
  const double s = side == Side::left ? 1.0 : -1.0;
  const cplx rho = kin.rho;
  const double half = 0.5 * b.L;
  const double x_in = -s * half;   // face met first by the incident wave
  const double x_out = s * half;   // face the transmitted wave leaves from

  // Unknowns (R, gamma~, beta~, T) with gamma = gamma~ e^{-rho L/2}, beta = beta~ e^{-rho L/2},
  // which keeps every matrix entry bounded by one in modulus.
  auto incident = [&](double x) { return std::exp(kI * s * k * x); };
  auto reflected = [&](double x) { return std::exp(-kI * s * k * x); };
  auto decaying = [&](double x) { return std::exp(-s * rho * x - rho * half); };
  auto growing = [&](double x) { return std::exp(s * rho * x - rho * half); };

  Eigen::Matrix4cd A;
  Eigen::Vector4cd rhs;
  // value and slope continuity at the incident face
  A.row(0) << reflected(x_in), -decaying(x_in), -growing(x_in), 0.0;
  rhs(0) = -incident(x_in);
  A.row(1) << -kI * s * k * reflected(x_in), s * rho * decaying(x_in), -s * rho * growing(x_in), 0.0;
  rhs(1) = -kI * s * k * incident(x_in);
  // value and slope continuity at the transmission face
  A.row(2) << 0.0, decaying(x_out), growing(x_out), -incident(x_out);
  rhs(2) = 0.0;
  A.row(3) << 0.0, -s * rho * decaying(x_out), s * rho * growing(x_out), -kI * s * k * incident(x_out);
  rhs(3) = 0.0;

  const Eigen::FullPivLU<Eigen::Matrix4cd> lu(A);
  if (lu.rank() < 4) {
    std::ostringstream msg;
    msg << "solve_stationary: singular continuity system at k = " << k << " (rank " << lu.rank() << ")\n" << A;
    throw NumericError(msg.str());
  }
  const Eigen::Vector4cd sol = lu.solve(rhs);
  const cplx scale = std::exp(-rho * half);
  return ChannelAmplitudes{sol(0), sol(3), sol(1) * scale, sol(2) * scale, side};
}

double theta_phase(const Kinematics& kin) {
  require_tunneling(kin, "theta_phase");
  return std::atan2(2.0 * std::sqrt(kin.n * (1.0 - kin.n)), 2.0 * kin.n - 1.0);
}

cplx reflection_amplitude(const Kinematics& kin) {
  require_tunneling(kin, "reflection_amplitude");
  const double theta = theta_phase(kin);
  const double e2 = std::exp(-2.0 * kin.alpha.real());
  const cplx phase2 = std::exp(2.0 * kI * theta);
  return std::exp(-kI * kin.k * kin.L) * std::exp(kI * theta) * (e2 - 1.0) / (e2 - phase2);
}

cplx transmission_amplitude(const Kinematics& kin) {
  require_tunneling(kin, "transmission_amplitude");
  const double theta = theta_phase(kin);
  const double a = kin.alpha.real();
  const cplx phase2 = std::exp(2.0 * kI * theta);
  return std::exp(-kI * kin.k * kin.L) * std::exp(-a) * (1.0 - phase2) / (std::exp(-2.0 * a) - phase2);
}

SuperposedAmplitude superpose_scattered(const Kinematics& kin, Branch sign) {
  const double pm = sign == Branch::plus ? 1.0 : -1.0;
  const cplx S = reflection_amplitude(kin) + pm * transmission_amplitude(kin);
  return SuperposedAmplitude{sign, S, std::arg(S * std::exp(kI * kin.k * kin.L))};
}

cplx superposed_closed_form(const Kinematics& kin, Branch sign) {
  require_tunneling(kin, "superposed_closed_form");
  const double pm = sign == Branch::plus ? 1.0 : -1.0;
  const cplx e_theta = std::exp(kI * theta_phase(kin));
  const double decay = std::exp(-kin.alpha.real());
  // numerator and denominator multiplied by e^{-rho L}; the minus branch carries
  // an overall -1 so that the result is R - T rather than T - R
  return pm * std::exp(-kI * kin.k * kin.L) * (1.0 + pm * decay * e_theta) / (decay + pm * e_theta);
}

double phi_phase(const Kinematics& kin, Branch sign) {
  require_tunneling(kin, "phi_phase");
  const double n = kin.n;
  const double pm = sign == Branch::plus ? 1.0 : -1.0;
  const double a = kin.alpha.real();
  // 2 k rho sinh(rho L) = w^2 * 2 sqrt(n) wL (1 - n) sinhc(alpha); k^2 - rho^2 = w^2 (2n - 1)
  const double num_scale = 2.0 * std::sqrt(n) * kin.wl() * (1.0 - n);
  if (a > 20.0) {
    return -std::atan2(num_scale * std::tanh(a) / a, (2.0 * n - 1.0) + pm / std::cosh(a));
  }
  return -std::atan2(num_scale * sinhc(a), (2.0 * n - 1.0) * std::cosh(a) + pm);
}

std::vector<double> phi_phase_sweep(const BarrierSpec& b, std::span<const double> ks, Branch sign) {
  std::vector<double> raw;
  raw.reserve(ks.size());
  for (double k : ks) raw.push_back(phase_for(b, k, sign));
  return unwrap_phase(raw);
}

double symmetric_phase_time(const Kinematics& kin) {
  const double n = kin.n;
  return kin.tau_k * dispatch_ratio(
                         kin, [&](double a) { return symmetric_time_ratio(a, n); },
                         [&](cplx a) { return symmetric_time_ratio(a, n); }, "symmetric phase time");
}

double dwell_time_closed(const Kinematics& kin) {
  const double n = kin.n;
  return kin.tau_k * dispatch_ratio(
                         kin, [&](double a) { return dwell_time_ratio(a, n); },
                         [&](cplx a) { return dwell_time_ratio(a, n); }, "dwell time");
}

double self_interference_time(const Kinematics& kin) {
  const double n = kin.n;
  return kin.tau_k * dispatch_ratio(
                         kin, [&](double a) { return self_interference_ratio(a, n); },
                         [&](cplx a) { return self_interference_ratio(a, n); }, "self-interference delay");
}

double self_interference_from_phase(const Kinematics& kin) {
  return -kin.m / (kin.k * kin.k) * std::sin(phi_phase(kin, Branch::plus));
}

TimeBundle time_bundle(const Kinematics& kin) {
  TimeBundle t{standard_phase_time(kin), symmetric_phase_time(kin), dwell_time_closed(kin),
               self_interference_time(kin)};
  const double residual = std::abs(t.t_T_phi - t.t_D_phi - t.t_I_phi);
  if (residual > 1e-12 * std::abs(t.t_T_phi)) {
    throw ConsistencyError("t_T_phi != t_D_phi + t_I_phi at n = " + std::to_string(kin.n) +
                           " (residual " + std::to_string(residual) + ")");
  }
  return t;
}

cplx interior_wave(const ChannelAmplitudes& left, const ChannelAmplitudes& right, const Kinematics& kin, double x) {
  if (left.side != Side::left || right.side != Side::right) {
    throw DomainError("interior_wave expects (left-incident, right-incident) amplitudes");
  }
  const double half = 0.5 * kin.L;
  if (std::abs(x) > half * (1.0 + 1e-12)) {
    throw DomainError("interior_wave: x = " + std::to_string(x) + " lies outside the barrier");
  }
  const cplx down = std::exp(-kin.rho * x);
  const cplx up = std::exp(kin.rho * x);
  const cplx from_left = left.gamma * down + left.beta * up;
  const cplx from_right = right.gamma * up + right.beta * down;
  return (from_left + from_right) / std::numbers::sqrt2;
}

double dwell_time_numeric(const Kinematics& kin, const Tolerance& tol) {
  require_tunneling(kin, "dwell_time_numeric");
  const BarrierSpec b = barrier_of(kin);
  const ChannelAmplitudes left = solve_stationary(b, kin.k, Side::left);
  const ChannelAmplitudes right = solve_stationary(b, kin.k, Side::right);
  auto density = [&](double x) { return std::norm(interior_wave(left, right, kin, x)); };
  const Estimate integral = integrate(density, -0.5 * kin.L, 0.5 * kin.L, tol);
  return kin.m / kin.k * integral.value;
}

double one_way_dwell_time(const Kinematics& kin) {
  const ChannelAmplitudes amp = solve_stationary(barrier_of(kin), kin.k, Side::left);
  const double L = kin.L;
  // integral over [-L/2, L/2] of e^{c x} = L sinhc(c L / 2)
  auto exp_integral = [L](cplx c) { return L * sinhc(c * (0.5 * L)); };
  const cplx rho = kin.rho;
  const cplx rho_bar = std::conj(rho);
  const cplx total = std::norm(amp.gamma) * exp_integral(-rho - rho_bar) +
                     std::norm(amp.beta) * exp_integral(rho + rho_bar) +
                     2.0 * std::real(amp.gamma * std::conj(amp.beta) * exp_integral(-rho + rho_bar));
  return kin.m / kin.k * real_by_continuation(total, "one-way interior norm");
}

VariationalReport variational_check(const Kinematics& kin, double dE) {
  require_tunneling(kin, "variational_check");
  const double E = kin.energy();
  if (!(dE > 0.0 && dE < E)) throw DomainError("variational_check needs 0 < dE < E");
  const BarrierSpec b = barrier_of(kin);
  const double m = kin.m;
  const double half = 0.5 * kin.L;

  auto k_of = [m](double energy) { return std::sqrt(2.0 * m * energy); };
  auto phi_of = [&](double energy) { return phase_for(b, k_of(energy), Branch::plus); };

  // Exterior wave of the symmetrized collision: incoming from the near side plus
  // exp{i (phi - kL)} outgoing, normalized by 1/sqrt(2).
  struct Boundary {
    cplx value;
    cplx slope;
  };
  auto exterior = [&](double energy, double x) {
    const double k = k_of(energy);
    const double dir = x > 0.0 ? -1.0 : 1.0;  // incoming direction at this face
    const cplx out = std::exp(kI * (phi_of(energy) - k * kin.L));
    const cplx in_wave = std::exp(kI * dir * k * x);
    const cplx out_wave = out * std::exp(-kI * dir * k * x);
    return Boundary{(in_wave + out_wave) / std::numbers::sqrt2,
                    kI * dir * k * (in_wave - out_wave) / std::numbers::sqrt2};
  };
  // psi_E psi*' - psi* psi_E' at one face
  auto flux_term = [&](double x) {
    const Boundary c = exterior(E, x);
    const Boundary p = exterior(E + dE, x);
    const Boundary q = exterior(E - dE, x);
    const cplx value_E = (p.value - q.value) / (2.0 * dE);
    const cplx slope_E = (p.slope - q.slope) / (2.0 * dE);
    return value_E * std::conj(c.slope) - std::conj(c.value) * slope_E;
  };
  const cplx boundary = flux_term(half) - flux_term(-half);  // = 2m * integral |phi2|^2

  VariationalReport report{};
  report.energy_step = dE;
  report.phase_time = (phi_of(E + dE) - phi_of(E - dE)) / (2.0 * dE);
  report.boundary_dwell = boundary.real() / (2.0 * m) * (m / kin.k);
  report.self_interference = self_interference_from_phase(kin);
  report.residual = std::abs(report.phase_time - report.boundary_dwell - report.self_interference) /
                    std::abs(report.phase_time);
  return report;
}

Estimate phase_time_numeric(const Kinematics& kin, Branch sign) {
  require_tunneling(kin, "phase_time_numeric");
  const BarrierSpec b = barrier_of(kin);
  const Estimate d = differentiate([&](double k) { return phase_for(b, k, sign); }, kin.k);
  return {kin.m / kin.k * d.value, kin.m / kin.k * d.error};
}

double antisymmetric_phase_time(const Kinematics& kin) {
  const Estimate t = phase_time_numeric(kin, Branch::minus);
  if (t.error > 1e-6 * std::abs(t.value)) {
    throw NumericError("antisymmetric phase time: Richardson levels disagree", t.value, t.error);
  }
  return t.value;
}

ScanReport superluminal_scan(double wl, std::span<const double> n_grid) {
  const BarrierSpec b = dimensionless_barrier(wl);
  ScanReport report{{}, true, std::nullopt, std::nullopt};
  report.rows.reserve(n_grid.size());
  for (double n : n_grid) {
    const Kinematics kin = kinematics_at(b, n);
    const double mag = transmission_magnitude(kin);
    ScanRow row{};
    row.n = n;
    row.wl = wl;
    row.T2 = mag * mag;
    row.t_ratio = symmetric_phase_time(kin) / kin.tau_k;
    row.flag_T = row.T2 > 0.5;
    row.flag_fast = row.t_ratio < 1.0;
    row.flag_joint = row.flag_T && row.flag_fast;
    row.weak_T = wl / (2.0 * std::sqrt(n)) < 1.0;
    row.weak_fast = std::abs(kin.alpha) / 2.0 > 1.0;
    row.weak_joint = row.weak_T && row.weak_fast;
    if (row.flag_joint) {
      if (n < 1.0) report.joint_empty_below_one = false;
      if (!report.joint_onset || n < *report.joint_onset) report.joint_onset = n;
    }
    if (row.weak_joint && (!report.weak_joint_onset || n < *report.weak_joint_onset)) report.weak_joint_onset = n;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace tunneltimes
