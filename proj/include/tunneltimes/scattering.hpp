#pragma once

// Amplitudes, phases and transit times of a rectangular barrier in the one-way
// and the symmetric two-packet configurations.
//
// The *_ratio templates give times in units of tau_k = m L / k as functions of
// alpha = rho L, n = k^2/w^2 and wL. They accept double (0 < n <= 1) or
// std::complex<double> (n > 1, alpha = i wL sqrt(n - 1)); every expression is
// even in alpha, so the complex result is real to rounding.

#include <complex>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "tunneltimes/kinematics.hpp"
#include "tunneltimes/numerics.hpp"

namespace tunneltimes {

enum class Side { left, right };
enum class Branch { plus, minus };

/// Argument of the tanh in the transmission phase. rho_l is the one consistent
/// with the closed-form standard phase time; two_rho_l is kept for comparison.
enum class ThetaVariant { rho_l, two_rho_l };

/// Stationary solution for incidence from one side. Interior wave is
/// gamma exp(-s rho x) + beta exp(s rho x) with s = +1 (left) or -1 (right).
struct ChannelAmplitudes {
  cplx R;
  cplx T;
  cplx gamma;
  cplx beta;
  Side side;
};

/// S = R +- T = exp{-i [k L - phi]} for the (anti)symmetrized collision.
struct SuperposedAmplitude {
  Branch sign;
  cplx S;
  double phi;
};

/// Absolute time units.
struct TimeBundle {
  double t_T;      // standard one-way phase time
  double t_T_phi;  // symmetric phase time
  double t_D_phi;  // symmetric dwell time
  double t_I_phi;  // self-interference delay
};

template <typename Scalar>
Scalar standard_time_ratio(const Scalar& alpha, double n, double wl) {
  using std::cosh;
  using std::sinh;
  using std::tanh;
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (alpha > 20.0) {
      const double s = sinh(alpha);
      const double s2 = s * s;
      return 2.0 * (1.0 / (alpha * tanh(alpha)) - n * (2.0 * n - 1.0) / s2) / (4.0 * n * (1.0 - n) / s2 + 1.0);
    }
  }
  using std::abs;
  if (abs(alpha) < kSeriesThreshold) {
    // numerator and denominator divided by alpha^2, using (1 - n)/alpha^2 = 1/wL^2
    const double inv_wl2 = 1.0 / (wl * wl);
    const Scalar sc = sinhc(alpha);
    return Scalar(2) * (sinh2c_excess(alpha) + Scalar((1.0 + 2.0 * n) * inv_wl2)) /
           (Scalar(4.0 * n * inv_wl2) + sc * sc);
  }
  const Scalar s = sinh(alpha);
  return Scalar(2) * (sinhc(Scalar(2) * alpha) - Scalar(n * (2.0 * n - 1.0))) / (Scalar(4.0 * n * (1.0 - n)) + s * s);
}

template <typename Scalar>
Scalar symmetric_time_ratio(const Scalar& alpha, double n) {
  using std::cosh;
  using std::tanh;
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (alpha > 20.0) {
      const double c = cosh(alpha);
      return 2.0 * (n / c + tanh(alpha) / alpha) / ((2.0 * n - 1.0) / c + 1.0);
    }
  }
  return Scalar(2) * (Scalar(n) + sinhc(alpha)) / (Scalar(2.0 * n - 1.0) + cosh(alpha));
}

template <typename Scalar>
Scalar dwell_time_ratio(const Scalar& alpha, double n) {
  using std::cosh;
  using std::tanh;
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (alpha > 20.0) {
      const double c = cosh(alpha);
      return 2.0 * n * (tanh(alpha) / alpha + 1.0 / c) / ((2.0 * n - 1.0) / c + 1.0);
    }
  }
  return Scalar(2.0 * n) * (sinhc(alpha) + Scalar(1)) / (Scalar(2.0 * n - 1.0) + cosh(alpha));
}

template <typename Scalar>
Scalar self_interference_ratio(const Scalar& alpha, double n) {
  using std::cosh;
  using std::tanh;
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (alpha > 20.0) {
      const double c = cosh(alpha);
      return 2.0 * (1.0 - n) * (tanh(alpha) / alpha) / ((2.0 * n - 1.0) / c + 1.0);
    }
  }
  return Scalar(2.0 * (1.0 - n)) * sinhc(alpha) / (Scalar(2.0 * n - 1.0) + cosh(alpha));
}

/// |T| in (0, 1]; valid for every n > 0 (sin form above the barrier).
double transmission_magnitude(const Kinematics& kin);

/// Principal-branch transmission phase Theta(k, L); continuous in k for n < 1.
double transmission_phase(const Kinematics& kin, ThetaVariant variant = ThetaVariant::rho_l);

/// Theta along an ascending k sweep, unwrapped to be continuous.
std::vector<double> transmission_phase_sweep(const BarrierSpec& b, std::span<const double> ks,
                                             ThetaVariant variant = ThetaVariant::rho_l);

/// Closed-form one-way phase time (m/k) dTheta/dk; series form at n = 1.
double standard_phase_time(const Kinematics& kin);

/// (m/k) dTheta/dk by Richardson differences of transmission_phase.
Estimate standard_phase_time_numeric(const Kinematics& kin, ThetaVariant variant = ThetaVariant::rho_l);

/// Matches phi and phi' at both faces (4x4 complex solve). Requires n != 1.
ChannelAmplitudes solve_stationary(const BarrierSpec& b, double k, Side side);

/// theta in (0, pi) with tan(theta) = 2 k rho / (2k^2 - w^2). Requires 0 < n < 1.
double theta_phase(const Kinematics& kin);

cplx reflection_amplitude(const Kinematics& kin);
cplx transmission_amplitude(const Kinematics& kin);

/// R +- T with phi = arg(S e^{ikL}). Requires 0 < n < 1.
SuperposedAmplitude superpose_scattered(const Kinematics& kin, Branch sign);

/// +-exp(-ikL) (e^{rho L} +- e^{i theta}) / (1 +- e^{rho L} e^{i theta}), equal to R +- T.
cplx superposed_closed_form(const Kinematics& kin, Branch sign);

/// Closed-form phi_{+-}(k, L) via the two-argument arctangent. Requires 0 < n < 1.
double phi_phase(const Kinematics& kin, Branch sign);

std::vector<double> phi_phase_sweep(const BarrierSpec& b, std::span<const double> ks, Branch sign);

double symmetric_phase_time(const Kinematics& kin);
double dwell_time_closed(const Kinematics& kin);
double self_interference_time(const Kinematics& kin);

/// -(m/k^2) sin(phi_+), the self-interference delay from the phase.
double self_interference_from_phase(const Kinematics& kin);

/// All four times; throws ConsistencyError if t_T_phi != t_D_phi + t_I_phi to 1e-12.
TimeBundle time_bundle(const Kinematics& kin);

/// (phi2^L + phi2^R)/sqrt(2) inside the barrier.
cplx interior_wave(const ChannelAmplitudes& left, const ChannelAmplitudes& right, const Kinematics& kin, double x);

/// (m/k) * adaptive quadrature of |interior_wave|^2 over the barrier.
double dwell_time_numeric(const Kinematics& kin, const Tolerance& tol = {});

/// One-way dwell time (m/k) * integral of |phi2^L|^2, integrated in closed form.
double one_way_dwell_time(const Kinematics& kin);

struct VariationalReport {
  double energy_step;
  double phase_time;         // dphi/dE by central differences (left side of the balance)
  double boundary_dwell;     // (1/2k) [psi_E psi*' - psi* psi_E'] across the barrier
  double self_interference;  // -(m/k^2) sin(phi)
  double residual;           // |phase_time - boundary_dwell - self_interference| / phase_time
};

/// Energy-derivative balance evaluated on the exterior boundary wave.
VariationalReport variational_check(const Kinematics& kin, double dE);

/// (m/k) dphi_-/dk by Richardson differences; NumericError if the two levels
/// disagree by more than 1e-6 relative.
double antisymmetric_phase_time(const Kinematics& kin);

/// (m/k) dphi/dk by Richardson differences for either branch.
Estimate phase_time_numeric(const Kinematics& kin, Branch sign);

struct ScanRow {
  double n;
  double wl;
  double T2;       // |T|^2
  double t_ratio;  // t_T_phi / tau_k
  bool flag_T;     // |T|^2 > 1/2
  bool flag_fast;  // t_T_phi < tau_k
  bool flag_joint;
  bool weak_T;     // wL / (2 sqrt n) < 1
  bool weak_fast;  // |alpha| / 2 > 1
  bool weak_joint;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  bool joint_empty_below_one;
  std::optional<double> joint_onset;       // smallest n with flag_joint
  std::optional<double> weak_joint_onset;  // smallest n with weak_joint
};

ScanReport superluminal_scan(double wl, std::span<const double> n_grid);

/// Barrier reconstructed from the parameters carried by a Kinematics value.
BarrierSpec barrier_of(const Kinematics& kin);

}  // namespace tunneltimes
