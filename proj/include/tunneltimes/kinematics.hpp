#pragma once

#include <complex>
#include <string_view>

namespace tunneltimes {

using cplx = std::complex<double>;

/// Rectangular barrier V(x) = V0 on [-L/2, L/2] for a particle of mass m (hbar = 1).
/// `w` is the barrier strength sqrt(2 m V0).
struct BarrierSpec {
  double V0;
  double L;
  double m;
  double w;

  double wl() const noexcept { return w * L; }
};

/// Throws DomainError naming the first non-positive parameter.
BarrierSpec derive_barrier(double V0, double L, double m);

/// Canonical units m = 1, w = 1 (so V0 = 1/2 and L = wL).
BarrierSpec dimensionless_barrier(double wl);

/// Per-wavenumber quantities. For n > 1 rho and alpha are purely imaginary with
/// positive imaginary part; n == 1 gives rho = alpha = 0 exactly.
struct Kinematics {
  double k;
  double n;
  cplx rho;
  cplx alpha;
  double tau_k;  // classical traversal time m L / k
  double tau_w;  // barrier time m L / w
  double m;
  double L;
  double w;

  double wl() const noexcept { return w * L; }
  bool tunneling() const noexcept { return n < 1.0; }
  double energy() const noexcept { return k * k / (2.0 * m); }
};

Kinematics kinematics(const BarrierSpec& b, double k);

/// Same as kinematics() but parameterized by n = k^2/w^2, so n == 1 is exact.
Kinematics kinematics_at(const BarrierSpec& b, double n);

enum class NormalizationMode { absolute, by_tau_k, by_tau_w };

double normalize_time(double t, NormalizationMode mode, const Kinematics& kin);

/// "abs", "tauk", "tauw".
std::string_view to_string(NormalizationMode mode);
NormalizationMode parse_normalization(std::string_view text);

/// sqrt with Re >= 0 and +i sqrt|x| on the negative axis.
cplx continued_sqrt(double radicand);

}  // namespace tunneltimes
