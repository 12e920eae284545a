#include "tunneltimes/kinematics.hpp"

#include <cmath>
#include <string>

#include "tunneltimes/errors.hpp"

namespace tunneltimes {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string("barrier parameter ") + name +
                      " must be finite and strictly positive, got " + std::to_string(value));
  }
}

Kinematics assemble(const BarrierSpec& b, double k, double n, cplx rho) {
  Kinematics kin{};
  kin.k = k;
  kin.n = n;
  kin.rho = rho;
  kin.alpha = rho * b.L;
  kin.tau_k = b.m * b.L / k;
  kin.tau_w = b.m * b.L / b.w;
  kin.m = b.m;
  kin.L = b.L;
  kin.w = b.w;
  return kin;
}

}  // namespace

cplx continued_sqrt(double radicand) {
  if (radicand >= 0.0) return {std::sqrt(radicand), 0.0};
  return {0.0, std::sqrt(-radicand)};
}

BarrierSpec derive_barrier(double V0, double L, double m) {
  require_positive(V0, "V0");
  require_positive(L, "L");
  require_positive(m, "m");
  return BarrierSpec{V0, L, m, std::sqrt(2.0 * m * V0)};
}

BarrierSpec dimensionless_barrier(double wl) {
  require_positive(wl, "wL");
  return derive_barrier(0.5, wl, 1.0);
}

Kinematics kinematics(const BarrierSpec& b, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError("wavenumber k must be finite and strictly positive, got " + std::to_string(k));
  }
  const double ratio = k / b.w;
  // (w - k)(w + k) keeps the radicand exact to rounding near the barrier top.
  const cplx rho = continued_sqrt((b.w - k) * (b.w + k));
  return assemble(b, k, ratio * ratio, rho);
}

Kinematics kinematics_at(const BarrierSpec& b, double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("n = k^2/w^2 must be finite and strictly positive, got " + std::to_string(n));
  }
  return assemble(b, b.w * std::sqrt(n), n, b.w * continued_sqrt(1.0 - n));
}

double normalize_time(double t, NormalizationMode mode, const Kinematics& kin) {
  switch (mode) {
    case NormalizationMode::absolute:
      return t;
    case NormalizationMode::by_tau_k:
      return t / kin.tau_k;
    case NormalizationMode::by_tau_w:
      return t / kin.tau_w;
  }
  throw DomainError("unknown normalization mode");
}

std::string_view to_string(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::absolute:
      return "abs";
    case NormalizationMode::by_tau_k:
      return "tauk";
    case NormalizationMode::by_tau_w:
      return "tauw";
  }
  return "?";
}

NormalizationMode parse_normalization(std::string_view text) {
  if (text == "abs" || text == "absolute") return NormalizationMode::absolute;
  if (text == "tauk") return NormalizationMode::by_tau_k;
  if (text == "tauw") return NormalizationMode::by_tau_w;
  throw DomainError("unknown normalization '" + std::string(text) + "' (expected abs, tauk, tauw)");
}

}  // namespace tunneltimes
