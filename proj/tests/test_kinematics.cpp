#include "doctest.h"

#include <cmath>
#include <numbers>

#include "tunneltimes/errors.hpp"
#include "tunneltimes/kinematics.hpp"

using namespace tunneltimes;

TEST_CASE("derive_barrier computes w and rejects bad parameters") {
  const BarrierSpec b = derive_barrier(2.0, 3.0, 0.25);
  CHECK(b.w == doctest::Approx(1.0));
  CHECK(b.wl() == doctest::Approx(3.0));

  CHECK_THROWS_AS(derive_barrier(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(derive_barrier(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(derive_barrier(1.0, 1.0, std::nan("")), DomainError);
  try {
    derive_barrier(1.0, 1.0, 0.0);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find(" m ") != std::string::npos);
  }
}

TEST_CASE("dimensionless barrier uses m = w = 1") {
  const BarrierSpec b = dimensionless_barrier(4.0 * std::numbers::pi);
  CHECK(b.m == 1.0);
  CHECK(b.w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.L == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("kinematics below, at and above the barrier top") {
  const BarrierSpec b = dimensionless_barrier(2.0);

  const Kinematics below = kinematics(b, std::sqrt(0.5));
  CHECK(below.n == doctest::Approx(0.5));
  CHECK(below.rho.imag() == 0.0);
  CHECK(below.rho.real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(below.alpha.real() == doctest::Approx(2.0 * std::sqrt(0.5)));
  CHECK(below.tau_k == doctest::Approx(2.0 / std::sqrt(0.5)));
  CHECK(below.tau_w == doctest::Approx(2.0));
  CHECK(below.tunneling());

  const Kinematics top = kinematics_at(b, 1.0);
  CHECK(top.rho == cplx(0.0, 0.0));
  CHECK(top.alpha == cplx(0.0, 0.0));
  CHECK_FALSE(top.tunneling());

  const Kinematics above = kinematics_at(b, 2.0);
  CHECK(above.rho.real() == 0.0);
  CHECK(above.rho.imag() == doctest::Approx(1.0));
  CHECK(above.k == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(kinematics(b, 0.0), DomainError);
  CHECK_THROWS_AS(kinematics(b, -1.0), DomainError);
}

TEST_CASE("kinematics_at and kinematics agree") {
  const BarrierSpec b = derive_barrier(3.0, 0.7, 2.0);
  for (double n : {0.1, 0.5, 0.99, 1.5}) {
    const Kinematics a = kinematics_at(b, n);
    const Kinematics c = kinematics(b, a.k);
    CHECK(a.n == doctest::Approx(c.n).epsilon(1e-14));
    CHECK(std::abs(a.rho - c.rho) < 1e-12);
    CHECK(a.energy() == doctest::Approx(n * b.V0));
  }
}

TEST_CASE("normalization modes") {
  const BarrierSpec b = dimensionless_barrier(4.0);
  const Kinematics kin = kinematics_at(b, 0.25);
  CHECK(normalize_time(3.0, NormalizationMode::absolute, kin) == 3.0);
  CHECK(normalize_time(kin.tau_k, NormalizationMode::by_tau_k, kin) == doctest::Approx(1.0));
  CHECK(normalize_time(kin.tau_w, NormalizationMode::by_tau_w, kin) == doctest::Approx(1.0));
  for (auto mode : {NormalizationMode::absolute, NormalizationMode::by_tau_k, NormalizationMode::by_tau_w}) {
    CHECK(parse_normalization(to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(parse_normalization("seconds"), DomainError);
}

TEST_CASE("continued_sqrt") {
  CHECK(continued_sqrt(4.0) == cplx(2.0, 0.0));
  CHECK(continued_sqrt(-9.0) == cplx(0.0, 3.0));
  CHECK(continued_sqrt(0.0) == cplx(0.0, 0.0));
}
