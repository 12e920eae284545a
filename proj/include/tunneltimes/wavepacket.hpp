#pragma once

// Symmetric two-packet collision: spectral synthesis from stationary states,
// reconstruction of the scattered packets, centroid delay extraction, and an
// independent split-operator time-domain propagator.

#include <Eigen/Core>

#include <span>
#include <vector>

#include "tunneltimes/kinematics.hpp"
#include "tunneltimes/scattering.hpp"

namespace tunneltimes {

enum class Symmetrization { plus, minus, single_left };

struct PacketSpec {
  double k0;
  double sigma_k;  // rms width of |g|^2
  double delta = 0.0;  // g vanishes for k >= (1 - delta) w
  Symmetrization symmetrization = Symmetrization::plus;
  double approach_offset = 0.0;  // distance of each peak beyond its barrier face at the start
};

/// Packet centred at k0 = w sqrt(n0) with sigma_k = sigma_rel k0 and the default
/// approach offset of five spatial widths, 5 / (2 sigma_k).
PacketSpec make_packet(const BarrierSpec& b, double n0, double sigma_rel, double delta = 0.0,
                       Symmetrization symmetrization = Symmetrization::plus);

/// Gaussian momentum amplitude sampled on Gauss-Legendre nodes, normalized so
/// that sum(weights * g^2) = 1.
struct KDistribution {
  Eigen::VectorXd k;
  Eigen::VectorXd weights;
  Eigen::VectorXd g;
  double k0;
};

KDistribution build_distribution(const PacketSpec& spec, const BarrierSpec& b, int nodes = 2001);

/// N cell-centred samples on [x_min, x_max]: x_i = x_min + (i + 1/2) dx.
struct SpatialGrid {
  double x_min;
  double x_max;
  Eigen::Index N;

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(N); }
  double x(Eigen::Index i) const noexcept { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
  Eigen::VectorXd points() const;
};

SpatialGrid make_grid(double x_min, double x_max, Eigen::Index N);

/// Symmetric grid of N (even) cells whose spacing divides L/2 exactly, so the
/// barrier faces fall on cell boundaries. The half-width is at least `half_width`.
SpatialGrid aligned_grid(const BarrierSpec& b, double half_width, Eigen::Index N);

struct FieldSnapshot {
  SpatialGrid grid;
  double t;
  Eigen::VectorXcd psi;

  /// Midpoint-rule integral of |psi|^2 over the cells.
  double norm() const;
};

/// Time at which both packet peaks reach their barrier faces, -m L / (2 k0).
double face_arrival_time(const PacketSpec& spec, const BarrierSpec& b);

/// Start of a run: face arrival minus the approach offset travelled at k0/m.
double start_time(const PacketSpec& spec, const BarrierSpec& b);

/// Superposition over k of the (anti)symmetrized stationary solutions.
/// Requires every node strictly inside (0, w).
FieldSnapshot synthesize_field(const KDistribution& g, const BarrierSpec& b, double t, Symmetrization symmetrization,
                               const SpatialGrid& grid);

/// Left packet of plane waves exp(ikx) with no barrier (free-flight reference).
FieldSnapshot synthesize_free(const KDistribution& g, double m, double t, const SpatialGrid& grid);

/// Outgoing packets rebuilt from S = R +- T alone; zero inside the barrier.
FieldSnapshot reconstruct_scattered(const KDistribution& g, const BarrierSpec& b, double t, const SpatialGrid& grid,
                                    Branch sign = Branch::plus);

/// g(k) S(k) exp(-i k^2 t / 2m) on the distribution nodes.
Eigen::VectorXcd reconstructed_momentum_amplitude(const KDistribution& g, const BarrierSpec& b, double t,
                                                  Branch sign = Branch::plus);

/// right_half: x > face, left_half: x < -face.
enum class Region { right_half, left_half, full };

double centroid(const FieldSnapshot& s, Region region, double face = 0.0);

enum class ArrivalMethod { centroid, peak };

struct ArrivalEstimate {
  ArrivalMethod method;
  Region region;
  double delay;        // crossing time of x = L/2 minus the face-arrival time
  double uncertainty;  // rms fit residual, in time units
  double velocity;
};

/// Fits x(t) = L/2 + v (t - t0) to the right-half centroid (or peak) track.
/// Needs at least five snapshots; throws NumericError if the track is not
/// linear to `max_residual` (time units) or the right-half norm still changes.
ArrivalEstimate extract_delay(std::span<const FieldSnapshot> snapshots, const BarrierSpec& b, double k0,
                              ArrivalMethod method = ArrivalMethod::centroid, double max_residual = -1.0);

struct DelayPrediction {
  double phase_time_k0;        // (m/k0) dphi/dk at the central wavenumber
  double centroid_identity;    // m <dphi/dk> / <k> - (mL/2)(1/<k> - 1/k0), exact for a unimodular S
  double weighted_phase_time;  // <(m/k) dphi/dk>
};

DelayPrediction predict_delay(const KDistribution& g, const BarrierSpec& b, Branch sign = Branch::plus);

/// Strang splitting: half potential step, exact kinetic step in Fourier space,
/// half potential step. Periodic domain.
class SplitOperatorPropagator {
 public:
  SplitOperatorPropagator(SpatialGrid grid, Eigen::VectorXd potential, double m, double dt);

  void step(Eigen::VectorXcd& psi, long count) const;
  double dt() const noexcept { return dt_; }

 private:
  SpatialGrid grid_;
  double dt_;
  Eigen::VectorXcd kinetic_phase_;
  Eigen::VectorXcd potential_half_phase_;
};

Eigen::VectorXd barrier_potential(const BarrierSpec& b, const SpatialGrid& grid);

/// Propagates `initial` to each of `times` (ascending, >= initial.t) using steps
/// no longer than dt. Requires >= 16 points per wavelength at k_resolve; throws
/// NumericError if the norm drifts by more than 1e-10 per 1e4 steps.
std::vector<FieldSnapshot> td_propagate(const FieldSnapshot& initial, const BarrierSpec& b, double dt,
                                        std::span<const double> times, double k_resolve);

/// sqrt of the midpoint-rule integral of |a - b|^2; grids and times must match.
double compare_fields(const FieldSnapshot& a, const FieldSnapshot& b);

struct CollisionOptions {
  int nodes = 2001;
  int snapshot_count = 5;
  double lead_widths = 12.0;     // outgoing centre this many spatial widths past the face at the first snapshot
  double spacing_widths = 1.0;   // spacing between snapshots, in spatial widths travelled
  double tail_widths = 14.0;     // grid extends this far beyond the last centre
  double points_per_wavelength = 16.0;
};

struct CollisionRun {
  KDistribution distribution;
  std::vector<FieldSnapshot> snapshots;  // right side of the barrier only
  ArrivalEstimate estimate;
  DelayPrediction prediction;
};

/// Synthesizes post-collision snapshots on x > L/2 and extracts the centroid delay.
CollisionRun run_collision(const BarrierSpec& b, const PacketSpec& spec, const CollisionOptions& options = {});

}  // namespace tunneltimes
