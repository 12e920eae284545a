#include "tunneltimes/wavepacket.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tunneltimes/errors.hpp"
#include "tunneltimes/numerics.hpp"
#include "tunneltimes/parallel.hpp"

namespace tunneltimes {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2 pi)
constexpr Eigen::Index kReanchorEvery = 256;

// Per-node coefficients of exp(+ikx), exp(-ikx) in each exterior region and of
// exp(-rho x), exp(+rho x) inside the barrier.
struct ModeCoefficients {
  double k;
  double rho;
  cplx left_fwd, left_back;
  cplx right_fwd, right_back;
  cplx inner_down, inner_up;
};

// Accumulates sum_j coefficient_j(x) over nodes for a block of grid points,
// walking exp(ikx) along the grid by repeated multiplication.
void accumulate_modes(const std::vector<ModeCoefficients>& modes, const SpatialGrid& grid, double half_width,
                      Eigen::VectorXcd& psi) {
  const double dx = grid.dx();
  parallel_for(static_cast<std::size_t>(grid.N), [&](std::size_t begin, std::size_t end) {
    for (const ModeCoefficients& mode : modes) {
      const cplx step = std::exp(kI * mode.k * dx);
      cplx phasor{};
      for (std::size_t i = begin; i < end; ++i) {
        const double x = grid.x(static_cast<Eigen::Index>(i));
        if ((i - begin) % kReanchorEvery == 0) {
          phasor = std::exp(kI * mode.k * x);
        } else {
          phasor *= step;
        }
        if (x < -half_width) {
          psi(i) += mode.left_fwd * phasor + mode.left_back * std::conj(phasor);
        } else if (x > half_width) {
          psi(i) += mode.right_fwd * phasor + mode.right_back * std::conj(phasor);
        } else if (mode.inner_down != cplx{} || mode.inner_up != cplx{}) {
          psi(i) += mode.inner_down * std::exp(-mode.rho * x) + mode.inner_up * std::exp(mode.rho * x);
        }
      }
    }
  });
}

cplx packet_coefficient(const KDistribution& g, Eigen::Index j, double m, double t) {
  const double k = g.k(j);
  return g.weights(j) * g.g(j) * kInvSqrt2Pi * std::exp(-kI * (k * k * t / (2.0 * m)));
}

void require_tunneling_nodes(const KDistribution& g, const BarrierSpec& b) {
  if (g.k.size() == 0 || g.k.minCoeff() <= 0.0 || g.k.maxCoeff() >= b.w) {
    throw DomainError("wave-packet synthesis needs every k node strictly inside (0, w)");
  }
}

// Midpoint rule over cells [first, last]; on a periodic grid this is the
// quantity the split-operator step conserves.
double cell_sum(const Eigen::VectorXd& f, Eigen::Index first, Eigen::Index last, double dx) {
  if (last < first) return 0.0;
  return dx * f.segment(first, last - first + 1).sum();
}

std::pair<Eigen::Index, Eigen::Index> region_range(const SpatialGrid& grid, Region region, double face) {
  Eigen::Index first = 0;
  Eigen::Index last = grid.N - 1;
  if (region == Region::right_half) {
    while (first < grid.N && !(grid.x(first) > face)) ++first;
  } else if (region == Region::left_half) {
    while (last >= 0 && !(grid.x(last) < -face)) --last;
  }
  return {first, last};
}

}  // namespace

PacketSpec make_packet(const BarrierSpec& b, double n0, double sigma_rel, double delta, Symmetrization symmetrization) {
  if (!(n0 > 0.0)) throw DomainError("packet central n must be positive");
  if (!(sigma_rel > 0.0)) throw DomainError("sigma_rel must be positive");
  const double k0 = b.w * std::sqrt(n0);
  const double sigma_k = sigma_rel * k0;
  return PacketSpec{k0, sigma_k, delta, symmetrization, 5.0 / (2.0 * sigma_k)};
}

KDistribution build_distribution(const PacketSpec& spec, const BarrierSpec& b, int nodes) {
  if (!(spec.k0 > 0.0)) throw DomainError("k0 must be positive");
  if (!(spec.sigma_k > 0.0)) throw DomainError("sigma_k must be positive");
  if (!(spec.delta >= 0.0 && spec.delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  const double lower = std::max(spec.k0 - 6.0 * spec.sigma_k, 0.0);
  const double upper = std::min(spec.k0 + 6.0 * spec.sigma_k, (1.0 - spec.delta) * b.w);
  if (!(upper > lower)) {
    throw DomainError("momentum support is empty after the cutoff at (1 - delta) w = " +
                      std::to_string((1.0 - spec.delta) * b.w));
  }
  QuadratureRule rule = gauss_legendre(nodes, lower, upper);
  KDistribution dist{std::move(rule.nodes), std::move(rule.weights), Eigen::VectorXd(nodes), spec.k0};
  const double inv_4s2 = 1.0 / (4.0 * spec.sigma_k * spec.sigma_k);
  dist.g = (-(dist.k.array() - spec.k0).square() * inv_4s2).exp().matrix();
  const double norm = (dist.weights.array() * dist.g.array().square()).sum();
  dist.g /= std::sqrt(norm);
  return dist;
}

Eigen::VectorXd SpatialGrid::points() const {
  Eigen::VectorXd out(N);
  for (Eigen::Index i = 0; i < N; ++i) out(i) = x(i);
  return out;
}

SpatialGrid make_grid(double x_min, double x_max, Eigen::Index N) {
  if (!(x_max > x_min)) throw DomainError("grid needs x_max > x_min");
  if (N < 2) throw DomainError("grid needs at least two points");
  return SpatialGrid{x_min, x_max, N};
}

SpatialGrid aligned_grid(const BarrierSpec& b, double half_width, Eigen::Index N) {
  if (N < 2 || N % 2 != 0) throw DomainError("aligned grid needs an even number of cells");
  if (!(half_width > 0.5 * b.L)) throw DomainError("aligned grid must contain the barrier");
  const double target_dx = 2.0 * half_width / static_cast<double>(N);
  const double cells_per_half_barrier = std::max(1.0, std::floor(0.5 * b.L / target_dx));
  const double dx = 0.5 * b.L / cells_per_half_barrier;
  const double X = 0.5 * static_cast<double>(N) * dx;
  return make_grid(-X, X, N);
}

double FieldSnapshot::norm() const {
  const Eigen::VectorXd density = psi.cwiseAbs2();
  return cell_sum(density, 0, grid.N - 1, grid.dx());
}

double face_arrival_time(const PacketSpec& spec, const BarrierSpec& b) { return -b.m * b.L / (2.0 * spec.k0); }

double start_time(const PacketSpec& spec, const BarrierSpec& b) {
  return face_arrival_time(spec, b) - spec.approach_offset * b.m / spec.k0;
}

FieldSnapshot synthesize_field(const KDistribution& g, const BarrierSpec& b, double t, Symmetrization symmetrization,
                               const SpatialGrid& grid) {
  require_tunneling_nodes(g, b);
  const double pm = symmetrization == Symmetrization::minus ? -1.0 : 1.0;
  const bool single = symmetrization == Symmetrization::single_left;
  const double norm = single ? 1.0 : 1.0 / std::numbers::sqrt2;

  std::vector<ModeCoefficients> modes;
  modes.reserve(static_cast<std::size_t>(g.k.size()));
  for (Eigen::Index j = 0; j < g.k.size(); ++j) {
    const double k = g.k(j);
    const cplx c = norm * packet_coefficient(g, j, b.m, t);
    const ChannelAmplitudes L = solve_stationary(b, k, Side::left);
    ModeCoefficients mode{};
    mode.k = k;
    mode.rho = kinematics(b, k).rho.real();
    if (single) {
      mode.left_fwd = c;
      mode.left_back = c * L.R;
      mode.right_fwd = c * L.T;
      mode.inner_down = c * L.gamma;
      mode.inner_up = c * L.beta;
    } else {
      const ChannelAmplitudes R = solve_stationary(b, k, Side::right);
      // phi^L +- phi^R, region by region
      mode.left_fwd = c;
      mode.left_back = c * (L.R + pm * R.T);
      mode.right_fwd = c * (L.T + pm * R.R);
      mode.right_back = c * pm;
      mode.inner_down = c * (L.gamma + pm * R.beta);
      mode.inner_up = c * (L.beta + pm * R.gamma);
    }
    modes.push_back(mode);
  }
  FieldSnapshot snap{grid, t, Eigen::VectorXcd::Zero(grid.N)};
  accumulate_modes(modes, grid, 0.5 * b.L, snap.psi);
  return snap;
}

FieldSnapshot synthesize_free(const KDistribution& g, double m, double t, const SpatialGrid& grid) {
  std::vector<ModeCoefficients> modes;
  modes.reserve(static_cast<std::size_t>(g.k.size()));
  for (Eigen::Index j = 0; j < g.k.size(); ++j) {
    const cplx c = packet_coefficient(g, j, m, t);
    ModeCoefficients mode{};
    mode.k = g.k(j);
    mode.left_fwd = c;
    mode.right_fwd = c;
    modes.push_back(mode);
  }
  FieldSnapshot snap{grid, t, Eigen::VectorXcd::Zero(grid.N)};
  // a zero-width "barrier" puts every point in an exterior region
  accumulate_modes(modes, grid, -1.0, snap.psi);
  return snap;
}

FieldSnapshot reconstruct_scattered(const KDistribution& g, const BarrierSpec& b, double t, const SpatialGrid& grid,
                                    Branch sign) {
  require_tunneling_nodes(g, b);
  const double pm = sign == Branch::plus ? 1.0 : -1.0;
  std::vector<ModeCoefficients> modes;
  modes.reserve(static_cast<std::size_t>(g.k.size()));
  for (Eigen::Index j = 0; j < g.k.size(); ++j) {
    const double k = g.k(j);
    const cplx c = packet_coefficient(g, j, b.m, t) / std::numbers::sqrt2;
    const ChannelAmplitudes L = solve_stationary(b, k, Side::left);
    const ChannelAmplitudes R = solve_stationary(b, k, Side::right);
    ModeCoefficients mode{};
    mode.k = k;
    mode.left_back = c * (L.R + pm * R.T);   // reflected from the left packet + transmitted from the right
    mode.right_fwd = c * (L.T + pm * R.R);   // transmitted from the left packet + reflected from the right
    modes.push_back(mode);
  }
  FieldSnapshot snap{grid, t, Eigen::VectorXcd::Zero(grid.N)};
  accumulate_modes(modes, grid, 0.5 * b.L, snap.psi);
  return snap;
}

Eigen::VectorXcd reconstructed_momentum_amplitude(const KDistribution& g, const BarrierSpec& b, double t,
                                                  Branch sign) {
  Eigen::VectorXcd out(g.k.size());
  for (Eigen::Index j = 0; j < g.k.size(); ++j) {
    const double k = g.k(j);
    const SuperposedAmplitude s = superpose_scattered(kinematics(b, k), sign);
    out(j) = g.g(j) * s.S * std::exp(-kI * (k * k * t / (2.0 * b.m)));
  }
  return out;
}

double centroid(const FieldSnapshot& s, Region region, double face) {
  const Eigen::VectorXd density = s.psi.cwiseAbs2();
  const auto [first, last] = region_range(s.grid, region, face);
  const double dx = s.grid.dx();
  const double total = cell_sum(density, 0, s.grid.N - 1, dx);
  const double mass = cell_sum(density, first, last, dx);
  if (!(mass > 1e-6 * total)) {
    throw DomainError("centroid: region holds a negligible fraction of the norm");
  }
  const Eigen::VectorXd moment = density.cwiseProduct(s.grid.points());
  return cell_sum(moment, first, last, dx) / mass;
}

ArrivalEstimate extract_delay(std::span<const FieldSnapshot> snapshots, const BarrierSpec& b, double k0,
                              ArrivalMethod method, double max_residual) {
  const Eigen::Index count = static_cast<Eigen::Index>(snapshots.size());
  if (count < 5) throw DomainError("extract_delay needs at least five post-collision snapshots");
  const double face = 0.5 * b.L;
  if (max_residual < 0.0) max_residual = 1e-6 * b.m * b.L / k0;

  Eigen::MatrixXd design(count, 2);
  Eigen::VectorXd position(count);
  Eigen::VectorXd region_norm(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const FieldSnapshot& s = snapshots[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = s.t;
    const Eigen::VectorXd density = s.psi.cwiseAbs2();
    const auto [first, last] = region_range(s.grid, Region::right_half, face);
    region_norm(i) = cell_sum(density, first, last, s.grid.dx());
    if (method == ArrivalMethod::centroid) {
      position(i) = centroid(s, Region::right_half, face);
    } else {
      if (last <= first + 1) throw DomainError("extract_delay: right half has too few points for a peak");
      Eigen::Index i_max = first;
      density.segment(first, last - first + 1).maxCoeff(&i_max);
      i_max += first;
      i_max = std::clamp(i_max, first + 1, last - 1);
      const Eigen::VectorXd xs = s.grid.points();
      const PeakRefinement peak = refine_peak(std::span<const double>(xs.data(), static_cast<std::size_t>(xs.size())),
                                              std::span<const double>(density.data(), static_cast<std::size_t>(density.size())),
                                              static_cast<std::size_t>(i_max));
      position(i) = peak.position;
    }
  }
  const double norm_spread = (region_norm.maxCoeff() - region_norm.minCoeff()) / region_norm.maxCoeff();
  if (norm_spread > 1e-6) {
    throw NumericError("extract_delay: right-half norm not yet stabilized (window too early)", 0.0, norm_spread);
  }
  const Eigen::Vector2d fit = design.colPivHouseholderQr().solve(position);
  const Eigen::VectorXd residual = design * fit - position;
  const double velocity = fit(1);
  const double rms = std::sqrt(residual.squaredNorm() / static_cast<double>(count));
  const double uncertainty = rms / std::abs(velocity);
  const double crossing = (face - fit(0)) / velocity;
  const double delay = crossing + b.m * b.L / (2.0 * k0);
  if (uncertainty > max_residual) {
    throw NumericError("extract_delay: track is not linear (window too early)", delay, uncertainty);
  }
  return ArrivalEstimate{method, Region::right_half, delay, uncertainty, velocity};
}

DelayPrediction predict_delay(const KDistribution& g, const BarrierSpec& b, Branch sign) {
  const double m = b.m;
  double mean_k = 0.0;
  double mean_slope = 0.0;
  double mean_time = 0.0;
  for (Eigen::Index j = 0; j < g.k.size(); ++j) {
    const double k = g.k(j);
    const Kinematics kin = kinematics(b, k);
    const double time = sign == Branch::plus ? symmetric_phase_time(kin) : antisymmetric_phase_time(kin);
    const double p = g.weights(j) * g.g(j) * g.g(j);
    mean_k += p * k;
    mean_slope += p * time * k / m;  // dphi/dk
    mean_time += p * time;
  }
  const Kinematics center = kinematics(b, g.k0);
  DelayPrediction out{};
  out.phase_time_k0 = sign == Branch::plus ? symmetric_phase_time(center) : antisymmetric_phase_time(center);
  out.centroid_identity = m * mean_slope / mean_k - 0.5 * m * b.L * (1.0 / mean_k - 1.0 / g.k0);
  out.weighted_phase_time = mean_time;
  return out;
}

SplitOperatorPropagator::SplitOperatorPropagator(SpatialGrid grid, Eigen::VectorXd potential, double m, double dt)
    : grid_(grid), dt_(dt), kinetic_phase_(grid.N), potential_half_phase_(grid.N) {
  if (potential.size() != grid.N) throw DomainError("potential size does not match the grid");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(grid.N) * grid.dx());
  for (Eigen::Index j = 0; j < grid.N; ++j) {
    const double index = j < grid.N / 2 ? static_cast<double>(j) : static_cast<double>(j - grid.N);
    const double k = index * dk;
    kinetic_phase_(j) = std::exp(-kI * (k * k * dt / (2.0 * m)));
    potential_half_phase_(j) = std::exp(-kI * (0.5 * potential(j) * dt));
  }
}

void SplitOperatorPropagator::step(Eigen::VectorXcd& psi, long count) const {
  if (count <= 0) return;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum(grid_.N);
  const Eigen::VectorXcd potential_full = potential_half_phase_.cwiseAbs2().cwiseSqrt().cwiseProduct(
      potential_half_phase_.cwiseProduct(potential_half_phase_));
  psi = psi.cwiseProduct(potential_half_phase_);
  for (long s = 0; s < count; ++s) {
    fft.fwd(spectrum, psi);
    spectrum = spectrum.cwiseProduct(kinetic_phase_);
    fft.inv(psi, spectrum);
    // consecutive half steps merge into one full potential step
    psi = psi.cwiseProduct(s + 1 < count ? potential_full : potential_half_phase_);
  }
}

Eigen::VectorXd barrier_potential(const BarrierSpec& b, const SpatialGrid& grid) {
  Eigen::VectorXd v(grid.N);
  for (Eigen::Index i = 0; i < grid.N; ++i) v(i) = std::abs(grid.x(i)) < 0.5 * b.L ? b.V0 : 0.0;
  return v;
}

std::vector<FieldSnapshot> td_propagate(const FieldSnapshot& initial, const BarrierSpec& b, double dt,
                                        std::span<const double> times, double k_resolve) {
  const SpatialGrid& grid = initial.grid;
  if (!(k_resolve > 0.0)) throw DomainError("k_resolve must be positive");
  if (2.0 * std::numbers::pi / (k_resolve * grid.dx()) < 16.0) {
    throw DomainError("grid resolves fewer than 16 points per shortest wavelength");
  }
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (dt * std::max(b.V0, k_resolve * k_resolve / (2.0 * b.m)) > 1.0) {
    throw DomainError("time step too large: phase advance per step exceeds one radian");
  }
  const Eigen::VectorXd potential = barrier_potential(b, grid);
  const double norm0 = initial.norm();
  std::vector<FieldSnapshot> out;
  out.reserve(times.size());
  FieldSnapshot current = initial;
  long total_steps = 0;
  for (double target : times) {
    if (target < current.t) throw DomainError("td_propagate: output times must be ascending from the initial time");
    const double span = target - current.t;
    const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-9)) : 0;
    if (steps > 0) {
      const SplitOperatorPropagator propagator(grid, potential, b.m, span / static_cast<double>(steps));
      propagator.step(current.psi, steps);
      total_steps += steps;
    }
    current.t = target;
    const double drift = std::abs(current.norm() - norm0) / norm0;
    const double allowed = 1e-10 * std::max(1.0, static_cast<double>(total_steps) / 1e4);
    if (drift > allowed) {
      throw NumericError("td_propagate: norm drift exceeds bound", current.norm(), drift);
    }
    out.push_back(current);
  }
  return out;
}

double compare_fields(const FieldSnapshot& a, const FieldSnapshot& b) {
  const auto same = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(u)); };
  if (a.grid.N != b.grid.N || !same(a.grid.x_min, b.grid.x_min) || !same(a.grid.x_max, b.grid.x_max)) {
    throw DomainError("compare_fields: grids differ");
  }
  if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t))) {
    throw DomainError("compare_fields: snapshot times differ");
  }
  const Eigen::VectorXd diff = (a.psi - b.psi).cwiseAbs2();
  return std::sqrt(cell_sum(diff, 0, a.grid.N - 1, a.grid.dx()));
}

CollisionRun run_collision(const BarrierSpec& b, const PacketSpec& spec, const CollisionOptions& options) {
  if (spec.symmetrization == Symmetrization::single_left) {
    throw DomainError("run_collision needs a symmetrized (plus or minus) configuration");
  }
  if (options.snapshot_count < 5) throw DomainError("run_collision needs at least five snapshots");
  const Branch branch = spec.symmetrization == Symmetrization::plus ? Branch::plus : Branch::minus;
  CollisionRun run{build_distribution(spec, b, options.nodes), {}, {}, {}};
  const double width = 1.0 / (2.0 * spec.sigma_k);
  const double t_face = face_arrival_time(spec, b);
  const double face = 0.5 * b.L;
  const double last_centre = face + (options.lead_widths + options.spacing_widths * (options.snapshot_count - 1)) * width;
  const double x_max = last_centre + options.tail_widths * width;
  const double target_dx = 2.0 * std::numbers::pi / (options.points_per_wavelength * run.distribution.k.maxCoeff());
  const auto cells = static_cast<Eigen::Index>(std::ceil((x_max - face) / target_dx));
  const SpatialGrid grid = make_grid(face, x_max, cells);
  for (int i = 0; i < options.snapshot_count; ++i) {
    const double travel = b.L + (options.lead_widths + options.spacing_widths * i) * width;
    run.snapshots.push_back(synthesize_field(run.distribution, b, t_face + travel * b.m / spec.k0, spec.symmetrization, grid));
  }
  run.estimate = extract_delay(run.snapshots, b, spec.k0);
  run.prediction = predict_delay(run.distribution, b, branch);
  return run;
}

}  // namespace tunneltimes
