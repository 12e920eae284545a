#include "tunneltimes/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "tunneltimes/errors.hpp"
#include "tunneltimes/parallel.hpp"

namespace tunneltimes {

namespace {

constexpr double kNearOne = 1e-6;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config: '" + std::string(key) + "' expects a number, got '" + s + "'");
  }
}

long long parse_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw DomainError("config: '" + std::string(key) + "' expects an integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw DomainError("config: '" + std::string(key) + "' expects true/false, got '" + s + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw DomainError("config: '" + std::string(key) + "' expects a comma-separated list");
  return out;
}

bool near_one(double n) { return std::abs(n - 1.0) < kNearOne; }

void require_off_resonance(const RunConfig& cfg, double n) {
  if (near_one(n) && !cfg.series) {
    throw DomainError("n = " + format_number(n) + " lies within 1e-6 of n = 1; enable series mode to evaluate it");
  }
}

// Runs row(i) for every index in parallel; rows keep their input order.
template <typename RowFn>
std::vector<std::vector<double>> build_rows(std::size_t count, RowFn&& row) {
  std::vector<std::vector<double>> rows(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) rows[i] = row(i);
  });
  return rows;
}

std::string unit_suffix(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::absolute:
      return "";
    case NormalizationMode::by_tau_k:
      return " [tau_k]";
    case NormalizationMode::by_tau_w:
      return " [tau_w]";
  }
  return "";
}

std::string snapshot_path(const std::string& out, std::size_t index) {
  const auto dot = out.rfind('.');
  const auto slash = out.rfind('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? out.substr(0, dot) : out;
  return stem + "_snapshot" + std::to_string(index) + ".csv";
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (!(cfg.wl > 0.0) || !std::isfinite(cfg.wl)) throw DomainError("wl must be positive, got " + format_number(cfg.wl));
  if (!(cfg.n_min > 0.0)) throw DomainError("n_min must be positive");
  if (!(cfg.n_max > cfg.n_min)) throw DomainError("n_max must exceed n_min");
  if (cfg.n_steps < 2) throw DomainError("n_steps must be at least 2");
  if (!(cfg.sigma_rel > 0.0)) throw DomainError("sigma_rel must be positive");
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  if (!(cfg.n0 > 0.0 && cfg.n0 < 1.0)) throw DomainError("n0 must lie in (0, 1)");
  if (!(cfg.alpha_min > 0.0 && cfg.alpha_max > cfg.alpha_min)) throw DomainError("need 0 < alpha_min < alpha_max");
  for (double n : cfg.figure1_n) {
    if (!(n > 0.0 && n < 1.0)) throw DomainError("figure1 n values must lie in (0, 1)");
  }
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::times:
      return "times";
    case Command::figure1:
      return "figure1";
    case Command::figure2:
      return "figure2";
    case Command::packet:
      return "packet";
    case Command::scan:
      return "scan";
    case Command::verify:
      return "verify";
  }
  return "?";
}

Command parse_command(std::string_view text) {
  for (Command c : {Command::times, Command::figure1, Command::figure2, Command::packet, Command::scan,
                    Command::verify}) {
    if (text == to_string(c)) return c;
  }
  throw DomainError("unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Symmetrization s) {
  switch (s) {
    case Symmetrization::plus:
      return "plus";
    case Symmetrization::minus:
      return "minus";
    case Symmetrization::single_left:
      return "single";
  }
  return "?";
}

Symmetrization parse_symmetrization(std::string_view text) {
  if (text == "plus") return Symmetrization::plus;
  if (text == "minus") return Symmetrization::minus;
  if (text == "single") return Symmetrization::single_left;
  throw DomainError("symmetrization must be plus, minus or single, got '" + std::string(text) + "'");
}

std::string_view to_string(ThetaVariant v) { return v == ThetaVariant::rho_l ? "rho_l" : "two_rho_l"; }

ThetaVariant parse_theta_variant(std::string_view text) {
  if (text == "rho_l") return ThetaVariant::rho_l;
  if (text == "two_rho_l") return ThetaVariant::two_rho_l;
  throw DomainError("theta variant must be rho_l or two_rho_l, got '" + std::string(text) + "'");
}

void apply_setting(RunConfig& cfg, std::string_view raw_key, std::string_view value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value);
  if (key == "command") {
    cfg.command = parse_command(v);
  } else if (key == "wl") {
    cfg.wl = parse_double(key, v);
  } else if (key == "n_min") {
    cfg.n_min = parse_double(key, v);
  } else if (key == "n_max") {
    cfg.n_max = parse_double(key, v);
  } else if (key == "n_steps") {
    cfg.n_steps = static_cast<int>(parse_integer(key, v));
  } else if (key == "sigma_rel") {
    cfg.sigma_rel = parse_double(key, v);
  } else if (key == "delta") {
    cfg.delta = parse_double(key, v);
  } else if (key == "sym" || key == "symmetrization") {
    cfg.symmetrization = parse_symmetrization(v);
  } else if (key == "norm" || key == "normalization") {
    cfg.normalization = parse_normalization(v);
  } else if (key == "out" || key == "out_path") {
    cfg.out_path = v;
  } else if (key == "seed") {
    const long long s = parse_integer(key, v);
    if (s < 0) throw DomainError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "n0") {
    cfg.n0 = parse_double(key, v);
  } else if (key == "figure1_n" || key == "fig1_n") {
    cfg.figure1_n = parse_list(key, v);
  } else if (key == "alpha_min") {
    cfg.alpha_min = parse_double(key, v);
  } else if (key == "alpha_max") {
    cfg.alpha_max = parse_double(key, v);
  } else if (key == "series") {
    cfg.series = parse_bool(key, v);
  } else if (key == "theta_variant") {
    cfg.theta_variant = parse_theta_variant(v);
  } else {
    throw DomainError("config: unknown key '" + key + "'");
  }
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(number) + ": expected 'key = value'");
    }
    apply_setting(cfg, std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(cfg, buffer.str());
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  out << "command=" << to_string(cfg.command) << " wl=" << format_number(cfg.wl)
      << " n_min=" << format_number(cfg.n_min) << " n_max=" << format_number(cfg.n_max)
      << " n_steps=" << cfg.n_steps << " sigma_rel=" << format_number(cfg.sigma_rel)
      << " delta=" << format_number(cfg.delta) << " sym=" << to_string(cfg.symmetrization)
      << " norm=" << to_string(cfg.normalization) << " seed=" << cfg.seed << " n0=" << format_number(cfg.n0)
      << " figure1_n=";
  for (std::size_t i = 0; i < cfg.figure1_n.size(); ++i) out << (i ? "," : "") << format_number(cfg.figure1_n[i]);
  out << " alpha_min=" << format_number(cfg.alpha_min) << " alpha_max=" << format_number(cfg.alpha_max)
      << " series=" << (cfg.series ? 1 : 0) << " theta_variant=" << to_string(cfg.theta_variant);
  return out.str();
}

std::string format_number(double x) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return out.str();
}

void write_csv(const CsvTable& table, std::ostream& out) {
  out << "# " << table.provenance << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  std::vector<bool> is_flag(table.header.size(), false);
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    is_flag[i] = std::find(table.flag_columns.begin(), table.flag_columns.end(), table.header[i]) !=
                 table.flag_columns.end();
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (i < is_flag.size() && is_flag[i]) {
        out << (row[i] != 0.0 ? 1 : 0);
      } else {
        out << format_number(row[i]);
      }
    }
    out << '\n';
  }
  for (const auto& line : table.trailer) out << "# " << line << '\n';
}

void write_csv(const CsvTable& table, const std::string& path) {
  if (path.empty()) {
    write_csv(table, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "' for writing");
  write_csv(table, out);
  out.close();
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::vector<double> n_sweep(const RunConfig& cfg) {
  std::vector<double> ns(static_cast<std::size_t>(cfg.n_steps));
  const double step = (cfg.n_max - cfg.n_min) / static_cast<double>(cfg.n_steps - 1);
  for (int i = 0; i < cfg.n_steps; ++i) ns[static_cast<std::size_t>(i)] = cfg.n_min + step * i;
  ns.back() = cfg.n_max;
  return ns;
}

CsvTable cmd_times(const RunConfig& cfg) {
  validate(cfg);
  const std::vector<double> ns = n_sweep(cfg);
  for (double n : ns) require_off_resonance(cfg, n);
  const BarrierSpec b = dimensionless_barrier(cfg.wl);
  const std::string unit = unit_suffix(cfg.normalization);
  CsvTable table{config_echo(cfg), {"n", "alpha", "t_T", "t_T_phi", "t_D_phi", "t_I_phi"}, {}, {}, {}};
  table.rows = build_rows(ns.size(), [&](std::size_t i) {
    const Kinematics kin = kinematics_at(b, ns[i]);
    const TimeBundle t = time_bundle(kin);
    auto norm = [&](double time) { return normalize_time(time, cfg.normalization, kin); };
    // above the barrier alpha is imaginary; its modulus is reported
    return std::vector<double>{ns[i], std::abs(kin.alpha), norm(t.t_T), norm(t.t_T_phi), norm(t.t_D_phi),
                               norm(t.t_I_phi)};
  });
  if (!unit.empty()) table.trailer.push_back("times in units of " + unit.substr(2, unit.size() - 3));
  return table;
}

CsvTable cmd_figure1(const RunConfig& cfg) {
  validate(cfg);
  CsvTable table{config_echo(cfg), {"n", "alpha", "wl", "t_T", "t_T_phi", "hartman"}, {}, {}, {"times in units of tau_k"}};
  const std::size_t per_curve = static_cast<std::size_t>(cfg.n_steps);
  const double step = (cfg.alpha_max - cfg.alpha_min) / static_cast<double>(cfg.n_steps - 1);
  table.rows = build_rows(per_curve * cfg.figure1_n.size(), [&](std::size_t i) {
    const double n = cfg.figure1_n[i / per_curve];
    const double alpha = cfg.alpha_min + step * static_cast<double>(i % per_curve);
    const double wl = alpha / std::sqrt(1.0 - n);
    return std::vector<double>{n, alpha, wl, standard_time_ratio(alpha, n, wl), symmetric_time_ratio(alpha, n),
                               2.0 / alpha};
  });
  return table;
}

CsvTable cmd_figure2(const RunConfig& cfg) {
  validate(cfg);
  const std::vector<double> ns = n_sweep(cfg);
  for (double n : ns) require_off_resonance(cfg, n);
  const BarrierSpec b = dimensionless_barrier(cfg.wl);
  CsvTable table{config_echo(cfg),
                 {"n", "t_T_phi_tauw", "t_D_phi_tauw", "t_I_phi_tauw", "t_T_tauw", "t_D_tauw", "t_I_tauw",
                  "t_T_phi_tauk", "t_D_phi_tauk", "t_I_phi_tauk", "t_T_tauk", "t_D_tauk", "t_I_tauk"},
                 {},
                 {},
                 {"one-way t_I is t_T - t_D"}};
  table.rows = build_rows(ns.size(), [&](std::size_t i) {
    const Kinematics kin = kinematics_at(b, ns[i]);
    const TimeBundle t = time_bundle(kin);
    // the one-way interior basis degenerates at n = 1; the dwell time is continuous there
    const double dwell_n = near_one(ns[i]) ? 1.0 - kNearOne : ns[i];
    const double one_way_dwell = one_way_dwell_time(kinematics_at(b, dwell_n)) * kin.tau_k / kinematics_at(b, dwell_n).tau_k;
    const double values[6] = {t.t_T_phi, t.t_D_phi, t.t_I_phi, t.t_T, one_way_dwell, t.t_T - one_way_dwell};
    std::vector<double> row{ns[i]};
    for (double v : values) row.push_back(v / kin.tau_w);
    for (double v : values) row.push_back(v / kin.tau_k);
    return row;
  });
  return table;
}

CsvTable cmd_scan(const RunConfig& cfg) {
  validate(cfg);
  const std::vector<double> ns = n_sweep(cfg);
  for (double n : ns) require_off_resonance(cfg, n);
  const ScanReport report = superluminal_scan(cfg.wl, ns);
  CsvTable table{config_echo(cfg),
                 {"n", "wl", "T2", "t_ratio", "flag_T", "flag_fast", "flag_joint"},
                 {},
                 {"flag_T", "flag_fast", "flag_joint"},
                 {}};
  for (const ScanRow& r : report.rows) {
    table.rows.push_back({r.n, r.wl, r.T2, r.t_ratio, r.flag_T ? 1.0 : 0.0, r.flag_fast ? 1.0 : 0.0,
                          r.flag_joint ? 1.0 : 0.0});
  }
  std::ostringstream summary;
  summary << "joint region empty for n < 1: " << (report.joint_empty_below_one ? "yes" : "NO");
  summary << "; joint onset n = " << (report.joint_onset ? format_number(*report.joint_onset) : "none");
  summary << "; weak-inequality onset n = "
          << (report.weak_joint_onset ? format_number(*report.weak_joint_onset) : "none");
  table.trailer.push_back(summary.str());
  return table;
}

PacketOutput cmd_packet(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.symmetrization == Symmetrization::single_left) {
    throw DomainError("packet needs sym = plus or minus");
  }
  const BarrierSpec b = dimensionless_barrier(cfg.wl);
  const PacketSpec spec = make_packet(b, cfg.n0, cfg.sigma_rel, cfg.delta, cfg.symmetrization);
  PacketOutput out{{}, {}, run_collision(b, spec)};
  const CollisionRun& run = out.run;

  const Kinematics center = kinematics(b, spec.k0);
  auto norm = [&](double t) { return normalize_time(t, cfg.normalization, center); };
  const double delay = run.estimate.delay;
  auto rel = [delay](double reference) { return std::abs(delay - reference) / std::abs(reference); };
  out.report = CsvTable{config_echo(cfg),
                        {"n0", "sigma_rel", "extracted_delay", "fit_uncertainty", "phase_time_k0",
                         "weighted_prediction", "centroid_identity", "rel_diff_phase_time", "rel_diff_weighted",
                         "rel_diff_identity"},
                        {{cfg.n0, cfg.sigma_rel, norm(delay), norm(run.estimate.uncertainty),
                          norm(run.prediction.phase_time_k0), norm(run.prediction.weighted_phase_time),
                          norm(run.prediction.centroid_identity), rel(run.prediction.phase_time_k0),
                          rel(run.prediction.weighted_phase_time), rel(run.prediction.centroid_identity)}},
                        {},
                        {}};
  const std::string unit = unit_suffix(cfg.normalization);
  if (!unit.empty()) out.report.trailer.push_back("times in units of " + unit.substr(2, unit.size() - 3));

  // full-domain snapshots at the same instants as the fitted track
  const double half_width = run.snapshots.front().grid.x_max;
  const double dx = run.snapshots.front().grid.dx();
  const auto cells = static_cast<Eigen::Index>(2 * std::ceil(half_width / dx));
  const SpatialGrid grid = aligned_grid(b, half_width, cells);
  for (const FieldSnapshot& s : run.snapshots) {
    const FieldSnapshot full = synthesize_field(run.distribution, b, s.t, cfg.symmetrization, grid);
    CsvTable snap{config_echo(cfg) + " t=" + format_number(s.t), {"x", "re_psi", "im_psi", "abs2"}, {}, {}, {}};
    snap.rows.reserve(static_cast<std::size_t>(grid.N));
    for (Eigen::Index i = 0; i < grid.N; ++i) {
      snap.rows.push_back({grid.x(i), full.psi(i).real(), full.psi(i).imag(), std::norm(full.psi(i))});
    }
    out.snapshots.push_back(std::move(snap));
  }
  return out;
}

VerifyOutput cmd_verify(const RunConfig& cfg) {
  validate(cfg);
  VerifyOutput out{{}, run_verification_suite(cfg.seed, cfg.theta_variant), true};
  out.report = CsvTable{config_echo(cfg), {"check", "passed", "achieved", "required", "detail"}, {}, {}, {}};
  for (const CheckResult& c : out.checks) out.all_passed = out.all_passed && c.passed;
  return out;
}

namespace {

void write_verify(const VerifyOutput& v, const std::string& path) {
  auto emit = [&](std::ostream& os) {
    os << "# " << v.report.provenance << '\n' << "check,passed,achieved,required,detail\n";
    for (const CheckResult& c : v.checks) {
      os << c.name << ',' << (c.passed ? 1 : 0) << ',' << format_number(c.achieved) << ','
         << format_number(c.required) << ",\"" << c.detail << "\"\n";
    }
    os << "# " << (v.all_passed ? "all checks passed" : "VERIFICATION FAILED") << '\n';
  };
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "' for writing");
  emit(out);
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  switch (cfg.command) {
    case Command::times:
      write_csv(cmd_times(cfg), cfg.out_path);
      return 0;
    case Command::figure1:
      write_csv(cmd_figure1(cfg), cfg.out_path);
      return 0;
    case Command::figure2:
      write_csv(cmd_figure2(cfg), cfg.out_path);
      return 0;
    case Command::scan:
      write_csv(cmd_scan(cfg), cfg.out_path);
      return 0;
    case Command::packet: {
      const PacketOutput out = cmd_packet(cfg);
      write_csv(out.report, cfg.out_path);
      if (cfg.out_path.empty()) {
        log << "snapshots not written (no --out path given)\n";
      } else {
        for (std::size_t i = 0; i < out.snapshots.size(); ++i) {
          const std::string path = snapshot_path(cfg.out_path, i);
          write_csv(out.snapshots[i], path);
          log << "wrote " << path << '\n';
        }
      }
      return 0;
    }
    case Command::verify: {
      const VerifyOutput out = cmd_verify(cfg);
      write_verify(out, cfg.out_path);
      for (const CheckResult& c : out.checks) {
        if (!c.passed) {
          log << "FAIL " << c.name << ": achieved " << format_number(c.achieved) << ", required <= "
              << format_number(c.required) << " (" << c.detail << ")\n";
        }
      }
      return out.all_passed ? 0 : 3;
    }
  }
  return 1;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e) != nullptr) return 2;
  return 1;
}

}  // namespace tunneltimes
