#pragma once

// Run configuration, CSV output and the CLI subcommands.

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tunneltimes/kinematics.hpp"
#include "tunneltimes/scattering.hpp"
#include "tunneltimes/verification.hpp"
#include "tunneltimes/wavepacket.hpp"

namespace tunneltimes {

enum class Command { times, figure1, figure2, packet, scan, verify };

struct RunConfig {
  Command command = Command::times;
  double wl = 4.0 * std::numbers::pi;
  double n_min = 0.01;
  double n_max = 0.99;
  int n_steps = 99;
  double sigma_rel = 0.01;
  double delta = 0.0;
  Symmetrization symmetrization = Symmetrization::plus;
  NormalizationMode normalization = NormalizationMode::by_tau_k;
  std::string out_path;  // empty: standard output
  std::uint64_t seed = 20240917;

  double n0 = 0.5;                                   // packet central n
  std::vector<double> figure1_n{0.25, 0.5, 0.75};    // curves drawn by figure1
  double alpha_min = 0.05;                           // figure1 abscissa range
  double alpha_max = 12.0;
  bool series = false;                               // allow points within 1e-6 of n = 1
  ThetaVariant theta_variant = ThetaVariant::rho_l;  // verify only
};

/// Throws DomainError on any invalid field.
void validate(const RunConfig& cfg);

std::string_view to_string(Command c);
Command parse_command(std::string_view text);
std::string_view to_string(Symmetrization s);
Symmetrization parse_symmetrization(std::string_view text);
std::string_view to_string(ThetaVariant v);
ThetaVariant parse_theta_variant(std::string_view text);

/// Sets one field from its config-file key (flag names with '-' or '_').
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// `key = value` lines, `#` starts a comment, blank lines ignored.
void apply_config_text(RunConfig& cfg, std::string_view text);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// One-line echo of every field, used as the CSV provenance comment.
std::string config_echo(const RunConfig& cfg);

struct CsvTable {
  std::string provenance;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> flag_columns;  // printed as 0/1
  std::vector<std::string> trailer;       // extra `#` lines after the rows
};

/// 17 significant digits, shortest exponent form from the stream.
std::string format_number(double x);

void write_csv(const CsvTable& table, std::ostream& out);

/// Writes to `path`, or standard output when empty. Throws std::runtime_error
/// if the file cannot be written.
void write_csv(const CsvTable& table, const std::string& path);

/// Evenly spaced n values, n_min and n_max included.
std::vector<double> n_sweep(const RunConfig& cfg);

CsvTable cmd_times(const RunConfig& cfg);
CsvTable cmd_figure1(const RunConfig& cfg);
CsvTable cmd_figure2(const RunConfig& cfg);
CsvTable cmd_scan(const RunConfig& cfg);

struct PacketOutput {
  CsvTable report;
  std::vector<CsvTable> snapshots;
  CollisionRun run;
};

PacketOutput cmd_packet(const RunConfig& cfg);

struct VerifyOutput {
  CsvTable report;
  std::vector<CheckResult> checks;
  bool all_passed;
};

VerifyOutput cmd_verify(const RunConfig& cfg);

/// Dispatches cfg.command, writes its output and returns the exit code
/// (0 success, 3 verification failure). Other failures propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& log);

/// Maps an exception to the exit code: DomainError and config errors 1,
/// NumericError 2, anything else 1.
int exit_code_for(const std::exception& e);

}  // namespace tunneltimes
