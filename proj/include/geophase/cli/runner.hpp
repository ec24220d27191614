#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geophase/cli/config.hpp"

namespace geophase::cli {

enum class RunStatus { ok, numerical_failure, not_adiabatic };

const char* status_name(RunStatus s);

/// One output row.  Fields that could not be computed are NaN.
struct RunRecord {
  double theta_deg = 0.0;
  double omega_sr = 0.0;
  double gamma_wilson = 0.0;
  double gamma_dynamics = 0.0;
  double gamma_analytic = 0.0;
  double fidelity_eq4 = 0.0;
  double overlap_initial = 0.0;
  double energy_residual_max = 0.0;
  double norm_drift = 0.0;
  RunStatus status = RunStatus::ok;

  // Summary-only details, not written to the CSV.
  double length = 0.0;
  double overlap_partner = 0.0;
  double method_residual = 0.0;
  std::string note;
};

inline constexpr const char* kCsvHeader =
    "theta_deg,omega_sr,gamma_wilson,gamma_dynamics,gamma_analytic,fidelity_eq4,overlap_initial,"
    "energy_residual_max,norm_drift,status";

/// Evaluates one grid point: Berry-phase analysis of the cone loop for the
/// configured band plus the pair protocol.
RunRecord evaluate_point(const RunConfig& config, double theta_deg, double length);

/// Every record of the run, in grid order.  Sweep points run concurrently.
std::vector<RunRecord> execute(const RunConfig& config);

/// Header line plus one line per record, 12 significant digits, "." decimal.
std::string format_csv(const std::vector<RunRecord>& records);

/// Whitespace-separated columns mirroring the CSV, '#' comment header.
std::string emit_plot_data(const std::vector<RunRecord>& records);

void write_summary(const RunConfig& config, const std::vector<RunRecord>& records, std::ostream& out);

/// 0: every row ok or not_adiabatic; 2: any numerical_failure.
int exit_code_for(const std::vector<RunRecord>& records);

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> plot_path;
};

/// Full front end: read config, execute, write artifacts.  Returns the process
/// exit code (1 on any configuration error).
int run(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace geophase::cli
