#include "geophase/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace geophase::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt12(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

std::vector<double> columns(const RunRecord& r) {
  return {r.theta_deg,    r.omega_sr,        r.gamma_wilson,        r.gamma_dynamics, r.gamma_analytic,
          r.fidelity_eq4, r.overlap_initial, r.energy_residual_max, r.norm_drift};
}

void downgrade(RunRecord& r, RunStatus s, const std::string& note) {
  if (r.status == RunStatus::numerical_failure) return;
  if (s == RunStatus::numerical_failure || r.status == RunStatus::ok) r.status = s;
  if (!r.note.empty()) r.note += "; ";
  r.note += note;
}

ProtocolConfig protocol_config(const RunConfig& config, double theta, double length) {
  ProtocolConfig p;
  p.theta = theta;
  p.kappa = config.kappa;
  p.length = length;
  p.n_samples = kLoopSamples;
  p.n_steps = config.n_steps;
  p.bell_sign = config.bell_sign;
  p.counter_rotate_a = config.counter_rotate_a;
  if (config.generalized) p.basis = *config.generalized;
  return p;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

}  // namespace

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ok:
      return "ok";
    case RunStatus::numerical_failure:
      return "numerical_failure";
    case RunStatus::not_adiabatic:
      return "not_adiabatic";
  }
  return "unknown";
}

RunRecord evaluate_point(const RunConfig& config, double theta_deg, double length) {
  RunRecord r;
  r.theta_deg = theta_deg;
  r.length = length;
  const double theta = theta_deg * kPi / 180.0;
  const HamiltonianSchedule schedule(make_cone_loop(theta, kLoopSamples, +1), config.kappa, length);

  r.omega_sr = solid_angle(schedule.loop()).omega;
  r.gamma_analytic = analytic_gamma(r.omega_sr, config.band);
  r.gamma_wilson = wilson_loop_phase(schedule.loop(), config.band);

  try {
    const BerryPhaseResult b = analyze_loop(schedule, config.band, config.n_steps);
    r.gamma_dynamics = b.gamma_dynamics;
    r.method_residual = b.method_residual;
    r.norm_drift = b.norm_drift;
    if (!b.accepted)
      downgrade(r, RunStatus::not_adiabatic, "wilson/dynamics residual " + fmt12(b.method_residual) + " > 1e-3");
  } catch (const NumericalFailure& e) {
    r.gamma_dynamics = r.method_residual = kNaN;
    r.norm_drift = e.norm_drift();
    downgrade(r, RunStatus::numerical_failure, e.what());
  } catch (const NotAdiabaticError& e) {
    r.gamma_dynamics = r.method_residual = kNaN;
    downgrade(r, RunStatus::not_adiabatic, e.what());
  }

  try {
    const ProtocolResult p = run_pair_protocol(protocol_config(config, theta, length));
    r.fidelity_eq4 = p.fidelity_eq4;
    r.overlap_initial = p.overlap_initial;
    r.overlap_partner = p.overlap_partner;
    r.energy_residual_max = p.energy_residual_max;
    r.norm_drift = std::max(r.norm_drift, p.norm_drift);
  } catch (const NumericalFailure& e) {
    r.fidelity_eq4 = r.overlap_initial = r.overlap_partner = r.energy_residual_max = kNaN;
    r.norm_drift = std::max(r.norm_drift, e.norm_drift());
    downgrade(r, RunStatus::numerical_failure, e.what());
  } catch (const ProtocolViolation& e) {
    r.fidelity_eq4 = r.overlap_initial = r.overlap_partner = r.energy_residual_max = kNaN;
    downgrade(r, RunStatus::not_adiabatic, e.what());
  }
  return r;
}

std::vector<RunRecord> execute(const RunConfig& config) {
  std::vector<std::pair<double, double>> points;  // (theta_deg, length)
  if (config.mode == Mode::sweep) {
    for (double x : sweep_grid(*config.sweep)) {
      if (config.sweep->param == SweepParam::theta_deg)
        points.emplace_back(x, config.length);
      else
        points.emplace_back(*config.theta_deg, x);
    }
  } else {
    points.emplace_back(*config.theta_deg, config.length);
  }

  std::vector<RunRecord> records(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        records[i] = evaluate_point(config, points[i].first, points[i].second);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, points.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return records;
}

std::string format_csv(const std::vector<RunRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const RunRecord& r : records) {
    for (double v : columns(r)) {
      out += fmt12(v);
      out += ',';
    }
    out += status_name(r.status);
    out += '\n';
  }
  return out;
}

std::string emit_plot_data(const std::vector<RunRecord>& records) {
  std::string out = "# ";
  for (char c : std::string(kCsvHeader)) out += c == ',' ? ' ' : c;
  out += '\n';
  for (const RunRecord& r : records) {
    for (double v : columns(r)) {
      out += fmt12(v);
      out += ' ';
    }
    out += status_name(r.status);
    out += '\n';
  }
  return out;
}

void write_summary(const RunConfig& config, const std::vector<RunRecord>& records, std::ostream& out) {
  const char* band = config.band == Band::minus ? "minus" : "plus";
  if (config.mode == Mode::sweep) {
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : records) ++counts[static_cast<int>(r.status)];
    out << "sweep over " << (config.sweep->param == SweepParam::theta_deg ? "theta_deg" : "length") << ": "
        << records.size() << " points (" << counts[0] << " ok, " << counts[2] << " not_adiabatic, " << counts[1]
        << " numerical_failure)\n";
    for (const auto& r : records)
      out << "  theta " << fixed(r.theta_deg, 3) << " deg  L " << fixed(r.length, 3) << "  Gamma "
          << fixed(r.gamma_wilson) << "  analytic " << fixed(r.gamma_analytic) << "  fidelity "
          << fixed(r.fidelity_eq4) << "  " << status_name(r.status) << '\n';
    return;
  }

  const RunRecord& r = records.front();
  out << (config.mode == Mode::single ? "single-band run" : "pair protocol run") << ": theta = " << fixed(r.theta_deg, 3)
      << " deg, kappa = " << fixed(config.kappa, 6) << ", L = " << fixed(r.length, 6) << " (" << fixed(r.length / kPi, 3)
      << " pi)\n";
  if (config.mode == Mode::single) {
    out << "  band                       " << band << '\n'
        << "  solid angle Omega          " << fixed(r.omega_sr) << " sr\n"
        << "  Gamma (Wilson loop)        " << fixed(r.gamma_wilson) << '\n'
        << "  Gamma (dynamics)           " << fixed(r.gamma_dynamics) << '\n'
        << "  Gamma (analytic)           " << fixed(r.gamma_analytic) << '\n'
        << "  wilson/dynamics residual   " << fmt12(r.method_residual) << '\n';
  } else {
    const bool plus = config.bell_sign == BellSign::plus;
    const char* in = config.generalized ? (plus ? "phi_plus (generalized)" : "phi_minus (generalized)")
                                        : (plus ? "Phi+" : "Phi-");
    const char* other = config.generalized ? (plus ? "|<phi_minus|out>|" : "|<phi_plus|out>| ")
                                           : (plus ? "|<Phi-|out>|     " : "|<Phi+|out>|     ");
    out << "  input                      " << in << (config.counter_rotate_a ? ", medium A counter-rotating" : "")
        << '\n'
        << "  solid angle Omega          " << fixed(r.omega_sr) << " sr\n"
        << "  Gamma (Wilson loop, B)     " << fixed(r.gamma_wilson) << '\n'
        << "  overlap_initial            " << fixed(r.overlap_initial) << '\n'
        << "  " << other << "          " << fixed(r.overlap_partner) << '\n'
        << "  fidelity vs prediction     " << fixed(r.fidelity_eq4, 8) << '\n'
        << "  energy residual (max)      " << fmt12(r.energy_residual_max) << '\n';
  }
  out << "  norm drift                 " << fmt12(r.norm_drift) << '\n'
      << "  status                     " << status_name(r.status) << '\n';
  if (!r.note.empty()) out << "  note: " << r.note << '\n';
}

int exit_code_for(const std::vector<RunRecord>& records) {
  for (const auto& r : records)
    if (r.status == RunStatus::numerical_failure) return 2;
  return 0;
}

int run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    std::ifstream in(options.config_path);
    if (!in) throw ConfigurationError("configuration error: cannot read '" + options.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    config = parse_config(buf.str());
  } catch (const ConfigurationError& e) {
    err << e.what() << '\n';
    return 1;
  }
  if (options.out_path) config.output_path = options.out_path;

  std::vector<RunRecord> records;
  try {
    records = execute(config);
  } catch (const ConfigurationError& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const InputDomainError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 1;
  }

  write_summary(config, records, out);
  const std::string csv = format_csv(records);
  if (config.output_path) {
    std::ofstream f(*config.output_path, std::ios::binary);
    if (!f || !(f << csv)) {
      err << "error: cannot write '" << *config.output_path << "'\n";
      return 1;
    }
    out << "  csv written to " << *config.output_path << '\n';
  } else {
    out << '\n' << csv;
  }
  if (options.plot_path) {
    std::ofstream f(*options.plot_path, std::ios::binary);
    if (!f || !(f << emit_plot_data(records))) {
      err << "error: cannot write '" << *options.plot_path << "'\n";
      return 1;
    }
  }
  return exit_code_for(records);
}

}  // namespace geophase::cli
