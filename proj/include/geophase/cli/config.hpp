#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "geophase/berry.hpp"
#include "geophase/pairproto.hpp"

namespace geophase::cli {

enum class Mode { single, pair, sweep };
enum class SweepParam { theta_deg, length };

struct SweepSpec {
  SweepParam param = SweepParam::theta_deg;
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 2;
};

/// Loop samples used for every CLI run (N of the cone loops).
inline constexpr std::size_t kLoopSamples = 10000;

struct RunConfig {
  Mode mode = Mode::single;
  std::optional<double> theta_deg;  // required unless sweeping over theta
  double kappa = 1.0;
  double length = 400.0 * std::numbers::pi;
  std::size_t n_steps = 0;  // 0: evolution default
  Band band = Band::minus;
  BellSign bell_sign = BellSign::plus;
  bool counter_rotate_a = false;
  std::optional<GeneralizedBasis> generalized;  // nullopt: Bell basis
  std::optional<SweepSpec> sweep;
  std::optional<std::string> output_path;
};

/// Parses and validates a JSON run configuration.  Throws ConfigurationError
/// naming the offending key path.
RunConfig parse_config(std::string_view json_text);

/// Evenly spaced grid from..to inclusive; both endpoints exact.
std::vector<double> sweep_grid(const SweepSpec& sweep);

}  // namespace geophase::cli
