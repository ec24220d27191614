#include "geophase/cli/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

namespace geophase::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigurationError("configuration error at '" + path + "': " + why);
}

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) fail(prefix + key, "unknown key");
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "must be finite");
  return d;
}

std::size_t count(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

void check_theta(double deg, const std::string& path) {
  if (deg < 0.0 || deg > 90.0) fail(path, "must lie in [0, 90] degrees");
}

SweepSpec parse_sweep(const json& s) {
  if (!s.is_object()) fail("sweep", "expected an object");
  reject_unknown(s, "sweep.", {"param", "from", "to", "count"});
  for (const char* key : {"param", "from", "to", "count"})
    if (!s.contains(key)) fail(std::string("sweep.") + key, "missing required key");

  SweepSpec spec;
  const std::string param = text(s, "param", "sweep.param");
  if (param == "theta_deg")
    spec.param = SweepParam::theta_deg;
  else if (param == "length")
    spec.param = SweepParam::length;
  else
    fail("sweep.param", "expected \"theta_deg\" or \"length\"");

  spec.from = number(s, "from", "sweep.from");
  spec.to = number(s, "to", "sweep.to");
  spec.count = count(s, "count", "sweep.count");
  if (spec.count < 2) fail("sweep.count", "must be at least 2");
  if (spec.param == SweepParam::theta_deg) {
    check_theta(spec.from, "sweep.from");
    check_theta(spec.to, "sweep.to");
  } else {
    if (spec.from <= 0.0) fail("sweep.from", "length must be positive");
    if (spec.to <= 0.0) fail("sweep.to", "length must be positive");
  }
  return spec;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("configuration error: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected a JSON object");
  reject_unknown(doc, "", {"mode", "theta_deg", "kappa", "length", "n_steps", "band", "bell_sign",
                           "counter_rotate_a", "basis", "sweep", "output_path"});

  RunConfig c;
  if (!doc.contains("mode")) fail("mode", "missing required key");
  const std::string mode = text(doc, "mode", "mode");
  if (mode == "single")
    c.mode = Mode::single;
  else if (mode == "pair")
    c.mode = Mode::pair;
  else if (mode == "sweep")
    c.mode = Mode::sweep;
  else
    fail("mode", "expected \"single\", \"pair\" or \"sweep\"");

  if (doc.contains("theta_deg")) {
    c.theta_deg = number(doc, "theta_deg", "theta_deg");
    check_theta(*c.theta_deg, "theta_deg");
  }
  if (doc.contains("kappa")) {
    c.kappa = number(doc, "kappa", "kappa");
    if (c.kappa <= 0.0) fail("kappa", "must be positive");
  }
  if (doc.contains("length")) {
    c.length = number(doc, "length", "length");
    if (c.length <= 0.0) fail("length", "must be positive");
  }
  if (doc.contains("n_steps")) {
    c.n_steps = count(doc, "n_steps", "n_steps");
    if (c.n_steps < tol::kStepsPerSample * kLoopSamples)
      fail("n_steps", "must be at least " + std::to_string(tol::kStepsPerSample * kLoopSamples) +
                          " (10 per loop sample)");
  }
  if (doc.contains("band")) {
    const std::string b = text(doc, "band", "band");
    if (b == "minus")
      c.band = Band::minus;
    else if (b == "plus")
      c.band = Band::plus;
    else
      fail("band", "expected \"minus\" or \"plus\"");
  }
  if (doc.contains("bell_sign")) {
    const std::string s = text(doc, "bell_sign", "bell_sign");
    if (s == "+")
      c.bell_sign = BellSign::plus;
    else if (s == "-")
      c.bell_sign = BellSign::minus;
    else
      fail("bell_sign", "expected \"+\" or \"-\"");
  }
  if (doc.contains("counter_rotate_a")) {
    if (!doc["counter_rotate_a"].is_boolean()) fail("counter_rotate_a", "expected true or false");
    c.counter_rotate_a = doc["counter_rotate_a"].get<bool>();
  }
  if (doc.contains("basis")) {
    const json& b = doc["basis"];
    if (b.is_string()) {
      if (b.get<std::string>() != "bell") fail("basis", "expected \"bell\" or a generalized-basis object");
    } else if (b.is_object()) {
      reject_unknown(b, "basis.", {"kind", "alpha", "beta_mix"});
      for (const char* key : {"kind", "alpha", "beta_mix"})
        if (!b.contains(key)) fail(std::string("basis.") + key, "missing required key");
      if (text(b, "kind", "basis.kind") != "generalized") fail("basis.kind", "expected \"generalized\"");
      c.generalized = make_generalized_basis(number(b, "alpha", "basis.alpha"), number(b, "beta_mix", "basis.beta_mix"));
    } else {
      fail("basis", "expected \"bell\" or a generalized-basis object");
    }
  }
  if (doc.contains("sweep")) {
    if (c.mode != Mode::sweep) fail("sweep", "only valid with mode \"sweep\"");
    c.sweep = parse_sweep(doc["sweep"]);
  }
  if (doc.contains("output_path")) c.output_path = text(doc, "output_path", "output_path");

  if (c.mode == Mode::sweep) {
    if (!c.sweep) fail("sweep", "missing required key for mode \"sweep\"");
    if (c.sweep->param == SweepParam::length && !c.theta_deg) fail("theta_deg", "missing required key");
  } else if (!c.theta_deg) {
    fail("theta_deg", "missing required key");
  }
  return c;
}

std::vector<double> sweep_grid(const SweepSpec& sweep) {
  std::vector<double> g(sweep.count);
  const double step = (sweep.to - sweep.from) / static_cast<double>(sweep.count - 1);
  for (std::size_t i = 0; i < sweep.count; ++i) g[i] = sweep.from + static_cast<double>(i) * step;
  g.front() = sweep.from;
  g.back() = sweep.to;
  return g;
}

}  // namespace geophase::cli
