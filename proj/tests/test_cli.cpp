#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "geophase/cli/config.hpp"
#include "geophase/cli/runner.hpp"

using namespace geophase;
using namespace geophase::cli;

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigurationError& e) {
    return e.what();
  }
  return {};
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("geophase_cli_" + std::to_string(std::rand()) + "_" +
                                       std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_binary(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string("\"") + GEOPHASE_CLI_PATH + "\" " + args + " > \"" + stdout_file.string() +
                          "\" 2>&1";
  const int rc = std::system(cmd.c_str());
#if defined(WEXITSTATUS)
  return WEXITSTATUS(rc);
#else
  return rc;
#endif
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, sep);) out.push_back(f);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config defaults") {
    const RunConfig c = parse_config(R"({"mode":"single","theta_deg":60})");
    CHECK(c.mode == Mode::single);
    CHECK(*c.theta_deg == 60.0);
    CHECK(c.kappa == 1.0);
    CHECK(c.length == doctest::Approx(400 * kPi));
    CHECK(c.n_steps == 0);
    CHECK(c.band == Band::minus);
    CHECK(c.bell_sign == BellSign::plus);
    CHECK_FALSE(c.counter_rotate_a);
    CHECK_FALSE(c.generalized);
    CHECK_FALSE(c.output_path);
  }

  TEST_CASE("config errors name the key") {
    CHECK(config_error(R"({"mode":"pair"})").find("'theta_deg'") != std::string::npos);
    CHECK(config_error(R"({"mode":"pair","theta_deg":60,"thetta":1})").find("'thetta'") != std::string::npos);
    CHECK(config_error(R"({"mode":"pair","theta_deg":95})").find("'theta_deg'") != std::string::npos);
    CHECK(config_error(R"({"mode":"pair","theta_deg":60,"kappa":-1})").find("'kappa'") != std::string::npos);
    CHECK(config_error(R"({"mode":"pair","theta_deg":60,"n_steps":5000})").find("'n_steps'") != std::string::npos);
    CHECK(config_error(R"({"mode":"pair","theta_deg":60,"bell_sign":"x"})").find("'bell_sign'") != std::string::npos);
    CHECK(config_error(R"({"mode":"pair","theta_deg":60,"basis":{"kind":"generalized","alpha":0.3}})")
              .find("'basis.beta_mix'") != std::string::npos);
    CHECK(config_error(R"({"mode":"single","theta_deg":60,"sweep":{}})").find("'sweep'") != std::string::npos);
    CHECK(config_error(R"({"mode":"sweep","sweep":{"param":"theta_deg","from":10,"to":80,"count":1}})")
              .find("'sweep.count'") != std::string::npos);
    CHECK(config_error(R"({"mode":"sweep","sweep":{"param":"length","from":10,"to":80,"count":3}})")
              .find("'theta_deg'") != std::string::npos);
    CHECK(config_error(R"({"mode":"sweep","sweep":{"param":"theta_deg","from":10,"to":80,"count":3,"x":0}})")
              .find("'sweep.x'") != std::string::npos);
    CHECK(config_error(R"({"mode":"single","theta_deg":"60"})").find("'theta_deg'") != std::string::npos);
    CHECK(config_error("{\"mode\":").find("malformed JSON") != std::string::npos);
    CHECK(config_error("[1,2]").find("'$'") != std::string::npos);
    CHECK(config_error(R"({"mode":"batch","theta_deg":1})").find("'mode'") != std::string::npos);
  }

  TEST_CASE("full config") {
    const RunConfig c = parse_config(R"({
      "mode": "pair", "theta_deg": 41.4, "kappa": 2.0, "length": 100.0, "n_steps": 200000,
      "band": "plus", "bell_sign": "-", "counter_rotate_a": true,
      "basis": {"kind": "generalized", "alpha": 0.3, "beta_mix": 0.5},
      "output_path": "out.csv"})");
    CHECK(c.kappa == 2.0);
    CHECK(c.n_steps == 200000);
    CHECK(c.band == Band::plus);
    CHECK(c.bell_sign == BellSign::minus);
    CHECK(c.counter_rotate_a);
    REQUIRE(c.generalized);
    CHECK(c.generalized->alpha == 0.3);
    CHECK(*c.output_path == "out.csv");
  }

  TEST_CASE("sweep grid") {
    const RunConfig c = parse_config(R"({"mode":"sweep","sweep":{"param":"theta_deg","from":10,"to":80,"count":8}})");
    const auto g = sweep_grid(*c.sweep);
    REQUIRE(g.size() == 8);
    CHECK(g.front() == 10.0);
    CHECK(g.back() == 80.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(10.0 + 10.0 * i));
    const auto odd = sweep_grid({SweepParam::length, 0.1, 0.7, 7});
    CHECK(odd.back() == 0.7);
  }

  TEST_CASE("csv and plot formatting") {
    RunRecord r;
    r.theta_deg = 60;
    r.omega_sr = kPi;
    r.gamma_wilson = 1.0 / 3.0;
    r.gamma_dynamics = std::numeric_limits<double>::quiet_NaN();
    r.status = RunStatus::not_adiabatic;
    const auto csv = lines(format_csv({r}));
    REQUIRE(csv.size() == 2);
    CHECK(csv[0] == "theta_deg,omega_sr,gamma_wilson,gamma_dynamics,gamma_analytic,fidelity_eq4,overlap_initial,"
                    "energy_residual_max,norm_drift,status");
    const auto f = split(csv[1], ',');
    REQUIRE(f.size() == 10);
    CHECK(f[0] == "60");
    CHECK(f[1] == "3.14159265359");
    CHECK(f[2] == "0.333333333333");
    CHECK(f[3] == "nan");
    CHECK(f[9] == "not_adiabatic");

    const auto plot = lines(emit_plot_data({r, r}));
    REQUIRE(plot.size() == 3);
    CHECK(plot[0].front() == '#');
    const auto cols = split(plot[1], ' ');
    REQUIRE(cols.size() == 10);
    CHECK(cols[2] == "0.333333333333");
    CHECK(cols[9] == "not_adiabatic");
  }

  TEST_CASE("exit codes from records") {
    RunRecord ok, nad, bad;
    nad.status = RunStatus::not_adiabatic;
    bad.status = RunStatus::numerical_failure;
    CHECK(exit_code_for({ok, ok}) == 0);
    CHECK(exit_code_for({ok, nad}) == 0);
    CHECK(exit_code_for({ok, nad, bad}) == 2);
  }

  TEST_CASE("single run reports the cap phase") {
    const RunConfig c = parse_config(R"({"mode":"single","theta_deg":60})");
    const auto rec = execute(c);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].gamma_wilson == doctest::Approx(kPi / 2).epsilon(1e-4));
    CHECK(rec[0].gamma_analytic == doctest::Approx(kPi / 2).epsilon(1e-6));
    CHECK(rec[0].omega_sr == doctest::Approx(kPi).epsilon(1e-6));
    std::ostringstream out;
    write_summary(c, rec, out);
    CHECK(out.str().find("Gamma (Wilson loop)        1.570796") != std::string::npos);
    CHECK(out.str().find("3.141593 sr") != std::string::npos);
  }

  TEST_CASE("pair run reports orthogonality") {
    const RunConfig c = parse_config(R"({"mode":"pair","theta_deg":60})");
    const auto rec = execute(c);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].overlap_initial < 0.05);
    CHECK(rec[0].overlap_partner > 0.995);
    std::ostringstream out;
    write_summary(c, rec, out);
    CHECK(out.str().find("|<Phi-|out>|") != std::string::npos);
  }

  TEST_CASE("theta sweep keeps grid order") {
    const RunConfig c = parse_config(R"({"mode":"sweep","sweep":{"param":"theta_deg","from":10,"to":80,"count":8}})");
    const auto rec = execute(c);
    REQUIRE(rec.size() == 8);
    for (std::size_t i = 0; i < rec.size(); ++i) CHECK(rec[i].theta_deg == doctest::Approx(10.0 + 10.0 * i));
    for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec[i].gamma_analytic > rec[i - 1].gamma_analytic);
    CHECK(lines(format_csv(rec)).size() == 9);
    CHECK(lines(emit_plot_data(rec)).size() == 9);
  }

  TEST_CASE("binary: success, determinism and artifacts") {
    Scratch s;
    const fs::path cfg = s.write("sweep.json",
                                 R"({"mode":"sweep","sweep":{"param":"length","from":400,"to":1200,"count":3},)"
                                 R"("theta_deg":60,"n_steps":400000})");
    const int a = run_binary("--config \"" + cfg.string() + "\" --out \"" + (s.dir / "a.csv").string() + "\" --plot \"" +
                                 (s.dir / "a.dat").string() + "\"",
                             s.dir / "a.txt");
    const int b = run_binary("--config \"" + cfg.string() + "\" --out \"" + (s.dir / "b.csv").string() + "\"",
                             s.dir / "b.txt");
    CHECK(a == 0);
    CHECK(b == 0);
    const std::string csv = slurp(s.dir / "a.csv");
    CHECK(csv == slurp(s.dir / "b.csv"));
    CHECK(lines(csv).size() == 4);
    CHECK(lines(slurp(s.dir / "a.dat")).size() == 4);
    CHECK(slurp(s.dir / "a.txt").find("sweep over length") != std::string::npos);

    // output_path in the config is honoured when --out is absent.
    const fs::path cfg2 = s.write("single.json", R"({"mode":"single","theta_deg":30,"output_path":")" +
                                                     (s.dir / "c.csv").generic_string() + "\"}");
    CHECK(run_binary("--config \"" + cfg2.string() + "\"", s.dir / "c.txt") == 0);
    CHECK(lines(slurp(s.dir / "c.csv")).size() == 2);
  }

  TEST_CASE("binary: configuration errors exit 1") {
    Scratch s;
    const fs::path cfg = s.write("bad.json", R"({"mode":"pair"})");
    CHECK(run_binary("--config \"" + cfg.string() + "\"", s.dir / "o.txt") == 1);
    CHECK(slurp(s.dir / "o.txt").find("theta_deg") != std::string::npos);
    CHECK(run_binary("--config \"" + (s.dir / "missing.json").string() + "\"", s.dir / "o2.txt") == 1);
    CHECK(run_binary("", s.dir / "o3.txt") != 0);
  }

  TEST_CASE("binary: numerical failure exits 2") {
    // kappa h ~ 1.26: RK4 loses norm far beyond 1e-6.
    Scratch s;
    const fs::path cfg = s.write("coarse.json", R"({"mode":"single","theta_deg":60,"length":125663.7,"n_steps":100000})");
    CHECK(run_binary("--config \"" + cfg.string() + "\"", s.dir / "o.txt") == 2);
    const std::string out = slurp(s.dir / "o.txt");
    CHECK(out.find("numerical_failure") != std::string::npos);
  }
}
