#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include "qkick/commands.hpp"

namespace fs = std::filesystem;

namespace qkick {
namespace {

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("qkick_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RunConfig preset(const std::string& name, bool carrier = true) {
  RunConfig cfg;
  cfg.carrier = carrier;
  apply_preset(cfg, name);
  return cfg;
}

TEST(DefaultStride, Thresholds) {
  EXPECT_EQ(default_stride(10), 1u);
  EXPECT_EQ(default_stride(20000), 1u);
  EXPECT_EQ(default_stride(20001), 3u);
  EXPECT_EQ(default_stride(495'000), 50u);
}

TEST(Simulate, WritesTrajectoryAndSummary) {
  TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(preset("fig2-0.1ps"), dir.path(), out, err), exit_ok) << err.str();

  const auto rows = lines_of(slurp(dir.path() / "trajectory.csv"));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), trajectory_csv_header);
  const ScenarioConfig sc = to_scenario(preset("fig2-0.1ps"));
  EXPECT_EQ(rows.size(), sc.grid.steps() + 2);
  EXPECT_EQ(rows.back().substr(0, rows.back().find(',')), "1e-11");

  const auto j = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_NEAR(j["fidelity"].get<double>(), 0.9995, 0.002);
  EXPECT_EQ(j["fidelity"], j["fidelity_carrier_on"]);
  EXPECT_TRUE(j.contains("fidelity_carrier_off"));
  EXPECT_EQ(j["regime"], "diabatic");
  EXPECT_NEAR(j["peak_voltage_v"].get<double>(), 62.3e-3, 0.1e-3);
  EXPECT_EQ(j["inputs"]["width_s"].get<double>(), 0.1e-12);
  EXPECT_EQ(j["inputs"]["steps"].get<std::size_t>(), sc.grid.steps());
  EXPECT_NE(out.str().find("fidelity "), std::string::npos);
  for (const auto& e : fs::directory_iterator(dir.path())) {
    EXPECT_NE(e.path().extension(), ".tmp");
  }
}

TEST(Simulate, AdiabaticSummaryHasNoCarrierPair) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg = preset("fig1-pi");
  ASSERT_EQ(cmd_simulate(cfg, dir.path(), out, err), exit_ok) << err.str();
  const auto j = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_FALSE(j.contains("fidelity_carrier_off"));
  EXPECT_LT(j["final_sz"].get<double>(), -0.99);
  EXPECT_EQ(j["regime"], "adiabatic");
  const auto rows = lines_of(slurp(dir.path() / "trajectory.csv"));
  EXPECT_LE(rows.size(), 10002u);
  EXPECT_GT(rows.size(), 9000u);
}

TEST(Simulate, RotatingFrameCsvKeepsPopulations) {
  TempDir lab_dir, rot_dir;
  std::ostringstream out, err;
  RunConfig cfg = preset("fig2-1ps");
  ASSERT_EQ(cmd_simulate(cfg, lab_dir.path(), out, err), exit_ok);
  cfg.frame = Frame::rotating;
  ASSERT_EQ(cmd_simulate(cfg, rot_dir.path(), out, err), exit_ok);
  const auto lab = lines_of(slurp(lab_dir.path() / "trajectory.csv"));
  const auto rot = lines_of(slurp(rot_dir.path() / "trajectory.csv"));
  ASSERT_EQ(lab.size(), rot.size());
  auto column = [](const std::string& row, int c) {
    std::istringstream in(row);
    std::string cell;
    for (int i = 0; i <= c; ++i) std::getline(in, cell, ',');
    return std::stod(cell);
  };
  for (std::size_t i = 1; i < lab.size(); i += 97) {
    EXPECT_NEAR(column(lab[i], 7), column(rot[i], 7), 1e-12);
    EXPECT_NEAR(column(lab[i], 8), column(rot[i], 8), 1e-12);
  }
}

TEST(Simulate, ConfigErrorExitsTwo) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.width_ps = -1;
  EXPECT_EQ(cmd_simulate(cfg, dir.path(), out, err), exit_config);
  EXPECT_NE(err.str().find("width_ps"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(Simulate, ZeroWidthExitsTwo) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.width_ps = 0.0;
  EXPECT_EQ(cmd_simulate(cfg, dir.path(), out, err), exit_config);
  EXPECT_NE(err.str().find("width_ps"), std::string::npos);

  const fs::path conf = dir.path() / "zero.conf";
  std::ofstream(conf) << "# zero width\nwidth_ps = 0\n";
  const fs::path msg = dir.path() / "msg.txt";
  const std::string cmd = std::string(QKICK_CLI_PATH) + " simulate --config " + conf.string() +
                          " --out " + dir.path().string() + " 2>" + msg.string();
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), exit_config);
  EXPECT_NE(slurp(msg).find("line 2: width_ps"), std::string::npos) << slurp(msg);
}

TEST(Simulate, NumericalFailureExitsThreeAndWritesNothing) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg = preset("fig1-pi");
  cfg.method = Method::rk4;
  cfg.dt_ps = 20.0;
  EXPECT_EQ(cmd_simulate(cfg, dir.path(), out, err), exit_numerical);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(Simulate, UnwritableOutputExitsOne) {
  TempDir dir;
  const fs::path blocker = dir.path() / "file";
  std::ofstream(blocker) << "x";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(preset("fig2-0.1ps"), blocker / "sub", out, err), exit_io);
}

TEST(SweepCommand, TableMatchesRows) {
  TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(preset("fig2-0.1ps"), dir.path(), out, err), exit_ok) << err.str();
  const auto rows = lines_of(slurp(dir.path() / "table.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], sweep_csv_header);
  EXPECT_EQ(rows[1].substr(0, 4), "0.1,");
  EXPECT_EQ(rows[3].substr(0, 2), "1,");
  EXPECT_EQ(out.str(), slurp(dir.path() / "table.csv"));
}

TEST(SweepCommand, SingleWidthMatchesSimulate) {
  TempDir a, b;
  std::ostringstream out, err;
  RunConfig cfg = preset("fig2-0.5ps");
  cfg.widths_ps = std::vector<double>{0.5};
  ASSERT_EQ(cmd_sweep(cfg, a.path(), out, err), exit_ok);
  ASSERT_EQ(cmd_simulate(cfg, b.path(), out, err), exit_ok);
  const auto j = nlohmann::json::parse(slurp(b.path() / "summary.json"));
  const auto rows = lines_of(slurp(a.path() / "table.csv"));
  std::istringstream in(rows[1]);
  std::string cell;
  std::getline(in, cell, ',');
  std::getline(in, cell, ',');
  std::getline(in, cell, ',');
  EXPECT_EQ(std::stod(cell), j["fidelity"].get<double>());
}

TEST(SweepCommand, EmptyWidthsRejected) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg = preset("fig2-0.1ps");
  cfg.widths_ps = std::vector<double>{};
  EXPECT_EQ(cmd_sweep(cfg, dir.path(), out, err), exit_config);
}

TEST(CompareKick, DefaultTable) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.carrier = false;
  ASSERT_EQ(cmd_compare_kick(cfg, dir.path(), out, err), exit_ok) << err.str();
  const auto rows = lines_of(slurp(dir.path() / "table.csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], compare_csv_header);
  double last = 1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dev = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
    EXPECT_LT(dev, last);
    last = dev;
  }
}

TEST(CompareKick, ZeroAreaMatchesFreePrecession) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.carrier = false;
  apply_config_text(cfg, "area_rad = 0\n");
  ASSERT_EQ(cmd_compare_kick(cfg, dir.path(), out, err), exit_ok) << err.str();
  const auto rows = lines_of(slurp(dir.path() / "table.csv"));
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(std::stod(rows[i].substr(rows[i].rfind(',') + 1)), 1e-9);
  }
}

TEST(CompareKick, RejectsCarrierAndAmplitude) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig on;
  EXPECT_EQ(cmd_compare_kick(on, dir.path(), out, err), exit_config);
  RunConfig amp;
  amp.carrier = false;
  amp.area_rad.reset();
  amp.amplitude_v_per_m = 1e3;
  EXPECT_EQ(cmd_compare_kick(amp, dir.path(), out, err), exit_config);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(Calibrate, PiPulseNumbers) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_calibrate(preset("fig1-pi"), out, err), exit_ok);
  const std::string text = out.str();
  auto value = [&](const std::string& key) {
    const auto p = text.find(key + " = ");
    EXPECT_NE(p, std::string::npos) << key;
    return std::stod(text.substr(p + key.size() + 3));
  };
  EXPECT_NEAR(value("peak_rabi_frequency_mhz"), 12.265, 0.01);
  EXPECT_NEAR(value("amplitude_v_per_m"), 0.0270896, 1e-6);
  EXPECT_NEAR(value("peak_voltage_v") / value("pi_pulse_peak_voltage_v"), 1.0, 1e-12);
  EXPECT_NE(text.find("regime = adiabatic"), std::string::npos);
}

// End-to-end runs of the built executable.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(QKICK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_cli_to(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd =
      std::string(QKICK_CLI_PATH) + " " + args + " >" + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const std::string out = " --out " + dir.path().string();
  EXPECT_EQ(run_cli("calibrate --preset fig1-pi"), 0);
  EXPECT_EQ(run_cli("simulate --preset fig2-1ps" + out), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "summary.json"));
  EXPECT_EQ(run_cli("simulate --preset nope"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("simulate --config " + (dir.path() / "missing.conf").string()), 1);
  EXPECT_EQ(run_cli("compare-kick --carrier on" + out), 2);
  EXPECT_EQ(run_cli("sweep --widths 0.1,-1" + out), 2);

  const fs::path bad = dir.path() / "bad.conf";
  std::ofstream(bad) << "width_ps = 0.1\nwidth_ps = 0.2\n";
  EXPECT_EQ(run_cli("simulate --config " + bad.string() + out), 2);

  const fs::path coarse = dir.path() / "coarse.conf";
  std::ofstream(coarse) << "scenario = adiabatic\nmethod = rk4\ndt_ps = 20\n";
  const fs::path empty = dir.path() / "empty";
  EXPECT_EQ(run_cli("simulate --config " + coarse.string() + " --out " + empty.string()), 3);
  EXPECT_FALSE(fs::exists(empty / "summary.json"));
}

TEST(Cli, DumpConfigRoundTrip) {
  TempDir dir;
  const fs::path first = dir.path() / "first.conf";
  const fs::path second = dir.path() / "second.conf";
  ASSERT_EQ(run_cli_to("simulate --preset fig1-pihalf --method rk4 --carrier off --dump-config", first), 0);
  ASSERT_EQ(run_cli_to("simulate --config " + first.string() + " --dump-config", second), 0);
  EXPECT_EQ(slurp(first), slurp(second));
  RunConfig cfg;
  apply_config_text(cfg, slurp(first));
  EXPECT_EQ(cfg.method, Method::rk4);
  EXPECT_FALSE(cfg.carrier);
  EXPECT_EQ(*cfg.area_rad, pi / 2);
}

TEST(Cli, CompareKickDefaultsToCarrierOff) {
  TempDir dir;
  const fs::path dump = dir.path() / "dump.conf";
  ASSERT_EQ(run_cli_to("compare-kick --dump-config", dump), 0);
  EXPECT_NE(slurp(dump).find("carrier = off"), std::string::npos);
  ASSERT_EQ(run_cli_to("simulate --dump-config", dump), 0);
  EXPECT_NE(slurp(dump).find("carrier = on"), std::string::npos);
}

}  // namespace
}  // namespace qkick
