// qkick: command-line front end for the driven two-level simulator.
//
//   qkick simulate     --preset fig2-0.1ps --out runs/kick
//   qkick sweep        --preset fig2-0.1ps --widths 0.1,0.5,1
//   qkick compare-kick --widths 10,3,1,0.3,0.1
//   qkick calibrate    --preset fig1-pi

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qkick/commands.hpp"
#include "qkick/run_config.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string preset;
  std::string method;
  std::string carrier;
  std::optional<std::string> widths;
  bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_widths) {
  cmd->add_option("--config", o.config_path, "run configuration file (key = value)");
  cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--preset", o.preset, "named scenario")
      ->check(CLI::IsMember(qkick::preset_names()));
  cmd->add_option("--method", o.method, "integrator")->check(CLI::IsMember({"magnus2", "rk4"}));
  cmd->add_option("--carrier", o.carrier, "carrier switch")->check(CLI::IsMember({"on", "off"}));
  cmd->add_flag("--dump-config", o.dump_config, "print the resolved configuration and exit");
  if (with_widths) {
    cmd->add_option("--widths", o.widths, "comma-separated pulse widths in ps");
  }
}

// preset, then config file, then explicit flags
qkick::RunConfig resolve(const CommonOptions& o, bool carrier_default) {
  qkick::RunConfig cfg;
  cfg.carrier = carrier_default;
  if (!o.preset.empty()) qkick::apply_preset(cfg, o.preset);
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw qkick::IoError("cannot read config " + o.config_path);
    qkick::apply_config(cfg, in);
  }
  if (!o.method.empty()) cfg.method = qkick::parse_method(o.method);
  if (!o.carrier.empty()) cfg.carrier = o.carrier == "on";
  if (o.widths) {
    try {
      cfg.widths_ps = qkick::config_detail::parse_list(*o.widths);
      for (double w : *cfg.widths_ps) qkick::config_detail::positive(w);
    } catch (const qkick::InvalidArgument& e) {
      throw qkick::ConfigError("--widths", 0, e.what());
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level simulator of single-qubit gates on a driven two-level system"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, sweep_opts, compare_opts, calibrate_opts;
  auto* simulate = app.add_subcommand("simulate", "evolve one scenario; write trajectory CSV and summary JSON");
  auto* sweep = app.add_subcommand("sweep", "repeat a scenario over pulse widths");
  auto* compare = app.add_subcommand("compare-kick", "distance of finite kicks from the ideal delta kick");
  auto* calibrate = app.add_subcommand("calibrate", "print amplitude, Rabi frequency and voltage for a pulse");
  add_common(simulate, simulate_opts, false);
  add_common(sweep, sweep_opts, true);
  add_common(compare, compare_opts, true);
  add_common(calibrate, calibrate_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qkick::exit_config;
  }

  CommonOptions* opts = simulate->parsed()  ? &simulate_opts
                        : sweep->parsed()   ? &sweep_opts
                        : compare->parsed() ? &compare_opts
                                            : &calibrate_opts;
  const bool carrier_default = !compare->parsed();

  qkick::RunConfig cfg;
  try {
    cfg = resolve(*opts, carrier_default);
  } catch (const qkick::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qkick::exit_io;
  } catch (const qkick::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qkick::exit_config;
  }

  if (opts->dump_config) {
    qkick::dump_config(cfg, std::cout);
    return qkick::exit_ok;
  }

  if (simulate->parsed()) return qkick::cmd_simulate(cfg, opts->out_dir, std::cout, std::cerr);
  if (sweep->parsed()) return qkick::cmd_sweep(cfg, opts->out_dir, std::cout, std::cerr);
  if (compare->parsed()) return qkick::cmd_compare_kick(cfg, opts->out_dir, std::cout, std::cerr);
  return qkick::cmd_calibrate(cfg, std::cout, std::cerr);
}
