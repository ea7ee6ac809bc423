// Command-line front end: runs the experiments defined in evbc/experiments.hpp
// and renders CSV tables as SVG plots.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error.

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evbc/evbc.hpp"
#include "evbc/svg.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

evbc::RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = evbc::read_text_file(path);
  } catch (const evbc::Error& e) {
    throw evbc::ConfigError("--config", e.what());
  }
  return evbc::parse_config(text);
}

std::string output_path_or(const std::string& cli_out, const evbc::RunConfig& cfg,
                           const char* fallback) {
  if (!cli_out.empty()) return cli_out;
  if (!cfg.output_path.empty()) return cfg.output_path;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for an eigenvalue problem with "
               "eigenvalue-dependent boundary conditions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string dump_p_path;
  std::string dump_q_path;
  std::string plot_in;
  std::string plot_x;
  std::vector<std::string> plot_y;
  bool plot_log_y = false;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "config file (key = value)");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_path, "output path");
  };

  auto* ksweep = app.add_subcommand(
      "ksweep", "boundary-row eigenvalue expressions over a wavenumber range");
  add_common(ksweep, true);
  auto* stepstudy = app.add_subcommand(
      "stepstudy", "step-profile closeness vs. eigenvalue existence study");
  add_common(stepstudy, true);
  auto* refine = app.add_subcommand(
      "refine", "grid refinement study of the discrete spectrum");
  add_common(refine, true);
  auto* eig = app.add_subcommand("eig", "full discrete spectrum for one grid");
  add_common(eig, true);
  eig->add_option("--dump-p", dump_p_path, "also dump the bands of P as CSV");
  eig->add_option("--dump-q", dump_q_path, "also dump the diagonal of Q as CSV");
  auto* plot = app.add_subcommand("plot", "render a CSV table as an SVG plot");
  plot->add_option("--in", plot_in, "input CSV file");
  plot->add_option("--config", config_path,
                   "config whose output.path names the input CSV");
  plot->add_option("--x", plot_x, "x column name")->required();
  plot->add_option("--y", plot_y, "y column names (comma separated)")
      ->required()
      ->delimiter(',');
  plot->add_flag("--log-y", plot_log_y, "logarithmic y axis");
  plot->add_option("--out", out_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (plot->parsed()) {
      std::string in_path = plot_in;
      if (in_path.empty()) {
        if (config_path.empty())
          throw evbc::ConfigError("--in", "plot needs --in or --config");
        const evbc::RunConfig cfg = load_config(config_path);
        if (cfg.output_path.empty())
          throw evbc::ConfigError("output.path",
                                  "config names no table to plot");
        in_path = cfg.output_path;
      }
      const evbc::CsvTable table = evbc::read_csv_file(in_path);
      const std::string svg = evbc::emit_svg(table, plot_x, plot_y, plot_log_y);
      const std::string path = out_path.empty() ? "plot.svg" : out_path;
      evbc::write_text_file(path, svg);
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    const evbc::RunConfig cfg = load_config(config_path);
    evbc::CsvTable table;
    const char* fallback = "out.csv";
    if (ksweep->parsed()) {
      table = evbc::cmd_ksweep(cfg);
      fallback = "ksweep.csv";
    } else if (stepstudy->parsed()) {
      table = evbc::cmd_stepstudy(cfg);
      fallback = "stepstudy.csv";
    } else if (refine->parsed()) {
      table = evbc::cmd_refine(cfg);
      fallback = "refine.csv";
    } else if (eig->parsed()) {
      table = evbc::cmd_eig(cfg);  // validates k and M
      fallback = "eig.csv";
      if (!dump_p_path.empty() || !dump_q_path.empty()) {
        auto [P, Q] = evbc::assemble_pencil(cfg, *cfg.k_value, *cfg.M);
        if (!dump_p_path.empty())
          evbc::write_text_file(dump_p_path, evbc::band_table(P).to_string());
        if (!dump_q_path.empty())
          evbc::write_text_file(dump_q_path, evbc::band_table(Q).to_string());
      }
    }

    const std::string path = output_path_or(out_path, cfg, fallback);
    evbc::write_text_file(path, table.to_string());
    std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const evbc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const evbc::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const evbc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
