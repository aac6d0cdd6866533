// qgdecoh command-line front end. Talks to the library through the C API only.
//
// Exit codes: 0 success, 1 usage or config error, 2 numeric failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgdecoh/qgdecoh.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct ConfigDeleter {
  void operator()(qgd_config* c) const { qgd_config_free(c); }
};
using ConfigPtr = std::unique_ptr<qgd_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { qgd_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

void check(qgd_status s) {
  if (s == QGD_OK) return;
  const int code = (s == QGD_ERR_NUMERIC || s == QGD_ERR_INTERNAL) ? kExitNumeric : kExitUsage;
  throw Failure(code, std::string(qgd_status_name(s)) + ": " + qgd_last_error());
}

struct GlobalOptions {
  std::string config_path;
  std::string preset;
  std::string csv_path;
  int precision = 0;  // 0: from config, default 17
};

ConfigPtr load_config(const GlobalOptions& g) {
  qgd_config* raw = nullptr;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw Failure(kExitUsage, "cannot open config file '" + g.config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    const std::string base = std::filesystem::path(g.config_path).parent_path().string();
    check(qgd_config_parse(text.str().c_str(), base.c_str(), &raw));
    ConfigPtr cfg(raw);
    if (!g.preset.empty()) check(qgd_config_set(cfg.get(), "", "preset", g.preset.c_str()));
    return cfg;
  }
  if (g.preset.empty())
    throw Failure(kExitUsage, "no configuration: pass --config <path> or --preset <name>");
  check(qgd_config_preset(g.preset.c_str(), &raw));
  return ConfigPtr(raw);
}

void set_if(qgd_config* cfg, const char* section, const char* key,
            const std::optional<std::string>& value) {
  if (value) check(qgd_config_set(cfg, section, key, value->c_str()));
}

// CSV products go to --csv (or [output] csv) when given, else stdout.
void emit(const GlobalOptions& g, const qgd_config* cfg, const char* text) {
  std::string path = g.csv_path;
  if (path.empty() && qgd_config_csv_path(cfg)) path = qgd_config_csv_path(cfg);
  if (path.empty()) {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure(kExitUsage, "cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-gravity-inspired spatial decoherence: rates, contrast, bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Experiment config file");
  app.add_option("--preset", g.preset, "Named preset (kovachy2015)");
  app.add_option("--csv", g.csv_path, "Write CSV output to this path");
  app.add_option("--precision", g.precision, "Significant digits (17 = shortest round trip)")
      ->check(CLI::Range(1, 17));

  auto* gamma_cmd = app.add_subcommand("gamma", "Print gamma_QG, sigma and the validity product");

  int traj_points = 201;
  auto* traj_cmd = app.add_subcommand("trajectory", "Emit d(t) samples");
  traj_cmd->add_option("--points", traj_points, "Number of samples")->check(CLI::PositiveNumber);

  std::optional<std::string> initial_coherence;
  auto* contrast_cmd = app.add_subcommand("contrast", "Predict the interference contrast");
  contrast_cmd->add_option("--initial-coherence", initial_coherence, "<x|rho0|x'>, default 0.5");

  std::optional<std::string> measured;
  std::optional<std::string> attribution;
  auto* bound_cmd = app.add_subcommand("bound", "Invert a measured contrast into a bound");
  bound_cmd->add_option("--contrast", measured, "Measured contrast in (0, 1]");
  bound_cmd->add_option("--initial-coherence", initial_coherence, "<x|rho0|x'>, default 0.5");
  bound_cmd->add_option("--attribution", attribution, "Fraction of loss blamed on the kernel");

  int evolve_points = 201;
  auto* evolve_cmd = app.add_subcommand("evolve", "Coherence time series as CSV");
  evolve_cmd->add_option("--points", evolve_points, "Number of output times")
      ->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--initial-coherence", initial_coherence, "<x|rho0|x'>, default 0.5");

  std::string axis;
  std::vector<double> values;
  auto* scan_cmd = app.add_subcommand("scan", "Parameter scan as CSV");
  scan_cmd->add_option("--axis", axis, "d_max_m | half_time_s | species_mass_amu | density_fraction")
      ->required();
  scan_cmd->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  scan_cmd->add_option("--initial-coherence", initial_coherence, "<x|rho0|x'>, default 0.5");

  int kernel_points = 101;
  double kernel_max = 0.0;
  auto* kernel_cmd = app.add_subcommand("kernel", "Emit D(dx) samples");
  kernel_cmd->add_option("--points", kernel_points, "Number of samples")->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--max-separation", kernel_max,
                         "Largest separation in m (default: trajectory peak)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    ConfigPtr cfg = load_config(g);
    set_if(cfg.get(), "measurement", "initial_coherence", initial_coherence);
    char* out = nullptr;

    if (*gamma_cmd) {
      check(qgd_report_gamma(cfg.get(), g.precision, &out));
      CString text(out);
      emit(g, cfg.get(), text.get());
    } else if (*traj_cmd) {
      check(qgd_report_trajectory(cfg.get(), traj_points, g.precision, &out));
      CString text(out);
      emit(g, cfg.get(), text.get());
    } else if (*contrast_cmd) {
      check(qgd_report_contrast(cfg.get(), g.precision, &out));
      CString text(out);
      emit(g, cfg.get(), text.get());
    } else if (*bound_cmd) {
      set_if(cfg.get(), "measurement", "contrast", measured);
      set_if(cfg.get(), "measurement", "attribution_fraction", attribution);
      char* csv = nullptr;
      check(qgd_report_bound(cfg.get(), g.precision, &out, &csv, nullptr));
      CString table(out);
      CString csv_text(csv);
      std::fputs(table.get(), stdout);
      std::string path = g.csv_path;
      if (path.empty() && qgd_config_csv_path(cfg.get())) path = qgd_config_csv_path(cfg.get());
      if (!path.empty()) emit(g, cfg.get(), csv_text.get());
    } else if (*evolve_cmd) {
      check(qgd_report_evolve(cfg.get(), evolve_points, g.precision, &out));
      CString text(out);
      emit(g, cfg.get(), text.get());
    } else if (*scan_cmd) {
      check(qgd_report_scan(cfg.get(), axis.c_str(), values.data(), values.size(), g.precision,
                            &out));
      CString text(out);
      emit(g, cfg.get(), text.get());
    } else if (*kernel_cmd) {
      check(qgd_report_kernel(cfg.get(), kernel_max, kernel_points, g.precision, &out));
      CString text(out);
      emit(g, cfg.get(), text.get());
    }
  } catch (const Failure& f) {
    std::cerr << "qgdecoh: " << f.message() << '\n';
    return f.code();
  }
  return kExitOk;
}
