// SPDX-License-Identifier: Apache-2.0
// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stfem/stfem.h"

namespace {

struct ConfigDeleter {
  void operator()(stfem_config* c) const { stfem_config_destroy(c); }
};
struct ReportDeleter {
  void operator()(stfem_report* r) const { stfem_report_destroy(r); }
};
using ConfigPtr = std::unique_ptr<stfem_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<stfem_report, ReportDeleter>;

int report_error(stfem_status status) {
  std::fprintf(stderr, "error (%s): %s\n", stfem_status_string(status),
               stfem_last_error());
  return 1;
}

// Options shared by study, run and energy: one flag per config key.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key = value configuration file");
    for (std::size_t i = 0; i < stfem_config_key_count(); ++i) {
      const std::string key = stfem_config_key(i);
      std::string dashed = key;
      for (char& ch : dashed) {
        if (ch == '_') ch = '-';
      }
      std::string names = "--" + dashed;
      if (dashed != key) names += ",--" + key;
      app->add_option_function<std::string>(
          names, [this, key](const std::string& v) { values[key] = v; },
          "override '" + key + "'");
    }
  }

  stfem_status build(ConfigPtr& out) const {
    stfem_config* raw = nullptr;
    stfem_status s = stfem_config_create(&raw);
    if (s != STFEM_OK) return s;
    out.reset(raw);
    if (!config_file.empty()) {
      s = stfem_config_load_file(raw, config_file.c_str());
      if (s != STFEM_OK) return s;
    }
    for (const auto& [key, value] : values) {
      s = stfem_config_set(raw, key.c_str(), value.c_str());
      if (s != STFEM_OK) return s;
    }
    return STFEM_OK;
  }
};

std::string format(const stfem_report* report, stfem_format fmt) {
  size_t needed = 0;
  if (stfem_report_format(report, fmt, nullptr, 0, &needed) != STFEM_OK) return {};
  std::vector<char> buf(needed);
  if (stfem_report_format(report, fmt, buf.data(), buf.size(), nullptr) != STFEM_OK) {
    return {};
  }
  return std::string(buf.data());
}

int cmd_study(const ConfigFlags& flags) {
  ConfigPtr config;
  stfem_status s = flags.build(config);
  if (s != STFEM_OK) return report_error(s);
  stfem_report* raw = nullptr;
  s = stfem_run_study(config.get(), &raw);
  ReportPtr report(raw);
  if (report) std::fputs(format(report.get(), STFEM_FORMAT_MARKDOWN).c_str(), stdout);
  if (s != STFEM_OK) return report_error(s);
  return 0;
}

int cmd_run(const ConfigFlags& flags, int level) {
  ConfigPtr config;
  stfem_status s = flags.build(config);
  if (s != STFEM_OK) return report_error(s);
  stfem_report* raw = nullptr;
  s = stfem_run_single(config.get(), level, &raw);
  if (s != STFEM_OK) return report_error(s);
  ReportPtr report(raw);
  double tau = 0.0, h = 0.0;
  stfem_report_level(report.get(), 0, nullptr, &tau, &h);
  std::printf("level %d  tau %.6e  h %.6e\n", level, tau, h);
  static const char* names[] = {"e0_linf", "e1_linf",     "e0_l2",
                                "e1_l2",   "energy_linf", "energy_l2"};
  std::printf("%-12s %-24s %-24s\n", "quantity", "unlifted", "lifted");
  for (int q = 0; q < 6; ++q) {
    double base = 0.0, lifted = 0.0;
    stfem_report_error(report.get(), 0, STFEM_UNLIFTED,
                       static_cast<stfem_quantity>(q), &base);
    stfem_report_error(report.get(), 0, STFEM_LIFTED,
                       static_cast<stfem_quantity>(q), &lifted);
    std::printf("%-12s %-24.17g %-24.17g\n", names[q], base, lifted);
  }
  return 0;
}

int cmd_energy(ConfigFlags flags) {
  if (!flags.values.count("problem")) flags.values["problem"] = "energy";
  ConfigPtr config;
  stfem_status s = flags.build(config);
  if (s != STFEM_OK) return report_error(s);
  stfem_energy_result r{};
  s = stfem_run_energy(config.get(), &r);
  if (s != STFEM_OK) return report_error(s);
  std::printf("steps %d\n", r.steps);
  std::printf("initial energy %.17g\n", r.initial_energy);
  std::printf("max relative drift (base)   %.6e\n", r.base_drift);
  std::printf("max relative drift (lifted) %.6e\n", r.lifted_drift);
  std::printf("max lifted/base mismatch at nodes %.6e\n", r.max_node_mismatch);
  return 0;
}

int cmd_tables(const std::string& prefix, const std::string& output) {
  stfem_report* raw = nullptr;
  stfem_status s = stfem_report_read(prefix.c_str(), &raw);
  if (s != STFEM_OK) return report_error(s);
  ReportPtr report(raw);
  const std::string md = format(report.get(), STFEM_FORMAT_MARKDOWN);
  if (output.empty()) {
    std::fputs(md.c_str(), stdout);
    return 0;
  }
  std::FILE* f = std::fopen(output.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "error: cannot open '%s' for writing\n", output.c_str());
    return 1;
  }
  const bool ok = std::fwrite(md.data(), 1, md.size(), f) == md.size();
  if (std::fclose(f) != 0 || !ok) {
    std::fprintf(stderr, "error: write to '%s' failed\n", output.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time finite element solver for the 2D wave equation"};
  app.set_version_flag("--version", std::string(stfem_version()));
  app.require_subcommand(1);

  ConfigFlags study_flags, run_flags, energy_flags;
  auto* study = app.add_subcommand("study", "convergence study over refinement levels");
  study_flags.attach(study);

  int level = 0;
  auto* run = app.add_subcommand("run", "errors of a single level");
  run_flags.attach(run);
  run->add_option("--level", level, "refinement level")->check(CLI::NonNegativeNumber);

  auto* energy = app.add_subcommand("energy", "energy drift for f = 0");
  energy_flags.attach(energy);

  std::string prefix, output;
  auto* tables = app.add_subcommand("tables", "render markdown from CSV tables");
  tables->add_option("--prefix", prefix, "prefix of <prefix>_{lifted,unlifted}.csv")
      ->required();
  tables->add_option("--output,-o", output, "markdown file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*study) return cmd_study(study_flags);
  if (*run) return cmd_run(run_flags, level);
  if (*energy) return cmd_energy(energy_flags);
  return cmd_tables(prefix, output);
}
