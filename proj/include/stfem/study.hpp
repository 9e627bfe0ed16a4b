// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_STUDY_HPP
#define STFEM_STUDY_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "stfem/analysis.hpp"
#include "stfem/cgp.hpp"

namespace stfem {

enum class RefineMode { time_only, spacetime };

/// Run configuration. Every key has a default; see keys() for the names used
/// by the key/value file format and the command line.
struct StudyConfig {
  std::string problem = "poly";
  int k = 2;
  int r = 2;
  int levels = 1;
  RefineMode refine_mode = RefineMode::time_only;
  int n0 = 10;
  int mesh_level0 = 0;
  int samples_per_slab = 1000;
  int time_quad_pts = -1;  // k + 3 when not set
  InitialMode initial_mode = InitialMode::ritz;
  double cg_tol = 1e-12;
  int cg_max_iter = -1;
  std::string output_prefix;

  static const std::vector<std::string>& keys();
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  void validate() const;

  int steps(int level) const { return n0 << level; }
  int mesh_level(int level) const {
    return mesh_level0 + (refine_mode == RefineMode::spacetime ? level : 0);
  }
};

/// Reads `key = value` lines ('#' starts a comment) on top of base.
StudyConfig load_config(const std::string& path, StudyConfig base = {});

enum class Quantity { e0_linf, e1_linf, e0_l2, e1_l2, energy_linf, energy_l2 };
inline constexpr std::array<Quantity, 6> kAllQuantities = {
    Quantity::e0_linf, Quantity::e1_linf,     Quantity::e0_l2,
    Quantity::e1_l2,   Quantity::energy_linf, Quantity::energy_l2};

double quantity(const ErrorNorms& norms, Quantity q);
double& quantity(ErrorNorms& norms, Quantity q);
std::string_view quantity_name(Quantity q);

struct LevelResult {
  int level = 0;
  double tau = 0.0;
  double h = 0.0;
  ErrorNorms unlifted;
  ErrorNorms lifted;
};

struct LevelFailure {
  int level;
  std::string message;
};

struct ErrorReport {
  std::string title;
  std::vector<LevelResult> rows;
  std::vector<LevelFailure> failures;

  /// EOC column aligned with rows; NaN on the first row, where the previous
  /// row is not the preceding level, or where an error is not positive.
  std::vector<double> eoc_column(bool lifted, Quantity q) const;
};

LevelResult run_level(const StudyConfig& config, int level);

/// Runs levels 0..levels-1. A failing level is recorded in
/// ErrorReport::failures and the remaining levels still run.
ErrorReport run_study(const StudyConfig& config);

struct EnergyReport {
  int steps = 0;
  double initial_energy = 0.0;
  std::vector<double> base;    // E at t_0..t_N
  std::vector<double> lifted;  // lifted solution at t_0..t_N
  double base_drift = 0.0;     // max_n |E_n - E_0| / E_0
  double lifted_drift = 0.0;
};

/// Energy history of a run with f = 0 (problem "energy"), on the mesh
/// mesh_level0 with n0 steps.
EnergyReport run_energy(const StudyConfig& config);

enum class TableFormat { csv, markdown };

/// CSV of one solution kind, or the markdown document with all tables.
std::string format_table(const ErrorReport& report, TableFormat format,
                         bool lifted = false);

/// Writes <prefix>_unlifted.csv, <prefix>_lifted.csv and <prefix>.md.
void emit_tables(const ErrorReport& report, const std::string& prefix);

/// Parses the CSV produced by format_table into rows (one solution kind).
std::vector<LevelResult> parse_csv(const std::string& text, bool lifted);

/// Reads the two CSV files written by emit_tables.
ErrorReport read_tables(const std::string& prefix);

}  // namespace stfem

#endif  // STFEM_STUDY_HPP
