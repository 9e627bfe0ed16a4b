// SPDX-License-Identifier: Apache-2.0
#include "stfem/study.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "stfem/error.hpp"
#include "stfem/fe_space.hpp"
#include "stfem/lifting.hpp"
#include "stfem/problems.hpp"

namespace stfem {

namespace {

constexpr int kMaxLevels = 20;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("config: '" + std::string(key) +
                          "' expects an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("config: '" + std::string(key) +
                          "' expects a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string format_eoc(double v) {
  if (!std::isfinite(v)) return "--";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* const kCsvHeader =
    "level,tau,h,e0_linf,eoc,e1_linf,eoc,e0_l2,eoc,e1_l2,eoc,energy_linf,eoc,"
    "energy_l2,eoc";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

const std::vector<std::string>& StudyConfig::keys() {
  static const std::vector<std::string> names = {
      "problem",       "k",           "r",           "levels",
      "refine_mode",   "n0",          "mesh_level0", "samples_per_slab",
      "time_quad_pts", "initial_mode", "cg_tol",     "cg_max_iter",
      "output_prefix"};
  return names;
}

void StudyConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "problem") {
    problem = std::string(trim(value));
  } else if (key == "k") {
    k = parse_int(key, value);
  } else if (key == "r") {
    r = parse_int(key, value);
  } else if (key == "levels") {
    levels = parse_int(key, value);
  } else if (key == "refine_mode") {
    const auto v = trim(value);
    if (v == "time_only") {
      refine_mode = RefineMode::time_only;
    } else if (v == "spacetime") {
      refine_mode = RefineMode::spacetime;
    } else {
      throw InvalidArgument("config: refine_mode must be time_only or spacetime");
    }
  } else if (key == "n0") {
    n0 = parse_int(key, value);
  } else if (key == "mesh_level0") {
    mesh_level0 = parse_int(key, value);
  } else if (key == "samples_per_slab") {
    samples_per_slab = parse_int(key, value);
  } else if (key == "time_quad_pts") {
    time_quad_pts = parse_int(key, value);
  } else if (key == "initial_mode") {
    const auto v = trim(value);
    if (v == "ritz") {
      initial_mode = InitialMode::ritz;
    } else if (v == "interpolate") {
      initial_mode = InitialMode::interpolate;
    } else {
      throw InvalidArgument("config: initial_mode must be ritz or interpolate");
    }
  } else if (key == "cg_tol") {
    cg_tol = parse_double(key, value);
  } else if (key == "cg_max_iter") {
    cg_max_iter = parse_int(key, value);
  } else if (key == "output_prefix") {
    output_prefix = std::string(trim(value));
  } else {
    throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
  }
}

std::string StudyConfig::get(std::string_view key) const {
  if (key == "problem") return problem;
  if (key == "k") return std::to_string(k);
  if (key == "r") return std::to_string(r);
  if (key == "levels") return std::to_string(levels);
  if (key == "refine_mode") {
    return refine_mode == RefineMode::spacetime ? "spacetime" : "time_only";
  }
  if (key == "n0") return std::to_string(n0);
  if (key == "mesh_level0") return std::to_string(mesh_level0);
  if (key == "samples_per_slab") return std::to_string(samples_per_slab);
  if (key == "time_quad_pts") return std::to_string(time_quad_pts);
  if (key == "initial_mode") {
    return initial_mode == InitialMode::ritz ? "ritz" : "interpolate";
  }
  if (key == "cg_tol") return format_g17(cg_tol);
  if (key == "cg_max_iter") return std::to_string(cg_max_iter);
  if (key == "output_prefix") return output_prefix;
  throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
}

void StudyConfig::validate() const {
  problem_by_id(problem);
  if (k < 1) throw InvalidArgument("config: k must be >= 1");
  if (r < 1) throw InvalidArgument("config: r must be >= 1");
  if (levels < 1 || levels > kMaxLevels) {
    throw InvalidArgument("config: levels must be in [1, 20]");
  }
  if (n0 < 1) throw InvalidArgument("config: n0 must be >= 1");
  if (mesh_level0 < 0) throw InvalidArgument("config: mesh_level0 must be >= 0");
  if (samples_per_slab < 1) {
    throw InvalidArgument("config: samples_per_slab must be >= 1");
  }
  if (time_quad_pts != -1 && time_quad_pts < k + 2) {
    throw InvalidArgument("config: time_quad_pts must be -1 or >= k + 2");
  }
  if (!(cg_tol > 0.0)) throw InvalidArgument("config: cg_tol must be > 0");
  if (cg_max_iter == 0 || cg_max_iter < -1) {
    throw InvalidArgument("config: cg_max_iter must be -1 or positive");
  }
  if (static_cast<long long>(n0) << (levels - 1) >
      std::numeric_limits<int>::max()) {
    throw InvalidArgument("config: n0 * 2^(levels-1) overflows");
  }
}

StudyConfig load_config(const std::string& path, StudyConfig base) {
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) +
                            ": expected key = value");
    }
    try {
      base.set(view.substr(0, eq), view.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

double quantity(const ErrorNorms& norms, Quantity q) {
  return quantity(const_cast<ErrorNorms&>(norms), q);
}

double& quantity(ErrorNorms& norms, Quantity q) {
  switch (q) {
    case Quantity::e0_linf: return norms.e0_linf;
    case Quantity::e1_linf: return norms.e1_linf;
    case Quantity::e0_l2: return norms.e0_l2;
    case Quantity::e1_l2: return norms.e1_l2;
    case Quantity::energy_linf: return norms.energy_linf;
    case Quantity::energy_l2: return norms.energy_l2;
  }
  throw InvalidArgument("unknown quantity");
}

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::e0_linf: return "e0_linf";
    case Quantity::e1_linf: return "e1_linf";
    case Quantity::e0_l2: return "e0_l2";
    case Quantity::e1_l2: return "e1_l2";
    case Quantity::energy_linf: return "energy_linf";
    case Quantity::energy_l2: return "energy_l2";
  }
  throw InvalidArgument("unknown quantity");
}

std::vector<double> ErrorReport::eoc_column(bool lifted, Quantity q) const {
  std::vector<double> out(rows.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].level != rows[i - 1].level + 1) continue;
    const ErrorNorms& a = lifted ? rows[i - 1].lifted : rows[i - 1].unlifted;
    const ErrorNorms& b = lifted ? rows[i].lifted : rows[i].unlifted;
    const double pair[2] = {quantity(a, q), quantity(b, q)};
    out[i] = eoc(pair)[0];
  }
  return out;
}

LevelResult run_level(const StudyConfig& config, int level) {
  config.validate();
  if (level < 0 || level > kMaxLevels) {
    throw RangeError("run_level: level " + std::to_string(level) + " out of range");
  }
  const WaveProblem problem = problem_by_id(config.problem);
  auto space = std::make_shared<const FeSpace>(
      unit_square_mesh(config.mesh_level(level)), config.r);
  const MolSystem system = make_system(space, problem, config.initial_mode,
                                       config.cg_tol, config.cg_max_iter);
  const TimePartition partition = TimePartition::uniform(
      problem.final_time, config.steps(level), config.k);
  const LiftedTrajectory lifted = lift(integrate(system, partition), system);

  const SpaceTimeField exact = exact_field(problem);
  ErrorOptions opts;
  opts.samples_per_slab = config.samples_per_slab;
  opts.time_quad_pts = config.time_quad_pts;

  LevelResult out;
  out.level = level;
  out.tau = partition.tau(1);
  out.h = space->mesh().diameter();
  out.unlifted = error_norms(TrajectoryView(lifted.base()), *space, exact, opts);
  out.lifted = error_norms(TrajectoryView(lifted), *space, exact, opts);
  return out;
}

ErrorReport run_study(const StudyConfig& config) {
  config.validate();
  ErrorReport report;
  report.title = "cGP(" + std::to_string(config.k) + ")-cG(" +
                 std::to_string(config.r) + "), problem " + config.problem;
  for (int level = 0; level < config.levels; ++level) {
    try {
      report.rows.push_back(run_level(config, level));
    } catch (const std::exception& e) {
      report.failures.push_back(
          {level, "level " + std::to_string(level) + ": " + e.what()});
    }
  }
  if (!config.output_prefix.empty()) emit_tables(report, config.output_prefix);
  return report;
}

EnergyReport run_energy(const StudyConfig& config) {
  config.validate();
  if (config.problem != "energy") {
    throw InvalidArgument("run_energy: requires problem 'energy' (f = 0), got '" +
                          config.problem + "'");
  }
  const WaveProblem problem = problem_by_id(config.problem);
  auto space = std::make_shared<const FeSpace>(
      unit_square_mesh(config.mesh_level0), config.r);
  const MolSystem system = make_system(space, problem, config.initial_mode,
                                       config.cg_tol, config.cg_max_iter);
  const TimePartition partition =
      TimePartition::uniform(problem.final_time, config.n0, config.k);
  const LiftedTrajectory lifted = lift(integrate(system, partition), system);

  EnergyReport out;
  out.steps = partition.slab_count();
  for (int n = 0; n <= out.steps; ++n) {
    out.base.push_back(discrete_energy(lifted.base().at_grid(n), system));
    const int slab = n == 0 ? 1 : n;
    const double t = n == 0 ? partition.start(1) : partition.end(n);
    out.lifted.push_back(
        discrete_energy(lifted_eval_on_slab(lifted, slab, t), system));
  }
  out.initial_energy = out.base.front();
  const double scale = out.initial_energy > 0.0 ? out.initial_energy : 1.0;
  for (int n = 0; n <= out.steps; ++n) {
    out.base_drift =
        std::max(out.base_drift, std::abs(out.base[n] - out.initial_energy) / scale);
    out.lifted_drift = std::max(
        out.lifted_drift, std::abs(out.lifted[n] - out.initial_energy) / scale);
  }
  return out;
}

namespace {

std::string csv_table(const ErrorReport& report, bool lifted) {
  std::vector<std::vector<double>> eocs;
  for (Quantity q : kAllQuantities) eocs.push_back(report.eoc_column(lifted, q));
  std::string out = kCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const LevelResult& row = report.rows[i];
    const ErrorNorms& norms = lifted ? row.lifted : row.unlifted;
    out += std::to_string(row.level) + ',' + format_g17(row.tau) + ',' +
           format_g17(row.h);
    for (std::size_t q = 0; q < kAllQuantities.size(); ++q) {
      out += ',' + format_g17(quantity(norms, kAllQuantities[q])) + ',';
      if (std::isfinite(eocs[q][i])) out += format_g17(eocs[q][i]);
    }
    out += '\n';
  }
  return out;
}

// One table per solution kind with a two-row header: the first row names the
// error component, the second the norm.
std::string markdown_block(const ErrorReport& report, bool lifted) {
  const char* e0 = lifted ? "ẽ⁰" : "e⁰";
  const char* e1 = lifted ? "ẽ¹" : "e¹";
  const char* en = lifted ? "⦀Ẽ⦀" : "⦀E⦀";
  std::string out;
  out += std::string("### ") + (lifted ? "Lifted" : "Unlifted") + " solution\n\n";
  out += "| τ | h | ";
  for (const char* name : {e0, e1, en}) {
    out += std::string(name) + " | | | | ";
  }
  out.pop_back();
  out += "\n|";
  for (int c = 0; c < 14; ++c) out += c < 2 ? ":--|" : "--:|";
  out += "\n| | | L∞(L²) | EOC | L²(L²) | EOC | L∞(L²) | EOC | L²(L²) | EOC "
         "| L∞ | EOC | L² | EOC |\n";

  const Quantity order[6] = {Quantity::e0_linf,     Quantity::e0_l2,
                             Quantity::e1_linf,     Quantity::e1_l2,
                             Quantity::energy_linf, Quantity::energy_l2};
  std::vector<std::vector<double>> eocs;
  for (Quantity q : order) eocs.push_back(report.eoc_column(lifted, q));
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const LevelResult& row = report.rows[i];
    const ErrorNorms& norms = lifted ? row.lifted : row.unlifted;
    out += "| " + format_sci(row.tau) + " | " + format_sci(row.h) + " |";
    for (int q = 0; q < 6; ++q) {
      out += " " + format_sci(quantity(norms, order[q])) + " | " +
             format_eoc(eocs[q][i]) + " |";
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::string format_table(const ErrorReport& report, TableFormat format,
                         bool lifted) {
  if (format == TableFormat::csv) return csv_table(report, lifted);
  std::string out = "# " + (report.title.empty() ? "Error table" : report.title) +
                    "\n\n";
  out += markdown_block(report, false);
  out += '\n';
  out += markdown_block(report, true);
  if (!report.failures.empty()) {
    out += "\nFailed levels:\n\n";
    for (const LevelFailure& f : report.failures) out += "- " + f.message + '\n';
  }
  return out;
}

void emit_tables(const ErrorReport& report, const std::string& prefix) {
  if (prefix.empty()) throw InvalidArgument("emit_tables: empty output prefix");
  write_file(prefix + "_unlifted.csv", format_table(report, TableFormat::csv, false));
  write_file(prefix + "_lifted.csv", format_table(report, TableFormat::csv, true));
  write_file(prefix + ".md", format_table(report, TableFormat::markdown));
}

std::vector<LevelResult> parse_csv(const std::string& text, bool lifted) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw InvalidArgument("parse_csv: missing or unexpected header");
  }
  std::vector<LevelResult> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != 15) {
      throw InvalidArgument("parse_csv: line " + std::to_string(lineno) +
                            " has " + std::to_string(fields.size()) +
                            " fields, expected 15");
    }
    LevelResult row;
    row.level = parse_int("level", fields[0]);
    row.tau = parse_double("tau", fields[1]);
    row.h = parse_double("h", fields[2]);
    ErrorNorms& norms = lifted ? row.lifted : row.unlifted;
    for (std::size_t q = 0; q < kAllQuantities.size(); ++q) {
      quantity(norms, kAllQuantities[q]) =
          parse_double(quantity_name(kAllQuantities[q]), fields[3 + 2 * q]);
    }
    rows.push_back(row);
  }
  return rows;
}

ErrorReport read_tables(const std::string& prefix) {
  std::vector<LevelResult> base = parse_csv(read_file(prefix + "_unlifted.csv"), false);
  const std::vector<LevelResult> lifted =
      parse_csv(read_file(prefix + "_lifted.csv"), true);
  if (base.size() != lifted.size()) {
    throw InvalidArgument("read_tables: lifted and unlifted tables differ in length");
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i].level != lifted[i].level || base[i].tau != lifted[i].tau ||
        base[i].h != lifted[i].h) {
      throw InvalidArgument("read_tables: row " + std::to_string(i) +
                            " differs between lifted and unlifted tables");
    }
    base[i].lifted = lifted[i].lifted;
  }
  ErrorReport report;
  report.rows = std::move(base);
  return report;
}

}  // namespace stfem
