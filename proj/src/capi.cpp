// SPDX-License-Identifier: Apache-2.0
#include "stfem/stfem.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "stfem/error.hpp"
#include "stfem/study.hpp"

struct stfem_config {
  stfem::StudyConfig config;
};

struct stfem_report {
  stfem::ErrorReport report;
};

namespace {

thread_local std::string g_last_error;

stfem_status fail(stfem_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename F>
stfem_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const stfem::InvalidArgument& e) {
    return fail(STFEM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const stfem::RangeError& e) {
    return fail(STFEM_ERROR_RANGE, e.what());
  } catch (const stfem::LinearSolveError& e) {
    return fail(STFEM_ERROR_LINEAR_SOLVE, e.what());
  } catch (const stfem::SingularMatrixError& e) {
    return fail(STFEM_ERROR_SINGULAR, e.what());
  } catch (const stfem::IoError& e) {
    return fail(STFEM_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(STFEM_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(STFEM_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(STFEM_ERROR_INTERNAL, "unknown error");
  }
}

stfem_status copy_out(const std::string& text, char* buffer, size_t size,
                      size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buffer == nullptr && size == 0) return STFEM_OK;
  if (buffer == nullptr || size < text.size() + 1) {
    return fail(STFEM_ERROR_RANGE, "buffer too small");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return STFEM_OK;
}

bool to_quantity(stfem_quantity q, stfem::Quantity& out) {
  if (q < STFEM_E0_LINF || q > STFEM_ENERGY_L2) return false;
  out = stfem::kAllQuantities[static_cast<std::size_t>(q)];
  return true;
}

}  // namespace

extern "C" {

const char* stfem_version(void) { return "1.0.0"; }

const char* stfem_status_string(stfem_status status) {
  switch (status) {
    case STFEM_OK: return "ok";
    case STFEM_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case STFEM_ERROR_RANGE: return "out of range";
    case STFEM_ERROR_LINEAR_SOLVE: return "linear solve failed";
    case STFEM_ERROR_SINGULAR: return "singular matrix";
    case STFEM_ERROR_IO: return "i/o error";
    case STFEM_ERROR_LEVEL_FAILED: return "level failed";
    case STFEM_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* stfem_last_error(void) { return g_last_error.c_str(); }

stfem_status stfem_config_create(stfem_config** out) {
  if (!out) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new stfem_config{};
    return STFEM_OK;
  });
}

void stfem_config_destroy(stfem_config* config) { delete config; }

stfem_status stfem_config_set(stfem_config* config, const char* key,
                              const char* value) {
  if (!config || !key || !value) {
    return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    stfem::StudyConfig next = config->config;
    next.set(key, value);
    config->config = std::move(next);
    return STFEM_OK;
  });
}

stfem_status stfem_config_get(const stfem_config* config, const char* key,
                              char* buffer, size_t buffer_size, size_t* needed) {
  if (!config || !key) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    return copy_out(config->config.get(key), buffer, buffer_size, needed);
  });
}

stfem_status stfem_config_load_file(stfem_config* config, const char* path) {
  if (!config || !path) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    config->config = stfem::load_config(path, config->config);
    return STFEM_OK;
  });
}

size_t stfem_config_key_count(void) { return stfem::StudyConfig::keys().size(); }

const char* stfem_config_key(size_t index) {
  const auto& keys = stfem::StudyConfig::keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

stfem_status stfem_run_study(const stfem_config* config, stfem_report** out) {
  if (!config || !out) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* handle = new stfem_report{stfem::run_study(config->config)};
    *out = handle;
    if (!handle->report.failures.empty()) {
      std::string msg;
      for (const auto& f : handle->report.failures) {
        if (!msg.empty()) msg += "; ";
        msg += f.message;
      }
      return fail(STFEM_ERROR_LEVEL_FAILED, msg.c_str());
    }
    return STFEM_OK;
  });
}

stfem_status stfem_run_single(const stfem_config* config, int level,
                              stfem_report** out) {
  if (!config || !out) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    stfem::ErrorReport report;
    report.rows.push_back(stfem::run_level(config->config, level));
    const auto& c = config->config;
    report.title = "cGP(" + std::to_string(c.k) + ")-cG(" + std::to_string(c.r) +
                   "), problem " + c.problem + ", level " + std::to_string(level);
    if (!c.output_prefix.empty()) stfem::emit_tables(report, c.output_prefix);
    *out = new stfem_report{std::move(report)};
    return STFEM_OK;
  });
}

stfem_status stfem_run_energy(const stfem_config* config,
                              stfem_energy_result* out) {
  if (!config || !out) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const stfem::EnergyReport r = stfem::run_energy(config->config);
    out->steps = r.steps;
    out->initial_energy = r.initial_energy;
    out->base_drift = r.base_drift;
    out->lifted_drift = r.lifted_drift;
    const double scale = r.initial_energy > 0.0 ? r.initial_energy : 1.0;
    double mismatch = 0.0;
    for (std::size_t n = 0; n < r.base.size(); ++n) {
      mismatch = std::max(mismatch, std::abs(r.lifted[n] - r.base[n]) / scale);
    }
    out->max_node_mismatch = mismatch;
    return STFEM_OK;
  });
}

size_t stfem_report_level_count(const stfem_report* report) {
  return report ? report->report.rows.size() : 0;
}

stfem_status stfem_report_level(const stfem_report* report, size_t row,
                                int* level, double* tau, double* h) {
  if (!report) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null report");
  if (row >= report->report.rows.size()) {
    return fail(STFEM_ERROR_RANGE, "row out of range");
  }
  const auto& r = report->report.rows[row];
  if (level) *level = r.level;
  if (tau) *tau = r.tau;
  if (h) *h = r.h;
  return STFEM_OK;
}

stfem_status stfem_report_error(const stfem_report* report, size_t row,
                                stfem_solution solution,
                                stfem_quantity quantity, double* value) {
  if (!report || !value) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  stfem::Quantity q;
  if (!to_quantity(quantity, q)) {
    return fail(STFEM_ERROR_INVALID_ARGUMENT, "unknown quantity");
  }
  if (row >= report->report.rows.size()) {
    return fail(STFEM_ERROR_RANGE, "row out of range");
  }
  const auto& r = report->report.rows[row];
  *value = stfem::quantity(solution == STFEM_LIFTED ? r.lifted : r.unlifted, q);
  return STFEM_OK;
}

stfem_status stfem_report_eoc(const stfem_report* report, size_t row,
                              stfem_solution solution, stfem_quantity quantity,
                              double* value) {
  if (!report || !value) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  stfem::Quantity q;
  if (!to_quantity(quantity, q)) {
    return fail(STFEM_ERROR_INVALID_ARGUMENT, "unknown quantity");
  }
  if (row >= report->report.rows.size()) {
    return fail(STFEM_ERROR_RANGE, "row out of range");
  }
  return guarded([&] {
    *value = report->report.eoc_column(solution == STFEM_LIFTED, q)[row];
    return STFEM_OK;
  });
}

size_t stfem_report_failure_count(const stfem_report* report) {
  return report ? report->report.failures.size() : 0;
}

const char* stfem_report_failure(const stfem_report* report, size_t index) {
  if (!report || index >= report->report.failures.size()) return nullptr;
  return report->report.failures[index].message.c_str();
}

stfem_status stfem_report_write(const stfem_report* report, const char* prefix) {
  if (!report || !prefix) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    stfem::emit_tables(report->report, prefix);
    return STFEM_OK;
  });
}

stfem_status stfem_report_read(const char* prefix, stfem_report** out) {
  if (!prefix || !out) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new stfem_report{stfem::read_tables(prefix)};
    return STFEM_OK;
  });
}

stfem_status stfem_report_format(const stfem_report* report, stfem_format format,
                                 char* buffer, size_t buffer_size,
                                 size_t* needed) {
  if (!report) return fail(STFEM_ERROR_INVALID_ARGUMENT, "null report");
  return guarded([&] {
    std::string text;
    switch (format) {
      case STFEM_FORMAT_CSV_UNLIFTED:
        text = stfem::format_table(report->report, stfem::TableFormat::csv, false);
        break;
      case STFEM_FORMAT_CSV_LIFTED:
        text = stfem::format_table(report->report, stfem::TableFormat::csv, true);
        break;
      case STFEM_FORMAT_MARKDOWN:
        text = stfem::format_table(report->report, stfem::TableFormat::markdown);
        break;
      default:
        return fail(STFEM_ERROR_INVALID_ARGUMENT, "unknown format");
    }
    return copy_out(text, buffer, buffer_size, needed);
  });
}

void stfem_report_destroy(stfem_report* report) { delete report; }

}  // extern "C"
