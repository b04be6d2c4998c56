#pragma once

#include <string>
#include <variant>
#include <vector>

namespace polyweight::report {

/// One CSV cell. Doubles print as shortest round-trip decimals; -inf prints
/// as "-inf"; log-domain columns carry a `_log` suffix in their header.
using CsvValue = std::variant<long long, double, std::string, bool>;

std::string format_value(const CsvValue& v);

std::string csv_to_string(const std::vector<std::string>& header,
                          const std::vector<std::vector<CsvValue>>& rows);

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<CsvValue>>& rows);

/// Single-series line plot, self-contained SVG, byte-deterministic for fixed
/// input. Empty input produces empty axes.
std::string plot_to_string(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& x_label, const std::string& y_label);

void emit_plot(const std::string& path, const std::vector<double>& x,
               const std::vector<double>& y, const std::string& x_label,
               const std::string& y_label);

/// JSON mirror of a run: config echo, rows, per-column provenance
/// (computed | fitted | censored | config), pass/fail summary.
struct RunReport {
  int schema_version = 1;
  std::string command;
  std::string config_echo;
  std::vector<std::string> header;
  std::vector<std::string> provenance;
  std::vector<std::vector<CsvValue>> rows;
  std::vector<std::string> notes;
  bool all_pass = true;
  double wall_seconds = 0.0;

  std::string to_json() const;
};

}  // namespace polyweight::report
