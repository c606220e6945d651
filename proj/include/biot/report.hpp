#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biot/config.hpp"
#include "biot/diagnostics.hpp"
#include "biot/metrics.hpp"

namespace biot {

/// "%.2e"; NaN (a failed cell) renders as "fail".
std::string format_value(double v);
/// "%.1f"; a missing rate renders as "-".
std::string format_rate(std::optional<double> r);
/// Shortest round-trippable form of a parameter such as kappa.
std::string format_param(double v);

void write_csv(const ErrorTable& table, std::ostream& os);
void write_markdown(const ErrorTable& table, std::ostream& os, const std::string& title = {});
void write_csv(const std::vector<DiagnosticReport>& reports, std::ostream& os);
void write_markdown(const std::vector<DiagnosticReport>& reports, std::ostream& os, const std::string& title = {});

class OutputError : public std::runtime_error {
 public:
  explicit OutputError(const std::filesystem::path& path)
      : std::runtime_error("cannot write " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Writes <dir>/<stem>.csv and/or <dir>/<stem>.md; returns the paths written.
std::vector<std::filesystem::path> emit_table(const ErrorTable& table, const std::filesystem::path& dir,
                                              const std::string& stem, const std::vector<OutputFormat>& formats,
                                              const std::string& title = {});
std::vector<std::filesystem::path> emit_table(const std::vector<DiagnosticReport>& reports,
                                              const std::filesystem::path& dir, const std::string& stem,
                                              const std::vector<OutputFormat>& formats,
                                              const std::string& title = {});

}  // namespace biot
