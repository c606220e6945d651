#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "biot/driver.hpp"

namespace biot {

enum class OutputFormat { csv, markdown };

/// Settings shared by all subcommands. Text form: one `key = value` per line,
/// lists comma separated, `#` starts a comment.
struct RunConfig {
  std::vector<Pairing> pairings{Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0};
  std::vector<double> kappas{1.0, 1e-4, 1e-8, 1e-12};
  std::vector<double> c0s{0.0};
  std::vector<int> levels{8, 16, 32, 64};
  double tau = 1.0;
  double T = 1.0;
  double mu = 1.0;
  double lambda = 1.0;
  double stress_factor = 2.0;
  FluxBoundary p1_flux_bc = FluxBoundary::full;
  std::vector<Quantity> quantities{Quantity::displacement, Quantity::pressure, Quantity::flux_w};
  std::vector<int> diag_levels{4, 8, 16};
  std::filesystem::path output_dir = "biotfem-out";
  std::vector<OutputFormat> formats{OutputFormat::csv, OutputFormat::markdown};
  int jobs = 1;
  bool deep = false;
  int samples = 1000;

  /// Mesh levels with `deep` applied: doubled up to 1/128.
  std::vector<int> effective_levels() const;
  StudySpec study() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Names accepted by set_config_value.
const std::vector<std::string>& config_keys();

/// Parses and stores one value; throws ConfigError naming the key.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Applies every line of `text` on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& file, RunConfig base = {});

/// Cross-field checks (tau divides T, parameter ranges); throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Text form accepted by parse_config.
std::string emit_config(const RunConfig& cfg);

std::string_view format_name(OutputFormat f);

}  // namespace biot
