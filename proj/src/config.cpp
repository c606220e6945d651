#include "biot/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace biot {

std::string_view format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "markdown"; }

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view key, std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = s.find(',');
    const auto item = trim(s.substr(0, c));
    if (item.empty()) throw ConfigError(std::string(key), "empty list item");
    out.push_back(item);
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string(key), "cannot parse number '" + std::string(s) + "'");
  return v;
}

int to_int(std::string_view key, std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string(key), "cannot parse integer '" + std::string(s) + "'");
  return v;
}

bool to_bool(std::string_view key, std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(s) + "'");
}

// "8" and "1/8" both mean n_div = 8
int to_level(std::string_view key, std::string_view s) {
  if (s.starts_with("1/")) s.remove_prefix(2);
  const int n = to_int(key, s);
  if (n < 1) throw ConfigError(std::string(key), "mesh level must be a positive division count");
  return n;
}

std::string number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

void check_strictly_increasing(std::string_view key, const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) throw ConfigError(std::string(key), "levels must be strictly increasing");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"pairing", "kappa",  "c0",         "h",       "tau",
                                             "T",       "mu",     "lambda",     "stress_factor",
                                             "p1_flux_bc", "norms", "diag_levels", "output_dir",
                                             "format",  "jobs",   "deep",       "samples"};
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string k(key);
  const std::string_view value = trim(raw);
  if (value.empty()) throw ConfigError(k, "missing value");
  if (key == "pairing") {
    cfg.pairings.clear();
    for (auto item : split_list(key, value)) {
      if (item == "all") {
        cfg.pairings = {Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0};
        continue;
      }
      const auto p = parse_pairing(item);
      if (!p) throw ConfigError(k, "unknown pairing '" + std::string(item) + "' (p2-rt0-dg0, p2-p1-dg0, all)");
      cfg.pairings.push_back(*p);
    }
  } else if (key == "kappa") {
    cfg.kappas.clear();
    for (auto item : split_list(key, value)) {
      const double v = to_double(key, item);
      if (!(v > 0.0 && v <= 1.0)) throw ConfigError(k, "kappa must satisfy 0 < kappa <= 1, got " + std::string(item));
      cfg.kappas.push_back(v);
    }
  } else if (key == "c0") {
    cfg.c0s.clear();
    for (auto item : split_list(key, value)) {
      const double v = to_double(key, item);
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(k, "c0 must satisfy 0 <= c0 <= 1, got " + std::string(item));
      cfg.c0s.push_back(v);
    }
  } else if (key == "h") {
    cfg.levels.clear();
    for (auto item : split_list(key, value)) cfg.levels.push_back(to_level(key, item));
    check_strictly_increasing(key, cfg.levels);
  } else if (key == "diag_levels") {
    cfg.diag_levels.clear();
    for (auto item : split_list(key, value)) {
      const int n = to_level(key, item);
      if (n > 16) throw ConfigError(k, "diagnostic levels are limited to 1/16");
      cfg.diag_levels.push_back(n);
    }
    check_strictly_increasing(key, cfg.diag_levels);
  } else if (key == "tau" || key == "T" || key == "mu" || key == "stress_factor") {
    const double v = to_double(key, value);
    if (!(v > 0.0)) throw ConfigError(k, "must be positive");
    (key == "tau" ? cfg.tau : key == "T" ? cfg.T : key == "mu" ? cfg.mu : cfg.stress_factor) = v;
  } else if (key == "lambda") {
    const double v = to_double(key, value);
    if (!(v >= 0.0)) throw ConfigError(k, "must be nonnegative");
    cfg.lambda = v;
  } else if (key == "p1_flux_bc") {
    if (value == "full")
      cfg.p1_flux_bc = FluxBoundary::full;
    else if (value == "normal")
      cfg.p1_flux_bc = FluxBoundary::normal;
    else
      throw ConfigError(k, "expected full or normal");
  } else if (key == "norms") {
    cfg.quantities.clear();
    for (auto item : split_list(key, value)) {
      bool found = false;
      for (Quantity q : {Quantity::displacement, Quantity::pressure, Quantity::flux_w, Quantity::flux_hdiv})
        if (item == quantity_name(q)) {
          cfg.quantities.push_back(q);
          found = true;
        }
      if (!found)
        throw ConfigError(k, "unknown quantity '" + std::string(item) + "' (displacement, pressure, flux, flux_hdiv)");
    }
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(value);
  } else if (key == "format") {
    cfg.formats.clear();
    for (auto item : split_list(key, value)) {
      if (item == "csv")
        cfg.formats.push_back(OutputFormat::csv);
      else if (item == "markdown" || item == "md")
        cfg.formats.push_back(OutputFormat::markdown);
      else
        throw ConfigError(k, "unknown format '" + std::string(item) + "' (csv, markdown)");
    }
  } else if (key == "jobs") {
    cfg.jobs = to_int(key, value);
    if (cfg.jobs < 1) throw ConfigError(k, "must be at least 1");
  } else if (key == "deep") {
    cfg.deep = to_bool(key, value);
  } else if (key == "samples") {
    cfg.samples = to_int(key, value);
    if (cfg.samples < 100) throw ConfigError(k, "must be at least 100");
  } else {
    throw ConfigError(k, "unknown key");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    set_config_value(base, trim(s.substr(0, eq)), s.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& file, RunConfig base) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config", "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void validate_config(const RunConfig& cfg) {
  if (cfg.pairings.empty()) throw ConfigError("pairing", "at least one pairing is required");
  if (cfg.quantities.empty()) throw ConfigError("norms", "at least one quantity is required");
  if (cfg.formats.empty()) throw ConfigError("format", "at least one format is required");
  const double n = cfg.T / cfg.tau;
  if (std::abs(n - std::round(n)) > 1e-12 * std::max(1.0, n) || std::round(n) < 1)
    throw ConfigError("tau", "tau must divide T");
  try {
    cfg.study().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config", e.what());
  }
}

std::vector<int> RunConfig::effective_levels() const {
  std::vector<int> out = levels;
  if (deep && !out.empty())
    while (out.back() < 128) out.push_back(std::min(out.back() * 2, 128));
  return out;
}

StudySpec RunConfig::study() const {
  StudySpec s;
  s.pairings = pairings;
  s.kappas = kappas;
  s.c0s = c0s;
  s.levels = effective_levels();
  s.tau = tau;
  s.T = T;
  s.mu = mu;
  s.lambda = lambda;
  s.stress_factor = stress_factor;
  s.flux_boundary = p1_flux_bc;
  s.quantities = quantities;
  s.jobs = jobs;
  return s;
}

std::string emit_config(const RunConfig& c) {
  std::string out;
  auto line = [&](std::string_view k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  line("pairing", join(c.pairings, [](Pairing p) { return std::string(pairing_name(p)); }));
  line("kappa", join(c.kappas, number));
  line("c0", join(c.c0s, number));
  line("h", join(c.levels, [](int n) { return std::to_string(n); }));
  line("tau", number(c.tau));
  line("T", number(c.T));
  line("mu", number(c.mu));
  line("lambda", number(c.lambda));
  line("stress_factor", number(c.stress_factor));
  line("p1_flux_bc", std::string(flux_boundary_name(c.p1_flux_bc)));
  line("norms", join(c.quantities, [](Quantity q) { return std::string(quantity_name(q)); }));
  line("diag_levels", join(c.diag_levels, [](int n) { return std::to_string(n); }));
  line("output_dir", c.output_dir.string());
  line("format", join(c.formats, [](OutputFormat f) { return std::string(format_name(f)); }));
  line("jobs", std::to_string(c.jobs));
  line("deep", c.deep ? "true" : "false");
  line("samples", std::to_string(c.samples));
  return out;
}

}  // namespace biot
