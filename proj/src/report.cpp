#include "biot/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <system_error>

namespace biot {

std::string format_value(double v) {
  if (std::isnan(v)) return "fail";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string format_rate(std::optional<double> r) {
  if (!r || !std::isfinite(*r)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *r);
  return buf;
}

std::string format_param(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

namespace {

const Quantity kBlockOrder[] = {Quantity::displacement, Quantity::pressure, Quantity::flux_w, Quantity::flux_hdiv};

std::vector<std::string> level_headers(const ErrorTable& t) {
  std::vector<std::string> h;
  for (int n : t.levels) h.push_back("h=1/" + std::to_string(n));
  return h;
}

std::vector<std::string> row_cells(const ErrorRow& r) {
  std::vector<std::string> c{std::string(quantity_name(r.quantity)), std::string(pairing_name(r.pairing)),
                             format_param(r.kappa), format_param(r.c0)};
  for (double v : r.values) c.push_back(format_value(v));
  c.push_back(format_rate(r.rate));
  return c;
}

void csv_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

void md_line(std::ostream& os, const std::vector<std::string>& cells) {
  os << '|';
  for (const auto& c : cells) os << ' ' << c << " |";
  os << '\n';
}

void md_rule(std::ostream& os, std::size_t n) {
  os << '|';
  for (std::size_t i = 0; i < n; ++i) os << "---|";
  os << '\n';
}

std::vector<std::string> diag_header() {
  std::vector<std::string> h{"pairing", "level", "kappa", "c0", "containment", "beta_stokes", "stokes_spurious"};
  for (DarcyNorms n : {DarcyNorms::standard, DarcyNorms::A, DarcyNorms::B}) {
    const std::string s(darcy_norms_name(n));
    for (const char* f : {"beta", "spurious", "alpha_kernel", "c_b", "c_c"}) h.push_back("darcy_" + s + "_" + f);
  }
  h.push_back("gamma");
  return h;
}

std::vector<std::string> diag_cells(const DiagnosticReport& r) {
  std::vector<std::string> c{std::string(pairing_name(r.pairing)), "1/" + std::to_string(r.level),
                             format_param(r.kappa),            format_param(r.c0),
                             format_value(r.containment),       format_value(r.stokes.beta),
                             std::to_string(r.stokes.spurious_modes)};
  for (const auto& d : r.darcy) {
    c.push_back(format_value(d.beta));
    c.push_back(std::to_string(d.spurious_modes));
    c.push_back(std::isinf(d.alpha_kernel) ? "inf" : format_value(d.alpha_kernel));
    c.push_back(format_value(d.c_b));
    c.push_back(format_value(d.c_c));
  }
  c.push_back(format_value(r.gamma));
  return c;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::function<void(std::ostream&)>& body) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) throw OutputError(path);
  body(out);
  out.flush();
  if (!out) throw OutputError(path);
  return path;
}

template <class T>
std::vector<std::filesystem::path> emit(const T& data, const std::filesystem::path& dir, const std::string& stem,
                                        const std::vector<OutputFormat>& formats, const std::string& title) {
  std::vector<std::filesystem::path> out;
  for (OutputFormat f : formats) {
    if (f == OutputFormat::csv)
      out.push_back(write_file(dir, stem + ".csv", [&](std::ostream& os) { write_csv(data, os); }));
    else
      out.push_back(write_file(dir, stem + ".md", [&](std::ostream& os) { write_markdown(data, os, title); }));
  }
  return out;
}

}  // namespace

void write_csv(const ErrorTable& table, std::ostream& os) {
  std::vector<std::string> header{"quantity", "pairing", "kappa", "c0"};
  for (auto& h : level_headers(table)) header.push_back(h);
  header.push_back("rate");
  csv_line(os, header);
  for (Quantity q : kBlockOrder)
    for (const auto& r : table.rows)
      if (r.quantity == q) csv_line(os, row_cells(r));
}

void write_markdown(const ErrorTable& table, std::ostream& os, const std::string& title) {
  if (!title.empty()) os << "## " << title << "\n\n";
  std::vector<std::string> header{"quantity", "pairing", "kappa", "c0"};
  for (auto& h : level_headers(table)) header.push_back(h);
  header.push_back("rate");
  md_line(os, header);
  md_rule(os, header.size());
  for (Quantity q : kBlockOrder) {
    bool any = false;
    for (const auto& r : table.rows)
      if (r.quantity == q) {
        auto cells = row_cells(r);
        if (any) cells[0].clear();
        any = true;
        md_line(os, cells);
      }
  }
}

void write_csv(const std::vector<DiagnosticReport>& reports, std::ostream& os) {
  csv_line(os, diag_header());
  for (const auto& r : reports) csv_line(os, diag_cells(r));
}

void write_markdown(const std::vector<DiagnosticReport>& reports, std::ostream& os, const std::string& title) {
  if (!title.empty()) os << "## " << title << "\n\n";
  const auto h = diag_header();
  md_line(os, h);
  md_rule(os, h.size());
  for (const auto& r : reports) md_line(os, diag_cells(r));
}

std::vector<std::filesystem::path> emit_table(const ErrorTable& table, const std::filesystem::path& dir,
                                              const std::string& stem, const std::vector<OutputFormat>& formats,
                                              const std::string& title) {
  return emit(table, dir, stem, formats, title);
}

std::vector<std::filesystem::path> emit_table(const std::vector<DiagnosticReport>& reports,
                                              const std::filesystem::path& dir, const std::string& stem,
                                              const std::vector<OutputFormat>& formats, const std::string& title) {
  return emit(reports, dir, stem, formats, title);
}

}  // namespace biot
