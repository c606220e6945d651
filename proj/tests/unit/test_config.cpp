#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "biot/config.hpp"

using namespace biot;

namespace {

std::string key_of(auto&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.pairings.size() == 2);
  CHECK(c.kappas == std::vector<double>{1.0, 1e-4, 1e-8, 1e-12});
  CHECK(c.levels == std::vector<int>{8, 16, 32, 64});
  CHECK(c.tau == 1.0);
  CHECK(c.T == 1.0);
  CHECK(c.jobs == 1);
  CHECK_FALSE(c.deep);
  CHECK(c.effective_levels() == c.levels);
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("emitted text parses back to the same configuration") {
  RunConfig c;
  c.kappas = {0.3, 1e-7, 1.0 / 3.0};
  c.c0s = {0.0, 1e-12};
  c.levels = {4, 12};
  c.tau = 0.125;
  c.T = 0.5;
  c.p1_flux_bc = FluxBoundary::normal;
  c.quantities = {Quantity::flux_hdiv};
  c.formats = {OutputFormat::markdown};
  c.output_dir = "some/dir";
  c.jobs = 3;
  c.deep = true;
  for (const RunConfig& src : {RunConfig{}, c}) {
    const RunConfig r = parse_config(emit_config(src));
    CHECK(r.pairings == src.pairings);
    CHECK(r.kappas == src.kappas);
    CHECK(r.c0s == src.c0s);
    CHECK(r.levels == src.levels);
    CHECK(r.tau == src.tau);
    CHECK(r.T == src.T);
    CHECK(r.p1_flux_bc == src.p1_flux_bc);
    CHECK(r.quantities == src.quantities);
    CHECK(r.formats == src.formats);
    CHECK(r.output_dir == src.output_dir);
    CHECK(r.jobs == src.jobs);
    CHECK(r.deep == src.deep);
    CHECK(emit_config(r) == emit_config(src));
  }
}

TEST_CASE("parsing") {
  const RunConfig c = parse_config(
      "# comment\n"
      "\n"
      "kappa = 1, 1e-4   # trailing\n"
      "h = 1/8,1/16\n"
      "pairing = p2-p1-dg0\n"
      "norms = pressure, flux_hdiv\n"
      "format = md\n"
      "deep = true\n");
  CHECK(c.kappas == std::vector<double>{1.0, 1e-4});
  CHECK(c.levels == std::vector<int>{8, 16});
  CHECK(c.pairings == std::vector<Pairing>{Pairing::P2_P1_DG0});
  CHECK(c.quantities == std::vector<Quantity>{Quantity::pressure, Quantity::flux_hdiv});
  CHECK(c.formats == std::vector<OutputFormat>{OutputFormat::markdown});
  CHECK(c.effective_levels() == std::vector<int>{8, 16, 32, 64, 128});
  CHECK(parse_config("pairing = all").pairings.size() == 2);
}

TEST_CASE("errors name the key") {
  CHECK(key_of([] { parse_config("kapa = 1"); }) == "kapa");
  CHECK(key_of([] { parse_config("kappa = -1"); }) == "kappa");
  CHECK(key_of([] { parse_config("kappa = 2"); }) == "kappa");
  CHECK(key_of([] { parse_config("kappa = abc"); }) == "kappa");
  CHECK(key_of([] { parse_config("kappa = 1e-4x"); }) == "kappa");
  CHECK(key_of([] { parse_config("c0 = -0.5"); }) == "c0");
  CHECK(key_of([] { parse_config("h = 16,8"); }) == "h");
  CHECK(key_of([] { parse_config("h = 0"); }) == "h");
  CHECK(key_of([] { parse_config("diag_levels = 32"); }) == "diag_levels");
  CHECK(key_of([] { parse_config("pairing = p1-p0"); }) == "pairing");
  CHECK(key_of([] { parse_config("format = pdf"); }) == "format");
  CHECK(key_of([] { parse_config("jobs = 0"); }) == "jobs");
  CHECK(key_of([] { parse_config("deep = maybe"); }) == "deep");
  CHECK(key_of([] { parse_config("samples = 50"); }) == "samples");
  CHECK(key_of([] { parse_config("p1_flux_bc = weird"); }) == "p1_flux_bc");
  CHECK(key_of([] { parse_config("tau"); }) != "<no error>");
  CHECK(key_of([] { validate_config(parse_config("tau = 0.3")); }) != "<no error>");
  CHECK(key_of([] { load_config("/nonexistent/biotfem.cfg"); }) != "<no error>");
}

TEST_CASE("every listed key is accepted") {
  for (const std::string& k : config_keys()) {
    RunConfig c;
    const std::string text = emit_config(c);
    CHECK(text.find(k + " = ") != std::string::npos);
  }
}

TEST_CASE("files are applied on top of a base and later values win") {
  const auto dir = std::filesystem::temp_directory_path() / "biotfem-config-test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "run.cfg";
  {
    std::ofstream os(file);
    os << "h = 2,4\nkappa = 1e-4\n";
  }
  RunConfig base;
  base.jobs = 5;
  RunConfig c = load_config(file, base);
  CHECK(c.levels == std::vector<int>{2, 4});
  CHECK(c.jobs == 5);
  set_config_value(c, "h", "4,8");
  CHECK(c.levels == std::vector<int>{4, 8});
  const StudySpec s = c.study();
  CHECK(s.levels == std::vector<int>{4, 8});
  CHECK(s.kappas == std::vector<double>{1e-4});
  std::filesystem::remove_all(dir);
}
