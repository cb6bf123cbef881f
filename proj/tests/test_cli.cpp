#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "mimosep/config.hpp"
#include "mimosep/csv.hpp"
#include "mimosep/error.hpp"
#include "mimosep/experiments.hpp"
#include "mimosep/svg.hpp"

using namespace mimosep;
using nlohmann::json;

namespace {

json sep_curve_doc() {
  return json::parse(R"({
    "experiment": "sep-curve",
    "modulation": "16-QAM",
    "n_t": 8,
    "n_r": 16,
    "rho": {"mag": 0.5, "phase_rad": 0.5},
    "snr_db": {"start": 0, "stop": 10, "step": 5}
  })");
}

// Message of the Config error raised by parsing `doc`, or "" when it parses.
std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("a valid config parses") {
  const ExperimentConfig cfg = parse_config(sep_curve_doc());
  CHECK(cfg.experiment == Experiment::SepCurve);
  REQUIRE(cfg.modulations.size() == 1);
  CHECK(cfg.modulations[0].kind == Modulation::Qam);
  CHECK(cfg.modulations[0].m == 16);
  CHECK(cfg.snr_db == std::vector<double>{0.0, 5.0, 10.0});
  CHECK(std::abs(cfg.rho[0] - std::polar(0.5, 0.5)) < 1e-15);
  CHECK(cfg.output == "sep-curve");
  CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
}

TEST_CASE("config errors name the offending field") {
  struct Case {
    const char* key;
    json value;
    const char* field;
  };
  const Case cases[] = {
      {"n_r", 8, "'n_r'"},
      {"rho", json{{"mag", 1.0}}, "'rho.mag'"},
      {"rho", json{{"mag", 0.5}, {"phase", 1.0}}, "'rho'"},
      {"snr_db", json::array(), "'snr_db'"},
      {"modulation", "12-QAM", "'modulation'"},
      {"modulation", "16-FSK", "'modulation'"},
      {"symbols", 10, "'symbols'"},
      {"seed", -1, "'seed'"},
      {"output", "a/b", "'output'"},
      {"precoders", json{"greedy"}, "'precoders'"},
      {"n_t", 0, "'n_t'"},
      {"typo", 1, "'typo'"},
      {"experiment", "nonsense", "'experiment'"},
  };
  for (const Case& c : cases) {
    json doc = sep_curve_doc();
    doc[c.key] = c.value;
    const std::string msg = config_error(doc);
    CAPTURE(msg);
    CHECK(msg.find(c.field) != std::string::npos);
  }

  json mismatch = sep_curve_doc();
  try {
    parse_config(mismatch, Experiment::McValidate);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("'experiment'") != std::string::npos);
  }
}

TEST_CASE("a one-bin histogram is rejected") {
  const json doc = json::parse(R"({
    "experiment": "snr-dist", "n_t": 10, "beta": 2,
    "rho": {"mag": 0.1, "phase_rad": 0.5}, "snr_db": 20, "bins": 1
  })");
  CHECK(config_error(doc).find("'bins'") != std::string::npos);
}

TEST_CASE("convergence and asymptote shapes") {
  json conv = json::parse(R"({
    "experiment": "convergence", "modulation": "16-QAM", "n_t": [16, 8], "beta": 2,
    "rho": {"mag": 0.5}, "snr_db": 12
  })");
  CHECK(config_error(conv).find("'n_t'") != std::string::npos);
  conv["n_t"] = {8, 16};
  CHECK(config_error(conv).empty());
  conv["beta"] = 1.5;
  conv["n_t"] = {8, 15};
  CHECK(config_error(conv).find("'beta'") != std::string::npos);

  json asym = json::parse(R"({
    "experiment": "asymptote", "modulation": "4-PAM", "beta": [2, 3],
    "rho": {"mag": 0.5}, "snr_db": 12
  })");
  CHECK(config_error(asym).empty());
  asym["n_t"] = 8;
  CHECK(config_error(asym).find("'beta'") != std::string::npos);
}

TEST_CASE("numbers round-trip through CSV") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_number(1e-300)) == 1e-300);
  CHECK(format_number(INFINITY) == "inf");

  Table t({"name", "value"});
  t.add_row({std::string("a,b"), 2.5});
  t.add_row({std::string("plain"), 0.0});
  CHECK(t.to_csv() == "name,value\n\"a,b\",2.5\nplain,0\n");
  CHECK(t.numeric_column("value") == std::vector<double>{2.5, 0.0});
  CHECK_THROWS_AS(t.numeric_column("name"), Error);
  CHECK_THROWS_AS(t.column("missing"), Error);
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
}

TEST_CASE("SVG rendering") {
  Table line({"x", "y"});
  line.add_row({0.0, 1.0});
  line.add_row({1.0, 2.0});
  const PlotSpec spec{"two points", "x", {"y"}, "", false};
  const std::string svg = render_svg(line, spec);
  CHECK(occurrences(svg, "<polyline") == 1);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg == render_svg(line, spec));

  Table zeros({"snr", "sep"});
  zeros.add_row({0.0, 1e-2});
  zeros.add_row({10.0, 0.0});
  const std::string clipped = render_svg(zeros, PlotSpec{"", "snr", {"sep"}, "", true});
  CHECK(clipped.find("1e-300") != std::string::npos);

  Table text({"x", "y"});
  text.add_row({0.0, std::string("n/a")});
  text.add_row({1.0, 2.0});
  CHECK_THROWS_AS(render_svg(text, spec), Error);

  Table single({"x", "y"});
  single.add_row({0.0, 1.0});
  CHECK_THROWS_AS(render_svg(single, spec), Error);

  Table grouped({"series", "x", "y"});
  for (const char* s : {"a", "b"}) {
    grouped.add_row({std::string(s), 0.0, 1.0});
    grouped.add_row({std::string(s), 1.0, 3.0});
  }
  CHECK(occurrences(render_svg(grouped, PlotSpec{"", "x", {"y"}, "series", false}), "<polyline") == 2);
}

TEST_CASE("uncorrelated sep-curve has equal optimal and uniform columns") {
  json doc = sep_curve_doc();
  doc["modulations"] = {"4-PAM", "8-PSK", "16-QAM"};
  doc.erase("modulation");
  doc["rho"] = {{"mag", 0.0}};
  doc["snr_db"] = {{"start", -10}, {"stop", 20}, {"step", 5}};
  const Table t = run_sep_curve(parse_config(doc));
  const auto opt = t.numeric_column("analytic_optimal");
  const auto uni = t.numeric_column("analytic_uniform");
  REQUIRE(opt.size() == 21);
  for (std::size_t i = 0; i < opt.size(); ++i) CHECK(std::abs(opt[i] - uni[i]) < 1e-10);
}

TEST_CASE("sep-curve columns decrease in SNR and start near the guessing floor") {
  json doc = sep_curve_doc();
  doc["modulations"] = {"4-PAM", "8-PSK", "16-QAM"};
  doc.erase("modulation");
  doc["n_t"] = 50;
  doc["n_r"] = 100;
  doc["rho"] = {{"mag", 0.1}, {"phase_rad", 0.5}};
  doc["snr_db"] = {-40, 0, 5, 10, 15};
  const Table t = run_sep_curve(parse_config(doc));
  const auto mods = t.column("modulation");
  const auto sep = t.numeric_column("analytic_optimal");
  const double floors[] = {0.75, 7.0 / 8.0, 15.0 / 16.0};
  for (std::size_t block = 0; block < 3; ++block) {
    CHECK(std::get<std::string>(t.rows()[block * 5][mods]) == std::vector<std::string>{"4-PAM", "8-PSK", "16-QAM"}[block]);
    CHECK(sep[block * 5] == doctest::Approx(floors[block]).epsilon(0.02));
    for (std::size_t i = 1; i < 5; ++i) CHECK(sep[block * 5 + i] < sep[block * 5 + i - 1]);
  }
}

TEST_CASE("derived seeds differ per point") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
