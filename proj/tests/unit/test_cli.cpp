#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sscat/cli.hpp"
#include "sscat/errors.hpp"
#include "sscat/scattering.hpp"

using namespace sscat;
using namespace sscat::cli;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(text);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  return out;
}

RunConfig table_config() {
  RunConfig cfg;
  apply_preset(cfg, MassPreset::equal);
  cfg.l = {0, 20};
  return cfg;
}

std::string phase_csv(const RunConfig& cfg) {
  std::ostringstream os;
  write_phase_records(os, cmd_phase_shift(cfg), OutputFormat::csv);
  return os.str();
}

}  // namespace

TEST_CASE("l range parsing") {
  CHECK(parse_l_range("7").lo == 7);
  CHECK(parse_l_range("7").hi == 7);
  const auto r = parse_l_range("0..20");
  CHECK(r.lo == 0);
  CHECK(r.hi == 20);
  CHECK(parse_l_range("0..10000").hi == 10000);
  CHECK_THROWS_AS(parse_l_range("0..10001"), std::invalid_argument);
  CHECK_THROWS_AS(parse_l_range("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_l_range("-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_l_range("a..3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_l_range("3.5"), std::invalid_argument);
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-3.20116) == "-3.20116");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("phase CSV layout") {
  const std::string csv = phase_csv(table_config());
  CHECK(csv.find('\r') == std::string::npos);
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == 22);
  CHECK(lines[0] == "l,k,delta,normalization,lambda,validity_score,status");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    REQUIRE(cells.size() == 7);
    CHECK(std::stoi(cells[0]) == static_cast<int>(i) - 1);
    // beta = 0.05 sits just above the open-channel bound for l = 20
    CHECK(cells[6] == (i == 21 ? "closed" : "ok"));
  }
}

TEST_CASE("phase CSV round-trips and is deterministic") {
  const RunConfig cfg = table_config();
  const std::string first = phase_csv(cfg);
  CHECK(phase_csv(cfg) == first);
  const auto ctx = context_of(cfg);
  const auto lines = split(first, '\n');
  for (std::size_t i = 1; i < lines.size() - 1; i += 4) {
    const auto cells = split(lines[i], ',');
    const int l = std::stoi(cells[0]);
    const auto res = phase_shift(ctx, cfg.potential, {l});
    CHECK(cells[1] == format_number(res.k));
    CHECK(cells[2] == format_number(res.delta));
    CHECK(cells[3] == format_number(res.normalization));
    CHECK(cells[4] == format_number(res.lambda));
    CHECK(std::stod(cells[2]) == doctest::Approx(res.delta).epsilon(1e-11));
  }
}

TEST_CASE("free particle run and closed channels") {
  RunConfig cfg = table_config();
  cfg.potential.a = 0.0;
  cfg.l = {0, 0};
  const auto rec = cmd_phase_shift(cfg);
  REQUIRE(rec.size() == 1);
  CHECK(std::abs(rec[0].delta) < 1e-10);

  cfg = table_config();
  cfg.l = {19, 23};
  const auto mixed = cmd_phase_shift(cfg);
  CHECK(mixed[0].status == "ok");
  CHECK(mixed[4].status == "closed");
  CHECK(std::isnan(mixed[4].delta));
}

TEST_CASE("JSON mirrors the CSV fields") {
  RunConfig cfg = table_config();
  cfg.l = {20, 21};
  std::ostringstream os;
  write_phase_records(os, cmd_phase_shift(cfg), OutputFormat::json);
  const auto doc = nlohmann::json::parse(os.str());
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  for (const char* key : {"l", "k", "delta", "normalization", "lambda", "validity_score", "status"}) {
    CHECK(doc[0].contains(key));
  }
  CHECK(doc[1]["status"] == "closed");
  CHECK(doc[1]["delta"].is_null());
}

TEST_CASE("table command") {
  const auto rows = cmd_table(table_config());
  REQUIRE(rows.size() == 21);
  CHECK(rows[0].table_equal == -3.20116);
  CHECK(rows[20].table_unequal == -77.25701);
  CHECK(std::isnan(rows[20].delta_equal));
  CHECK(std::isfinite(rows[20].delta_unequal));
  RunConfig beyond = table_config();
  beyond.l = {21, 21};
  beyond.potential.beta = 0.01;
  CHECK(std::isnan(cmd_table(beyond)[0].table_equal));
}

TEST_CASE("feasible beta bounds") {
  // mpmath
  CHECK(std::abs(feasible_beta_bound(preset_context(MassPreset::equal, 1.0), 0.15, 20) -
                 0.0495365425480931922) < 1e-15);
  CHECK(std::abs(feasible_beta_bound(preset_context(MassPreset::unequal, 1.0), 0.15, 20) -
                 0.0756794618927814031) < 1e-15);
  const auto grid = default_beta_grid(0.05, 10);
  CHECK(grid.size() == 10);
  CHECK(grid.back() < 0.05);
  CHECK(grid.front() > 0.0);
}

TEST_CASE("table pattern predicate") {
  const auto& ref = table1_equal();
  CHECK(matches_table_pattern(ref, ref));
  std::vector<double> scaled(ref.begin(), ref.end());
  for (double& v : scaled) v *= 1.05;
  CHECK(matches_table_pattern(scaled, ref));
  scaled[2] = -0.1;
  CHECK_FALSE(matches_table_pattern(scaled, ref));
  std::vector<double> flat(ref.begin(), ref.end());
  flat[12] = flat[11];
  CHECK_FALSE(matches_table_pattern(flat, ref));
}

TEST_CASE("beta scan") {
  RunConfig cfg = table_config();
  const auto ctx = context_of(cfg);
  const double upper = feasible_beta_bound(ctx, 0.15, 20);
  std::vector<double> grid = default_beta_grid(upper, 20);
  grid.push_back(0.2);  // infeasible, dropped
  const auto report = cmd_scan_beta(cfg, grid);
  CHECK(report.entries.size() == 20);
  CHECK(report.best < report.entries.size());
  for (const auto& e : report.entries) {
    CHECK(e.delta.size() == 21);
    CHECK(e.max_abs_deviation >= report.entries[report.best].max_abs_deviation);
  }
  std::ostringstream os;
  write_scan_report(os, report, OutputFormat::json);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc["best_residuals"].size() == 21);
  CHECK(doc["best_beta"].get<double>() == report.entries[report.best].beta);

  const std::vector<double> bad{0.06, 0.1};
  CHECK_THROWS_AS(cmd_scan_beta(cfg, bad), sscat::domain_error);
}

TEST_CASE("bound command") {
  RunConfig cfg;
  cfg.potential = {0.5, 0.5, 0.05};
  cfg.l = {0, 2};
  const auto states = cmd_bound_states(cfg, 4);
  REQUIRE(!states.empty());
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(states[i].residual < 1e-10);
    if (i > 0) {
      const auto& p = states[i - 1];
      CHECK((p.l < states[i].l || (p.l == states[i].l && p.energy < states[i].energy)));
    }
  }
  cfg.potential.a = 0.0;
  CHECK(cmd_bound_states(cfg, 4).empty());
  std::ostringstream os;
  write_bound_states(os, states, OutputFormat::csv);
  CHECK(split(os.str(), '\n')[0] == "n,l,energy,residual");
}

TEST_CASE("validation report") {
  RunConfig cfg;
  cfg.l = {0, 2};
  ValidationOptions opt;
  opt.betas = {0.025};
  const auto good = cmd_validate(cfg, opt);
  CHECK(good.passed);
  CHECK(good.checks.size() == 3);
  CHECK(good.max_beta_r > 0.0);
  opt.perturb_w2 = true;
  const auto bad = cmd_validate(cfg, opt);
  CHECK_FALSE(bad.passed);
  std::ostringstream os;
  write_validation(os, bad, OutputFormat::csv);
  CHECK(os.str().find("FAIL") != std::string::npos);
  CHECK(os.str().find("max_beta_r") != std::string::npos);
}
