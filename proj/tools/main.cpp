// sscat: phase shifts, bound states and validation runs for the Varshni
// potential in the semi-relativistic two-body equation.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "sscat/cli.hpp"
#include "sscat/errors.hpp"

namespace {

namespace cli = sscat::cli;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitValidation = 3;

struct Options {
  std::optional<double> m1, m2, sigma, a, b, beta, energy;
  std::string l = "0";
  int n_max = 0;
  std::string format = "csv";
  std::string out;
  std::string preset;
  // scan-beta
  std::optional<double> beta_min, beta_max;
  int beta_count = 200;
  // validate
  bool perturb_w2 = false;
  std::vector<double> betas;
};

void add_common(CLI::App& app, Options& o) {
  app.add_option("--m1", o.m1, "first rest mass")->check(CLI::PositiveNumber);
  app.add_option("--m2", o.m2, "second rest mass")->check(CLI::PositiveNumber);
  app.add_option("--sigma", o.sigma, "override for the (E-V)^2 coefficient")
      ->check(CLI::PositiveNumber);
  app.add_option("--a", o.a, "potential strength a");
  app.add_option("--b", o.b, "potential range b");
  app.add_option("--beta", o.beta, "screening parameter")->check(CLI::PositiveNumber);
  app.add_option("--energy", o.energy, "total energy E");
  app.add_option("--l", o.l, "angular momentum, single value or lo..hi");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", o.out, "output file (stdout when omitted)");
  app.add_option("--preset", o.preset, "mass preset")->check(CLI::IsMember({"equal", "unequal"}));
}

cli::RunConfig build_config(const Options& o) {
  cli::RunConfig cfg;
  if (o.energy) cfg.energy = *o.energy;
  if (o.preset == "equal") cli::apply_preset(cfg, sscat::MassPreset::equal);
  if (o.preset == "unequal") cli::apply_preset(cfg, sscat::MassPreset::unequal);
  // Explicit flags win over the preset.
  if (o.m1) cfg.masses.m1 = *o.m1;
  if (o.m2) cfg.masses.m2 = *o.m2;
  if (o.sigma) cfg.sigma_override = *o.sigma;
  if (o.a) cfg.potential.a = *o.a;
  if (o.b) cfg.potential.b = *o.b;
  if (o.beta) cfg.potential.beta = *o.beta;
  cfg.l = cli::parse_l_range(o.l);
  cfg.n_max = o.n_max;
  cfg.format = o.format == "json" ? cli::OutputFormat::json : cli::OutputFormat::csv;
  if (!o.out.empty()) cfg.out_path = o.out;
  return cfg;
}

template <typename Write>
void emit(const cli::RunConfig& cfg, Write write) {
  if (!cfg.out_path) {
    write(std::cout);
    return;
  }
  std::ofstream file(*cfg.out_path, std::ios::binary);
  if (!file) {
    throw std::invalid_argument("cannot open output file '" + *cfg.out_path + "'");
  }
  write(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-relativistic Varshni scattering: phase shifts, bound states, validation"};
  app.require_subcommand(1);
  Options o;

  auto* phase = app.add_subcommand("phase", "phase shifts for one l or a range");
  add_common(*phase, o);

  auto* table = app.add_subcommand("table", "both mass presets next to the reference column");
  add_common(*table, o);

  auto* scan = app.add_subcommand("scan-beta", "search beta against the reference column");
  add_common(*scan, o);
  scan->add_option("--beta-min", o.beta_min, "lower end of the beta grid")
      ->check(CLI::PositiveNumber);
  scan->add_option("--beta-max", o.beta_max, "upper end of the beta grid")
      ->check(CLI::PositiveNumber);
  scan->add_option("--beta-count", o.beta_count, "number of grid points")
      ->check(CLI::Range(1, 100000));

  auto* bound = app.add_subcommand("bound", "bound-state energies");
  add_common(*bound, o);
  bound->add_option("--n-max", o.n_max, "highest radial quantum number")
      ->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "analytic solution against the Numerov oracle");
  add_common(*validate, o);
  validate->add_option("--betas", o.betas, "beta values of the validation grid");
  validate->add_flag("--perturb-w2", o.perturb_w2, "scale w2 by 1.01 (should fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cli::RunConfig cfg = build_config(o);
    if (*phase) {
      const auto records = cli::cmd_phase_shift(cfg);
      emit(cfg, [&](std::ostream& os) { cli::write_phase_records(os, records, cfg.format); });
    } else if (*table) {
      if (!table->count("--l")) cfg.l = {0, 20};
      const auto rows = cli::cmd_table(cfg);
      emit(cfg, [&](std::ostream& os) { cli::write_table(os, rows, cfg.format); });
    } else if (*scan) {
      if (!cfg.preset) cfg.preset = sscat::MassPreset::equal;
      if (!o.m1 && !o.m2 && !o.sigma && o.preset.empty()) cli::apply_preset(cfg, *cfg.preset);
      const double upper =
          cli::feasible_beta_bound(cli::context_of(cfg), cfg.potential.a, 20);
      std::vector<double> grid;
      if (o.beta_min || o.beta_max) {
        const double lo = o.beta_min.value_or(upper / o.beta_count);
        const double hi = o.beta_max.value_or(upper * (1.0 - 1e-9));
        for (int i = 0; i < o.beta_count; ++i) {
          grid.push_back(o.beta_count == 1 ? lo : lo + (hi - lo) * i / (o.beta_count - 1));
        }
      } else {
        grid = cli::default_beta_grid(upper, o.beta_count);
      }
      const auto report = cli::cmd_scan_beta(cfg, grid);
      emit(cfg, [&](std::ostream& os) { cli::write_scan_report(os, report, cfg.format); });
    } else if (*bound) {
      const auto states = cli::cmd_bound_states(cfg, cfg.n_max);
      emit(cfg, [&](std::ostream& os) { cli::write_bound_states(os, states, cfg.format); });
    } else if (*validate) {
      if (!validate->count("--l")) cfg.l = {0, 5};
      cli::ValidationOptions options;
      if (!o.betas.empty()) options.betas = o.betas;
      options.perturb_w2 = o.perturb_w2;
      const auto report = cli::cmd_validate(cfg, options);
      emit(cfg, [&](std::ostream& os) { cli::write_validation(os, report, cfg.format); });
      if (!report.passed) return kExitValidation;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "sscat: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "sscat: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "sscat: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}
