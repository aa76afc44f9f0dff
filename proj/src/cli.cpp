#include "sscat/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sscat/errors.hpp"
#include "sscat/oracle.hpp"
#include "sscat/scattering.hpp"

namespace sscat::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Evaluates fn(0..n-1) on a small thread pool. Results keep index order, so
/// output does not depend on scheduling. The first exception (by index) is
/// rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<std::optional<Result>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();
  std::vector<Result> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      std::rethrow_exception(errors[i]);
    }
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> phase_column(const KinematicContext& ctx, const VarshniParams& p, int l_max,
                                 CoefficientSet set) {
  std::vector<double> column;
  column.reserve(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) {
    column.push_back(phase_shift(ctx, p, {l}, set).delta);
  }
  return column;
}

double max_abs_deviation(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

void write_csv_row(std::ostream& os, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) {
      os << ',';
    }
    os << cell;
    first = false;
  }
  os << '\n';
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    return "nan";
  }
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << value;
  return os.str();
}

LRange parse_l_range(std::string_view text) {
  LRange range;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    range.lo = range.hi = parse_int(text);
  } else {
    range.lo = parse_int(text.substr(0, dots));
    range.hi = parse_int(text.substr(dots + 2));
  }
  if (range.lo < 0) {
    throw std::invalid_argument("angular momentum must be non-negative");
  }
  if (range.hi < range.lo) {
    throw std::invalid_argument("l range must satisfy lo <= hi");
  }
  if (range.hi - range.lo > kMaxLSpan) {
    throw std::invalid_argument("l range spans more than 10^4 channels");
  }
  return range;
}

void apply_preset(RunConfig& cfg, MassPreset preset) {
  const KinematicContext ctx = preset_context(preset, cfg.energy);
  cfg.preset = preset;
  cfg.masses = ctx.masses;
  cfg.sigma_override = ctx.sigma_override;
}

KinematicContext context_of(const RunConfig& cfg) {
  return make_context(cfg.masses, cfg.energy, cfg.sigma_override);
}

// ---------------------------------------------------------------------------

std::vector<PhaseRecord> cmd_phase_shift(const RunConfig& cfg) {
  const KinematicContext ctx = context_of(cfg);
  validate(cfg.potential);
  const auto count = static_cast<std::size_t>(cfg.l.hi - cfg.l.lo + 1);
  return parallel_map(count, [&](std::size_t i) {
    PhaseRecord rec;
    rec.l = cfg.l.lo + static_cast<int>(i);
    rec.k = rec.delta = rec.normalization = rec.lambda = rec.validity_score = kNaN;
    try {
      const PhaseShiftResult r = phase_shift(ctx, cfg.potential, {rec.l});
      rec.k = r.k;
      rec.delta = r.delta;
      rec.normalization = r.normalization;
      rec.lambda = r.lambda;
      const double reach = std::max(1.0, std::sqrt(static_cast<double>(rec.l) * (rec.l + 1)));
      rec.validity_score = cfg.potential.beta * reach / r.k;
      rec.status = "ok";
    } catch (const evanescent_channel_error&) {
      rec.status = "closed";
    } catch (const supercritical_error&) {
      rec.status = "supercritical";
    } catch (const pole_error&) {
      rec.status = "pole";
    }
    return rec;
  });
}

void write_phase_records(std::ostream& os, std::span<const PhaseRecord> records,
                         OutputFormat format) {
  if (format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& r : records) {
      arr.push_back({{"l", r.l},
                     {"k", number_or_null(r.k)},
                     {"delta", number_or_null(r.delta)},
                     {"normalization", number_or_null(r.normalization)},
                     {"lambda", number_or_null(r.lambda)},
                     {"validity_score", number_or_null(r.validity_score)},
                     {"status", r.status}});
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << "l,k,delta,normalization,lambda,validity_score,status\n";
  for (const auto& r : records) {
    write_csv_row(os, {std::to_string(r.l), format_number(r.k), format_number(r.delta),
                       format_number(r.normalization), format_number(r.lambda),
                       format_number(r.validity_score), r.status});
  }
}

// ---------------------------------------------------------------------------

const std::array<double, 21>& table1_equal() {
  static const std::array<double, 21> values{
      -3.20116,  -0.48696,  3.94288,   1.44838,   -1.48742,  -4.77575,  -8.36940,
      -12.23144, -16.33226, -20.64778, -25.15815, -29.84674, -34.69945, -39.70422,
      -44.85058, -50.12941, -55.53264, -61.05314, -66.68454, -72.42109, -78.25764};
  return values;
}

const std::array<double, 21>& table1_unequal() {
  static const std::array<double, 21> values{
      -10.14667, -8.03766,  -2.55423,  5.13545,   1.52129,   -2.18885,  -6.07785,
      -10.16280, -14.43993, -18.89947, -23.53029, -28.32149, -33.26291, -38.34528,
      -43.56023, -48.90018, -54.35831, -59.92842, -65.60491, -71.38266, -77.25701};
  return values;
}

std::vector<TableRow> cmd_table(const RunConfig& cfg) {
  validate(cfg.potential);
  const KinematicContext equal = preset_context(MassPreset::equal, cfg.energy);
  const KinematicContext unequal = preset_context(MassPreset::unequal, cfg.energy);
  const auto count = static_cast<std::size_t>(cfg.l.hi - cfg.l.lo + 1);
  return parallel_map(count, [&](std::size_t i) {
    TableRow row;
    row.l = cfg.l.lo + static_cast<int>(i);
    auto delta_or_nan = [&](const KinematicContext& ctx) {
      try {
        return phase_shift(ctx, cfg.potential, {row.l}).delta;
      } catch (const domain_error&) {
        return kNaN;
      }
    };
    row.delta_equal = delta_or_nan(equal);
    row.delta_unequal = delta_or_nan(unequal);
    const bool tabulated = row.l <= 20;
    row.table_equal = tabulated ? table1_equal()[static_cast<std::size_t>(row.l)] : kNaN;
    row.table_unequal = tabulated ? table1_unequal()[static_cast<std::size_t>(row.l)] : kNaN;
    return row;
  });
}

void write_table(std::ostream& os, std::span<const TableRow> rows, OutputFormat format) {
  if (format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"l", r.l},
                     {"delta_equal", number_or_null(r.delta_equal)},
                     {"delta_unequal", number_or_null(r.delta_unequal)},
                     {"table_equal", number_or_null(r.table_equal)},
                     {"table_unequal", number_or_null(r.table_unequal)}});
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << "l,delta_equal,delta_unequal,table_equal,table_unequal\n";
  for (const auto& r : rows) {
    write_csv_row(os, {std::to_string(r.l), format_number(r.delta_equal),
                       format_number(r.delta_unequal), format_number(r.table_equal),
                       format_number(r.table_unequal)});
  }
}

// ---------------------------------------------------------------------------

double feasible_beta_bound(const KinematicContext& ctx, double a, int l_max) {
  const double eps = ctx.energy - a;
  const double open = 2.0 * ctx.mu * eps + relativistic_coefficient(ctx) * eps * eps;
  if (l_max <= 0) {
    return open > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return open > 0.0 ? std::sqrt(open / (static_cast<double>(l_max) * (l_max + 1))) : 0.0;
}

std::vector<double> default_beta_grid(double upper, int count) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  const double top = upper * (1.0 - 1e-9);
  for (int i = 1; i <= count; ++i) {
    grid.push_back(top * i / count);
  }
  return grid;
}

bool matches_table_pattern(std::span<const double> column, std::span<const double> reference) {
  if (column.size() != reference.size() || column.size() < 6) {
    return false;
  }
  for (std::size_t l = 0; l < column.size(); ++l) {
    if (!std::isfinite(column[l]) || std::signbit(column[l]) != std::signbit(reference[l])) {
      return false;
    }
  }
  for (std::size_t l = 6; l < column.size(); ++l) {
    if (!(column[l] < column[l - 1])) {
      return false;
    }
  }
  const double last = reference.back();
  return std::abs(column.back() - last) <= 0.1 * std::abs(last);
}

BetaScanReport cmd_scan_beta(const RunConfig& cfg, std::span<const double> beta_grid) {
  constexpr int l_max = 20;
  const KinematicContext ctx = context_of(cfg);
  BetaScanReport report;
  report.reference = cfg.preset.value_or(MassPreset::equal);
  const auto& reference =
      report.reference == MassPreset::equal ? table1_equal() : table1_unequal();
  report.feasible_upper = feasible_beta_bound(ctx, cfg.potential.a, l_max);

  std::vector<double> feasible;
  for (double beta : beta_grid) {
    if (beta > 0.0 && beta < report.feasible_upper) {
      feasible.push_back(beta);
    }
  }
  if (feasible.empty()) {
    throw domain_error("no beta in the grid keeps l = 0..20 open (bound " +
                       format_number(report.feasible_upper) + ")");
  }
  report.entries = parallel_map(feasible.size(), [&](std::size_t i) {
    BetaScanEntry entry;
    entry.beta = feasible[i];
    VarshniParams p = cfg.potential;
    p.beta = entry.beta;
    entry.delta = phase_column(ctx, p, l_max, CoefficientSet::repaired);
    entry.max_abs_deviation = max_abs_deviation(entry.delta, reference);
    entry.pattern_match = matches_table_pattern(entry.delta, reference);
    entry.delta_printed = phase_column(ctx, p, l_max, CoefficientSet::printed);
    entry.max_abs_deviation_printed = max_abs_deviation(entry.delta_printed, reference);
    entry.pattern_match_printed = matches_table_pattern(entry.delta_printed, reference);
    return entry;
  });
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    if (e.max_abs_deviation < report.entries[report.best].max_abs_deviation) {
      report.best = i;
    }
    report.any_pattern_match = report.any_pattern_match || e.pattern_match || e.pattern_match_printed;
  }
  return report;
}

void write_scan_report(std::ostream& os, const BetaScanReport& report, OutputFormat format) {
  const auto& reference =
      report.reference == MassPreset::equal ? table1_equal() : table1_unequal();
  const BetaScanEntry& best = report.entries.at(report.best);
  if (format == OutputFormat::json) {
    json entries = json::array();
    for (const auto& e : report.entries) {
      entries.push_back({{"beta", e.beta},
                         {"max_abs_deviation", e.max_abs_deviation},
                         {"pattern_match", e.pattern_match},
                         {"max_abs_deviation_printed", e.max_abs_deviation_printed},
                         {"pattern_match_printed", e.pattern_match_printed}});
    }
    json residuals = json::array();
    for (std::size_t l = 0; l < best.delta.size(); ++l) {
      residuals.push_back({{"l", l},
                           {"delta", best.delta[l]},
                           {"delta_printed", best.delta_printed[l]},
                           {"table", reference[l]},
                           {"deviation", best.delta[l] - reference[l]}});
    }
    const json doc{{"reference", report.reference == MassPreset::equal ? "equal" : "unequal"},
                   {"feasible_beta_upper", report.feasible_upper},
                   {"best_beta", best.beta},
                   {"best_max_abs_deviation", best.max_abs_deviation},
                   {"any_pattern_match", report.any_pattern_match},
                   {"entries", entries},
                   {"best_residuals", residuals}};
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# reference=" << (report.reference == MassPreset::equal ? "equal" : "unequal")
     << " feasible_beta_upper=" << format_number(report.feasible_upper)
     << " best_beta=" << format_number(best.beta)
     << " best_max_abs_deviation=" << format_number(best.max_abs_deviation)
     << " any_pattern_match=" << (report.any_pattern_match ? "true" : "false") << '\n';
  os << "beta,max_abs_deviation,pattern_match,max_abs_deviation_printed,pattern_match_printed\n";
  for (const auto& e : report.entries) {
    write_csv_row(os, {format_number(e.beta), format_number(e.max_abs_deviation),
                       e.pattern_match ? "true" : "false",
                       format_number(e.max_abs_deviation_printed),
                       e.pattern_match_printed ? "true" : "false"});
  }
  os << "# residuals at best_beta\nl,delta,delta_printed,table,deviation\n";
  for (std::size_t l = 0; l < best.delta.size(); ++l) {
    write_csv_row(os, {std::to_string(l), format_number(best.delta[l]),
                       format_number(best.delta_printed[l]), format_number(reference[l]),
                       format_number(best.delta[l] - reference[l])});
  }
}

// ---------------------------------------------------------------------------

std::vector<BoundState> cmd_bound_states(const RunConfig& cfg, int n_max) {
  const KinematicContext ctx = context_of(cfg);
  validate(cfg.potential);
  if (n_max < 0) {
    throw domain_error("n_max must be non-negative");
  }
  const auto count = static_cast<std::size_t>(cfg.l.hi - cfg.l.lo + 1);
  const auto per_l = parallel_map(count, [&](std::size_t i) {
    return bound_spectrum(ctx, cfg.potential, {cfg.l.lo + static_cast<int>(i)}, n_max);
  });
  std::vector<BoundState> out;
  for (const auto& states : per_l) {
    out.insert(out.end(), states.begin(), states.end());
  }
  return out;
}

void write_bound_states(std::ostream& os, std::span<const BoundState> states,
                        OutputFormat format) {
  if (format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& s : states) {
      arr.push_back({{"n", s.n}, {"l", s.l}, {"energy", s.energy}, {"residual", s.residual}});
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << "n,l,energy,residual\n";
  for (const auto& s : states) {
    write_csv_row(os, {std::to_string(s.n), std::to_string(s.l), format_number(s.energy),
                       format_number(s.residual)});
  }
}

// ---------------------------------------------------------------------------

Eigen::VectorXd certification_grid(double beta, double k) {
  const double dz = std::min(5e-4, 0.03 * beta / k);
  return uniform_z_grid(beta, 0.01, 0.8, dz);
}

ValidationReport cmd_validate(const RunConfig& cfg, const ValidationOptions& options) {
  constexpr double kPhaseTolerance = 2e-3;
  constexpr double kResidualTolerance = 1e-6;
  constexpr double kAmplitudeTolerance = 1e-3;

  std::vector<KinematicContext> contexts;
  if (cfg.preset) {
    contexts.push_back(preset_context(*cfg.preset, cfg.energy));
  } else {
    contexts.push_back(preset_context(MassPreset::equal, cfg.energy));
    contexts.push_back(preset_context(MassPreset::unequal, cfg.energy));
  }
  if (options.betas.empty()) {
    throw domain_error("validation needs at least one beta");
  }

  struct Case {
    const KinematicContext* ctx;
    VarshniParams p;
    int l;
  };
  std::vector<Case> cases;
  for (const auto& ctx : contexts) {
    for (double beta : options.betas) {
      VarshniParams p = cfg.potential;
      p.beta = beta;
      for (int l = cfg.l.lo; l <= cfg.l.hi; ++l) {
        cases.push_back({&ctx, p, l});
      }
    }
  }

  struct Outcome {
    double phase_diff;
    double amplitude_diff;
    double beta_r;
  };
  const auto outcomes = parallel_map(cases.size(), [&](std::size_t i) {
    const Case& c = cases[i];
    const PhaseShiftResult analytic = phase_shift(*c.ctx, c.p, {c.l});
    const RadialSolution numeric = integrate_radial(*c.ctx, c.p, {c.l});
    const double oracle_phase = extract_phase(numeric, analytic.k, {c.l});
    Outcome o;
    o.phase_diff = std::abs(reduce_mod_pi(analytic.delta - oracle_phase));
    o.amplitude_diff = std::abs(analytic_asymptotic_amplitude(*c.ctx, c.p, {c.l}) - 2.0);
    o.beta_r = validity_score(c.p.beta, numeric.r);
    return o;
  });

  // Transformed-equation residual: one channel (l = 1 when in range) per beta and context.
  const int residual_l = std::clamp(1, cfg.l.lo, cfg.l.hi);
  std::vector<Case> residual_cases;
  for (const auto& ctx : contexts) {
    for (double beta : options.betas) {
      VarshniParams p = cfg.potential;
      p.beta = beta;
      residual_cases.push_back({&ctx, p, residual_l});
    }
  }
  const auto residuals = parallel_map(residual_cases.size(), [&](std::size_t i) {
    const Case& c = residual_cases[i];
    const double k = wave_number(*c.ctx, c.p, {c.l});
    const RadialSolution sol =
        radial_wavefunction(*c.ctx, c.p, {c.l}, certification_grid(c.p.beta, k));
    std::optional<WCoefficients> w;
    if (options.perturb_w2) {
      w = w_coefficients(*c.ctx, c.p, {c.l}, k);
      w->w2 *= 1.01;
    }
    return ode_residual(sol, *c.ctx, c.p, {c.l}, w);
  });

  ValidationReport report;
  double worst_phase = 0.0;
  double worst_amplitude = 0.0;
  for (const auto& o : outcomes) {
    worst_phase = std::max(worst_phase, o.phase_diff);
    worst_amplitude = std::max(worst_amplitude, o.amplitude_diff);
    report.max_beta_r = std::max(report.max_beta_r, o.beta_r);
  }
  const double worst_residual = *std::max_element(residuals.begin(), residuals.end());
  report.checks.push_back(
      {"phase_vs_numerov", worst_phase, kPhaseTolerance, worst_phase < kPhaseTolerance});
  report.checks.push_back(
      {"ode_residual", worst_residual, kResidualTolerance, worst_residual < kResidualTolerance});
  report.checks.push_back({"asymptotic_amplitude", worst_amplitude, kAmplitudeTolerance,
                           worst_amplitude < kAmplitudeTolerance});
  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const ValidationCheck& c) { return c.passed; });
  return report;
}

void write_validation(std::ostream& os, const ValidationReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    json checks = json::array();
    for (const auto& c : report.checks) {
      checks.push_back(
          {{"check", c.name}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    const json doc{{"passed", report.passed}, {"max_beta_r", report.max_beta_r}, {"checks", checks}};
    os << doc.dump(2) << '\n';
    return;
  }
  os << "check,worst,tolerance,status\n";
  for (const auto& c : report.checks) {
    write_csv_row(os, {c.name, format_number(c.worst), format_number(c.tolerance),
                       c.passed ? "pass" : "FAIL"});
  }
  os << "max_beta_r," << format_number(report.max_beta_r) << ",,info\n";
}

}  // namespace sscat::cli
