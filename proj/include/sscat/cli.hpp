#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sscat/bound.hpp"
#include "sscat/kinematics.hpp"
#include "sscat/potential.hpp"

namespace sscat::cli {

enum class OutputFormat { csv, json };

/// Inclusive range of angular momenta, `lo..hi` on the command line.
struct LRange {
  int lo = 0;
  int hi = 0;
};

inline constexpr int kMaxLSpan = 10000;

/// Parses "7" or "0..20". Throws std::invalid_argument on malformed input,
/// negative l, hi < lo, or a span above kMaxLSpan.
LRange parse_l_range(std::string_view text);

struct RunConfig {
  TwoBodyMasses masses{1.0, 1.0};
  std::optional<double> sigma_override;
  std::optional<MassPreset> preset;
  VarshniParams potential{0.15, 0.15, 0.05};
  double energy = 1.0;
  LRange l{0, 0};
  int n_max = 0;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> out_path;
};

/// Sets masses and sigma override to the preset's values.
void apply_preset(RunConfig& cfg, MassPreset preset);

KinematicContext context_of(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// phase

struct PhaseRecord {
  int l = 0;
  double k = 0;
  double delta = 0;
  double normalization = 0;
  double lambda = 0;
  double validity_score = 0;  ///< beta * max(1, sqrt(l(l+1))) / k
  std::string status;         ///< ok | closed | pole | supercritical
};

/// One record per l in cfg.l; failures per channel land in `status`.
std::vector<PhaseRecord> cmd_phase_shift(const RunConfig& cfg);

void write_phase_records(std::ostream& os, std::span<const PhaseRecord> records,
                         OutputFormat format);

// ---------------------------------------------------------------------------
// table: both mass presets side by side with the reference column

/// Reference phase shifts for a = b = 0.15, E = 1, l = 0..20.
const std::array<double, 21>& table1_equal();
const std::array<double, 21>& table1_unequal();

struct TableRow {
  int l = 0;
  double delta_equal = 0;
  double delta_unequal = 0;
  double table_equal = 0;    ///< NaN outside l = 0..20
  double table_unequal = 0;
};

std::vector<TableRow> cmd_table(const RunConfig& cfg);

void write_table(std::ostream& os, std::span<const TableRow> rows, OutputFormat format);

// ---------------------------------------------------------------------------
// scan-beta

/// Largest beta keeping every channel up to l_max open:
/// sqrt((2 mu (E-a) + sigma (E-a)^2) / (l_max (l_max + 1))).
double feasible_beta_bound(const KinematicContext& ctx, double a, int l_max);

/// `count` points evenly spaced on (0, upper], upper excluded by a hair.
std::vector<double> default_beta_grid(double upper, int count = 200);

/// Qualitative agreement with a reference column: same sign at every l,
/// strictly decreasing from l = 5 to the end, last value within 10%.
bool matches_table_pattern(std::span<const double> column, std::span<const double> reference);

struct BetaScanEntry {
  double beta = 0;
  std::vector<double> delta;           ///< repaired coefficients
  double max_abs_deviation = 0;
  bool pattern_match = false;
  std::vector<double> delta_printed;   ///< coefficients as printed
  double max_abs_deviation_printed = 0;
  bool pattern_match_printed = false;
};

struct BetaScanReport {
  MassPreset reference = MassPreset::equal;
  double feasible_upper = 0;
  std::vector<BetaScanEntry> entries;
  std::size_t best = 0;  ///< index of the smallest max-abs deviation (repaired)
  bool any_pattern_match = false;
};

/// Evaluates l = 0..20 at every feasible beta of the grid and compares with
/// the reference column for cfg.preset (equal when unset). Throws
/// sscat::domain_error when no grid point is feasible.
BetaScanReport cmd_scan_beta(const RunConfig& cfg, std::span<const double> beta_grid);

void write_scan_report(std::ostream& os, const BetaScanReport& report, OutputFormat format);

// ---------------------------------------------------------------------------
// bound

/// States for every l in cfg.l and n <= n_max, sorted by (l, n).
std::vector<BoundState> cmd_bound_states(const RunConfig& cfg, int n_max);

void write_bound_states(std::ostream& os, std::span<const BoundState> states, OutputFormat format);

// ---------------------------------------------------------------------------
// validate

struct ValidationOptions {
  std::vector<double> betas{0.01, 0.025, 0.05};
  bool perturb_w2 = false;  ///< scale w2 by 1.01 in the residual check
};

struct ValidationCheck {
  std::string name;
  double worst = 0;
  double tolerance = 0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  double max_beta_r = 0;
  bool passed = false;
};

/// Runs the analytic-vs-Numerov phase comparison, the transformed-equation
/// residual and the asymptotic amplitude check over cfg.l x betas x presets
/// (cfg.preset alone when set, otherwise both).
ValidationReport cmd_validate(const RunConfig& cfg, const ValidationOptions& options = {});

void write_validation(std::ostream& os, const ValidationReport& report, OutputFormat format);

// ---------------------------------------------------------------------------

/// Grid used to certify the w coefficients: z in [0.01, 0.8],
/// dz = min(5e-4, 0.03 beta / k), which keeps k dr below 0.15 at z = 0.8.
Eigen::VectorXd certification_grid(double beta, double k);

/// 12 significant digits; "nan" for non-finite values.
std::string format_number(double value);

}  // namespace sscat::cli
