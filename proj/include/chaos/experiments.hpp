#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaos/analysis.hpp"
#include "chaos/basis.hpp"
#include "chaos/integrator.hpp"
#include "chaos/multiindex.hpp"

namespace chaos {

/// Tolerances used by the table, figure and rate experiments.
ToleranceSpec experiment_tolerances();

/// The 18 published sparse indices, addressed as "sp1".."sp18".
inline constexpr int kSparsePresetCount = 18;
TruncationSpec sparse_preset(int number);
/// Resolves "sp7" to the preset, anything else is parsed as index text.
TruncationSpec resolve_sparse(std::string_view text);

/// One configuration of the GBM(1, 1, 1) error table with its published
/// values (columns: trig error at T, trig max, Haar error at T, Haar max).
struct TableRow {
  int k = 0;
  int p = 0;
  std::size_t n_coeff = 0;
  int sparse = 0;  // 0 = full truncation, else preset number
  std::array<double, 4> published{};

  TruncationSpec spec() const;
  /// "full" or "spN".
  std::string type() const;
  /// Rows small enough to solve in seconds.
  bool desk_scale() const { return sparse != 0 || n_coeff <= 1300; }
};

std::span<const TableRow> table1_rows();

/// "all", "desk", or a list of 1-based row numbers and ranges ("1-6,9").
std::vector<std::size_t> select_rows(std::string_view filter);

struct ExperimentReport {
  std::string basis;
  int p = 0;
  int k = 0;
  std::string truncation;    // "full" or "spN"
  std::string sparse_index;  // index text, empty for full
  std::size_t n_coeff = 0;
  double error_at_T = 0.0;
  double error_max = 0.0;
  double wall_time_s = 0.0;
  double rtol = 0.0;
  double atol = 0.0;
};

/// Solves GBM(1, 1, 1) for one row and basis and measures the variance error
/// on a uniform grid of `grid_points` points over [0, 1].
ExperimentReport run_table_row(const TableRow& row, BasisKind basis, const ToleranceSpec& tol,
                               std::size_t grid_points = 1001);

/// Runs rows x bases on the worker pool; output is ordered row-major
/// (all bases of row 1, then row 2, ...), independent of scheduling.
std::vector<ExperimentReport> run_table(std::span<const std::size_t> rows,
                                        std::span<const BasisKind> bases,
                                        const ToleranceSpec& tol, std::size_t grid_points = 1001);

/// Error-over-time curve for GBM(1, 1, 1), full truncation (p, k).
struct FigureCurve {
  BasisKind basis = BasisKind::Cosine;
  int p = 0;
  int k = 0;
  ErrorCurve curve;
  double argmax_t = 0.0;
  /// Haar only: worst error at the points j / k (k a power of two), else 0.
  double dyadic_max_error = 0.0;
  /// Error on the same points with all basis terms kept (k -> infinity), i.e.
  /// the pure order-p truncation error there.
  double dyadic_order_error = 0.0;
};

FigureCurve run_figure_curve(BasisKind basis, int p, int k, const ToleranceSpec& tol,
                             std::size_t grid_points = 1001);

struct RateStudy {
  std::vector<std::size_t> trig_ks;
  std::vector<double> trig_tail;
  RateFit trig_fit;

  std::vector<int> haar_levels;  // k = 2^n
  std::vector<double> haar_tail;
  std::vector<double> haar_ratios;  // tail(n + 1) / tail(n)
  RateFit haar_fit;

  /// Measured variance error at t = 1 minus the order-p floor, cosine basis.
  int measured_p = 0;
  std::vector<std::size_t> measured_ks;
  std::vector<double> measured_excess;
  std::optional<RateFit> measured_fit;

  /// error_at_T for p = 1.. at fixed k; expected to decrease.
  std::size_t sweep_k = 0;
  std::vector<double> p_sweep;
};

RateStudy run_rates(std::span<const std::size_t> trig_ks, std::span<const int> haar_levels,
                    int measured_p, std::span<const std::size_t> measured_ks, std::size_t sweep_k,
                    int sweep_pmax, const ToleranceSpec& tol);

}  // namespace chaos
