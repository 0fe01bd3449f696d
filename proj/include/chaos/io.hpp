#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaos/analysis.hpp"
#include "chaos/experiments.hpp"
#include "chaos/propagator.hpp"

namespace chaos {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Shortest-safe text for a double: printf "%.17g".
std::string format_real(double value);
/// Strict parse of a full field; throws ParseError.
double parse_real(std::string_view text);

/// Provenance attached to JSON outputs.
struct RunMetadata {
  std::string command;
  double rtol = 0.0;
  double atol = 0.0;
  std::optional<std::uint64_t> seed;
};

/// Header "t,<label>,..." then one row per grid time.
void write_solution_csv(std::ostream& out, const ChaosSolution& sol);
ChaosSolution read_solution_csv(std::istream& in);
void write_solution_json(std::ostream& out, const ChaosSolution& sol, const RunMetadata& meta);

/// Columns: basis,p,k,truncation,sparse_index,n_coeff,error_at_T,error_max,rtol,atol,wall_time_s.
void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);
std::vector<ExperimentReport> read_reports_csv(std::istream& in);
void write_reports_json(std::ostream& out, const std::vector<ExperimentReport>& reports,
                        const RunMetadata& meta);

/// Columns: t,exact_var,approx_var,abs_err.
void write_error_curve_csv(std::ostream& out, const ErrorCurve& curve);
ErrorCurve read_error_curve_csv(std::istream& in);

/// Splits one CSV record; understands double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace chaos
