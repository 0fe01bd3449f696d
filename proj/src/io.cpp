#include "chaos/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "chaos/error.hpp"

namespace chaos {

namespace {

constexpr const char* kReportHeader =
    "basis,p,k,truncation,sparse_index,n_coeff,error_at_T,error_max,rtol,atol,wall_time_s";
constexpr const char* kCurveHeader = "t,exact_var,approx_var,abs_err";

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

long parse_integer(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  }
  return v;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!next_line(in, line) || line != header) {
    throw Error(ErrorCode::ParseError, "expected header '" + std::string(header) + "'");
  }
}

nlohmann::json metadata_json(const RunMetadata& meta) {
  nlohmann::json m{{"tool", "chaos"},
                   {"version", kToolVersion},
                   {"command", meta.command},
                   {"rtol", meta.rtol},
                   {"atol", meta.atol}};
  m["seed"] = meta.seed ? nlohmann::json(*meta.seed) : nlohmann::json(nullptr);
  return m;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_real(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quote");
  return fields;
}

void write_solution_csv(std::ostream& out, const ChaosSolution& sol) {
  out << 't';
  for (const auto& alpha : sol.index_set) out << ',' << alpha.label();
  out << '\n';
  for (std::size_t m = 0; m < sol.grid.size(); ++m) {
    out << format_real(sol.grid[m]);
    for (double v : sol.coeffs[m]) out << ',' << format_real(v);
    out << '\n';
  }
}

ChaosSolution read_solution_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw Error(ErrorCode::ParseError, "empty solution CSV");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "t") throw Error(ErrorCode::ParseError, "first column must be t");
  std::vector<MultiIndex> indices;
  for (std::size_t i = 1; i < header.size(); ++i) indices.push_back(MultiIndex::parse_label(header[i]));

  ChaosSolution sol;
  sol.index_set = IndexSet(indices);
  // The file's column order need not be canonical.
  std::vector<std::size_t> slot(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    slot[i] = static_cast<std::size_t>(sol.index_set.find(indices[i]));
  }
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw Error(ErrorCode::ParseError, "ragged solution row");
    sol.grid.push_back(parse_real(fields[0]));
    std::vector<double> row(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) row[slot[i]] = parse_real(fields[i + 1]);
    sol.coeffs.push_back(std::move(row));
  }
  return sol;
}

void write_solution_json(std::ostream& out, const ChaosSolution& sol, const RunMetadata& meta) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& alpha : sol.index_set) labels.push_back(alpha.label());
  nlohmann::json doc{{"metadata", metadata_json(meta)},
                     {"indices", labels},
                     {"t", sol.grid},
                     {"coefficients", sol.coeffs},
                     {"stats",
                      {{"accepted", sol.stats.accepted},
                       {"rejected", sol.stats.rejected},
                       {"rhs_evaluations", sol.stats.rhs_evaluations}}}};
  out << doc.dump(2) << '\n';
}

void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << r.basis << ',' << r.p << ',' << r.k << ',' << r.truncation << ','
        << quote_if_needed(r.sparse_index) << ',' << r.n_coeff << ',' << format_real(r.error_at_T)
        << ',' << format_real(r.error_max) << ',' << format_real(r.rtol) << ','
        << format_real(r.atol) << ',' << format_real(r.wall_time_s) << '\n';
  }
}

std::vector<ExperimentReport> read_reports_csv(std::istream& in) {
  expect_header(in, kReportHeader);
  std::vector<ExperimentReport> out;
  std::string line;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw Error(ErrorCode::ParseError, "report row needs 11 fields");
    ExperimentReport r;
    r.basis = f[0];
    r.p = static_cast<int>(parse_integer(f[1]));
    r.k = static_cast<int>(parse_integer(f[2]));
    r.truncation = f[3];
    r.sparse_index = f[4];
    r.n_coeff = static_cast<std::size_t>(parse_integer(f[5]));
    r.error_at_T = parse_real(f[6]);
    r.error_max = parse_real(f[7]);
    r.rtol = parse_real(f[8]);
    r.atol = parse_real(f[9]);
    r.wall_time_s = parse_real(f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_reports_json(std::ostream& out, const std::vector<ExperimentReport>& reports,
                        const RunMetadata& meta) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    rows.push_back({{"basis", r.basis},
                    {"p", r.p},
                    {"k", r.k},
                    {"truncation", r.truncation},
                    {"sparse_index", r.sparse_index},
                    {"n_coeff", r.n_coeff},
                    {"error_at_T", r.error_at_T},
                    {"error_max", r.error_max},
                    {"rtol", r.rtol},
                    {"atol", r.atol},
                    {"wall_time_s", r.wall_time_s}});
  }
  out << nlohmann::json{{"metadata", metadata_json(meta)}, {"rows", rows}}.dump(2) << '\n';
}

void write_error_curve_csv(std::ostream& out, const ErrorCurve& curve) {
  out << kCurveHeader << '\n';
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_real(curve.grid[i]) << ',' << format_real(curve.exact[i]) << ','
        << format_real(curve.approx[i]) << ',' << format_real(curve.values[i]) << '\n';
  }
}

ErrorCurve read_error_curve_csv(std::istream& in) {
  expect_header(in, kCurveHeader);
  ErrorCurve curve;
  std::string line;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw Error(ErrorCode::ParseError, "curve row needs 4 fields");
    curve.grid.push_back(parse_real(f[0]));
    curve.exact.push_back(parse_real(f[1]));
    curve.approx.push_back(parse_real(f[2]));
    curve.values.push_back(parse_real(f[3]));
    if (curve.values.back() > curve.error_max) {
      curve.error_max = curve.values.back();
      curve.argmax = curve.values.size() - 1;
    }
  }
  if (!curve.values.empty()) curve.error_at_T = curve.values.back();
  return curve;
}

}  // namespace chaos
