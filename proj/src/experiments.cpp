#include "chaos/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "chaos/error.hpp"
#include "chaos/parallel.hpp"
#include "chaos/propagator.hpp"

namespace chaos {

namespace {

std::vector<int> cat(std::vector<int> head, const std::vector<int>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

std::vector<int> fill(int value, int times) {
  return std::vector<int>(static_cast<std::size_t>(times), value);
}

// Second-order index from the caps for |alpha| = 2, 3, ...; the order-1 row
// is all ones. Rows are zero-padded to length k.
SparseSecondTruncation second(std::vector<std::vector<int>> rows, int k) {
  rows.insert(rows.begin(), fill(1, k));
  for (auto& r : rows) r.resize(static_cast<std::size_t>(k), 0);
  return {std::move(rows)};
}

const TableRow kRows[] = {
    {2, 1, 3, 0, {6.04, 6.04, 5.31, 5.31}},
    {4, 1, 5, 0, {5.68, 5.68, 5.31, 5.31}},
    {8, 1, 9, 0, {5.49, 5.49, 5.30, 5.30}},
    {16, 1, 17, 0, {5.40, 5.40, 5.31, 5.31}},
    {32, 1, 33, 0, {5.35, 5.35, 5.30, 5.30}},
    {64, 1, 65, 0, {5.33, 5.33, 5.31, 5.31}},
    {2, 2, 6, 0, {3.04, 3.04, 1.61, 1.83}},
    {4, 2, 15, 0, {2.35, 2.35, 1.61, 1.76}},
    {8, 2, 45, 0, {1.98, 1.98, 1.61, 1.69}},
    {8, 2, 41, 1, {1.99, 1.99, 1.61, 1.69}},
    {8, 2, 19, 2, {2.16, 2.16, 1.61, 1.72}},
    {16, 2, 153, 0, {1.80, 1.80, 1.61, 1.65}},
    {16, 2, 141, 3, {1.80, 1.80, 1.61, 1.65}},
    {16, 2, 27, 4, {2.07, 2.07, 1.61, 1.67}},
    {32, 2, 561, 0, {1.71, 1.71, 1.61, 1.63}},
    {32, 2, 537, 5, {1.71, 1.71, 1.61, 1.63}},
    {32, 2, 69, 6, {1.84, 1.84, 1.61, 1.64}},
    {64, 2, 2145, 0, {1.66, 1.66, 1.61, 1.62}},
    {2, 3, 10, 0, {2.15, 2.15, 0.38, 1.35}},
    {4, 3, 35, 0, {1.29, 1.29, 0.38, 1.01}},
    {8, 3, 165, 0, {0.84, 0.84, 0.38, 0.76}},
    {8, 3, 127, 7, {0.85, 0.85, 0.37, 0.76}},
    {8, 3, 37, 8, {1.11, 1.11, 0.38, 0.86}},
    {16, 3, 969, 0, {0.61, 0.61, 0.38, 0.58}},
    {16, 3, 763, 9, {0.62, 0.62, 0.38, 0.59}},
    {16, 3, 45, 10, {1.02, 1.02, 0.38, 0.76}},
    {2, 4, 15, 0, {1.94, 1.94, 0.07, 1.32}},
    {4, 4, 70, 0, {1.04, 1.04, 0.07, 0.87}},
    {8, 4, 495, 0, {0.57, 0.57, 0.07, 0.56}},
    {8, 4, 303, 11, {0.57, 0.57, 0.07, 0.52}},
    {8, 4, 32, 12, {0.96, 0.96, 0.07, 0.75}},
    {16, 4, 4845, 0, {0.32, 0.32, 0.07, 0.33}},
    {16, 4, 40, 13, {0.87, 0.87, 0.07, 0.67}},
    {32, 4, 92, 14, {0.59, 0.59, 0.07, 0.45}},
    {2, 5, 21, 0, {1.91, 1.91, 0.01, 1.27}},
    {4, 5, 126, 0, {1.00, 1.00, 0.01, 0.87}},
    {8, 5, 1287, 0, {0.51, 0.51, 0.01, 0.53}},
    {8, 5, 599, 15, {0.51, 0.51, 0.01, 0.55}},
    {8, 5, 36, 16, {0.92, 0.92, 0.01, 0.74}},
    {16, 5, 20349, 0, {0.26, 0.26, 0.01, 0.28}},
    {16, 5, 44, 17, {0.83, 0.83, 0.01, 0.65}},
    {32, 5, 98, 18, {0.55, 0.55, 0.01, 0.42}},
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Variance of the order-p expansion with every basis term kept:
// e^{2t} sum_{n=1}^p t^n / n! for GBM(1, 1, 1).
double order_p_variance(int p, double t) {
  double sum = 0.0, term = 1.0;
  for (int n = 1; n <= p; ++n) {
    term *= t / n;
    sum += term;
  }
  return std::exp(2.0 * t) * sum;
}

double exact_variance(double t) { return gbm_variance_exact(1.0, 1.0, 1.0, t); }

}  // namespace

ToleranceSpec experiment_tolerances() {
  ToleranceSpec tol;
  tol.rtol = 1e-8;
  tol.atol = 1e-10;
  return tol;
}

TruncationSpec sparse_preset(int number) {
  switch (number) {
    case 1: return SparseFirstTruncation{{2, 2, 2, 2, 1, 1, 1, 1}};
    case 2: return second({{2, 2, 2, 2}}, 8);
    case 3: return SparseFirstTruncation{cat(fill(2, 4), fill(1, 12))};
    case 4: return second({{2, 2, 2, 2}}, 16);
    case 5: return SparseFirstTruncation{cat(fill(2, 8), fill(1, 24))};
    case 6: return second({fill(2, 8)}, 32);
    case 7: return SparseFirstTruncation{{3, 3, 2, 2, 1, 1, 1, 1}};
    case 8: return second({{2, 2, 2, 2}, {3, 3, 2, 2}}, 8);
    case 9: return SparseFirstTruncation{cat({3, 3, 2, 2}, fill(1, 12))};
    case 10: return second({{2, 2, 2, 2}, {3, 3, 2, 2}}, 16);
    case 11: return SparseFirstTruncation{{4, 4, 2, 2, 1, 1, 1, 1}};
    // The published third row reads (3,3,2,_,0,...); the blank is taken as 0.
    case 12: return second({{2, 2, 2, 2}, {3, 3, 2}, {4, 3}}, 8);
    case 13: return second({{2, 2, 2, 2}, {3, 3, 2}, {4, 3}}, 16);
    case 14: return second({fill(2, 8), {3, 3, 2, 2}, {4, 4}}, 32);
    case 15: return SparseFirstTruncation{{5, 5, 2, 2, 1, 1, 1, 1}};
    case 16: return second({{2, 2, 2, 2}, {3, 3, 2}, {4, 3}, {5, 3}}, 8);
    case 17: return second({{2, 2, 2, 2}, {3, 3, 2}, {4, 3}, {5, 3}}, 16);
    case 18: return second({fill(2, 8), {3, 3, 2, 2}, {4, 4}, {5, 5}}, 32);
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown sparse preset sp" + std::to_string(number));
}

TruncationSpec resolve_sparse(std::string_view text) {
  if (text.size() > 2 && text.substr(0, 2) == "sp" &&
      text.find_first_not_of("0123456789", 2) == std::string_view::npos) {
    return sparse_preset(std::stoi(std::string(text.substr(2))));
  }
  return parse_sparse_index(text);
}

TruncationSpec TableRow::spec() const {
  if (sparse == 0) return FullTruncation{p, k};
  return sparse_preset(sparse);
}

std::string TableRow::type() const {
  return sparse == 0 ? std::string("full") : "sp" + std::to_string(sparse);
}

std::span<const TableRow> table1_rows() { return kRows; }

std::vector<std::size_t> select_rows(std::string_view filter) {
  const auto rows = table1_rows();
  std::vector<std::size_t> out;
  if (filter == "all") {
    for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(i);
    return out;
  }
  if (filter == "desk") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].desk_scale()) out.push_back(i);
    }
    return out;
  }
  auto parse_number = [&](std::string_view s) -> std::size_t {
    const auto first = s.find_first_not_of(' ');
    s = first == std::string_view::npos ? std::string_view{} : s.substr(first, s.find_last_not_of(' ') - first + 1);
    std::size_t value = 0;
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "bad row selector '" + std::string(filter) + "'");
    }
    for (char c : s) value = value * 10 + static_cast<std::size_t>(c - '0');
    if (value < 1 || value > rows.size()) {
      throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(value) + " out of range");
    }
    return value - 1;
  };
  std::size_t pos = 0;
  while (pos <= filter.size()) {
    const auto comma = std::min(filter.find(',', pos), filter.size());
    const auto item = filter.substr(pos, comma - pos);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_number(item));
    } else {
      const auto lo = parse_number(item.substr(0, dash));
      const auto hi = parse_number(item.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::ParseError, "descending row range");
      for (auto i = lo; i <= hi; ++i) out.push_back(i);
    }
    pos = comma + 1;
  }
  return out;
}

ExperimentReport run_table_row(const TableRow& row, BasisKind basis, const ToleranceSpec& tol,
                               std::size_t grid_points) {
  const auto start = std::chrono::steady_clock::now();
  const auto spec = row.spec();
  const auto grid = uniform_grid(1.0, grid_points);
  const auto sol = solve(SdeModel::gbm(1.0, 1.0, 1.0), spec, BasisSpec{basis, 1.0}, grid, tol);
  const auto curve = error_curve(sol, exact_variance);

  ExperimentReport r;
  r.basis = std::string(basis_token(basis));
  r.p = row.p;
  r.k = row.k;
  r.truncation = row.type();
  if (row.sparse != 0) r.sparse_index = format_sparse_index(spec);
  r.n_coeff = sol.index_set.size();
  r.error_at_T = curve.error_at_T;
  r.error_max = curve.error_max;
  r.rtol = tol.rtol;
  r.atol = tol.atol;
  r.wall_time_s = seconds_since(start);
  return r;
}

std::vector<ExperimentReport> run_table(std::span<const std::size_t> rows,
                                        std::span<const BasisKind> bases,
                                        const ToleranceSpec& tol, std::size_t grid_points) {
  const auto catalog = table1_rows();
  std::vector<ExperimentReport> out(rows.size() * bases.size());
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = run_table_row(catalog[rows[i / bases.size()]], bases[i % bases.size()], tol,
                           grid_points);
  });
  return out;
}

FigureCurve run_figure_curve(BasisKind basis, int p, int k, const ToleranceSpec& tol,
                             std::size_t grid_points) {
  const auto grid = uniform_grid(1.0, grid_points);
  const auto sol = solve(SdeModel::gbm(1.0, 1.0, 1.0), FullTruncation{p, k},
                         BasisSpec{basis, 1.0}, grid, tol);
  FigureCurve fc;
  fc.basis = basis;
  fc.p = p;
  fc.k = k;
  fc.curve = error_curve(sol, exact_variance);
  fc.argmax_t = fc.curve.grid[fc.curve.argmax];

  const bool power_of_two = k > 0 && (k & (k - 1)) == 0;
  if (basis == BasisKind::Haar && power_of_two && (grid_points - 1) % static_cast<std::size_t>(k) == 0) {
    const std::size_t stride = (grid_points - 1) / static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < grid_points; i += stride) {
      const double t = fc.curve.grid[i];
      fc.dyadic_max_error = std::max(fc.dyadic_max_error, fc.curve.values[i]);
      fc.dyadic_order_error =
          std::max(fc.dyadic_order_error, std::abs(exact_variance(t) - order_p_variance(p, t)));
    }
  }
  return fc;
}

RateStudy run_rates(std::span<const std::size_t> trig_ks, std::span<const int> haar_levels,
                    int measured_p, std::span<const std::size_t> measured_ks, std::size_t sweep_k,
                    int sweep_pmax, const ToleranceSpec& tol) {
  RateStudy st;
  const BasisSpec trig{BasisKind::Trigonometric, 1.0};
  const BasisSpec haar{BasisKind::Haar, 1.0};
  const BasisSpec cosine{BasisKind::Cosine, 1.0};

  st.trig_ks.assign(trig_ks.begin(), trig_ks.end());
  std::vector<double> xs;
  for (auto k : trig_ks) {
    st.trig_tail.push_back(tail_sum(trig, k, 1.0));
    xs.push_back(static_cast<double>(k));
  }
  if (xs.size() >= 3) st.trig_fit = rate_fit(xs, st.trig_tail);

  st.haar_levels.assign(haar_levels.begin(), haar_levels.end());
  xs.clear();
  for (int n : haar_levels) {
    const std::size_t k = std::size_t{1} << n;
    st.haar_tail.push_back(tail_sum(haar, k, 1.0));
    xs.push_back(static_cast<double>(k));
  }
  for (std::size_t i = 1; i < st.haar_tail.size(); ++i) {
    st.haar_ratios.push_back(st.haar_tail[i] / st.haar_tail[i - 1]);
  }
  if (xs.size() >= 3) st.haar_fit = rate_fit(xs, st.haar_tail);

  st.measured_p = measured_p;
  st.measured_ks.assign(measured_ks.begin(), measured_ks.end());
  const double floor = std::abs(exact_variance(1.0) - order_p_variance(measured_p, 1.0));
  const std::vector<double> endpoints{0.0, 1.0};
  xs.clear();
  bool positive = true;
  for (auto k : measured_ks) {
    const auto sol = solve(SdeModel::gbm(1.0, 1.0, 1.0),
                           FullTruncation{measured_p, static_cast<int>(k)}, cosine, endpoints, tol);
    const double excess = std::abs(exact_variance(1.0) - moments(sol, 1.0).variance) - floor;
    st.measured_excess.push_back(excess);
    positive = positive && excess > 0.0;
    xs.push_back(static_cast<double>(k));
  }
  if (positive && xs.size() >= 3) st.measured_fit = rate_fit(xs, st.measured_excess);

  st.sweep_k = sweep_k;
  for (int p = 1; p <= sweep_pmax; ++p) {
    const auto sol = solve(SdeModel::gbm(1.0, 1.0, 1.0),
                           FullTruncation{p, static_cast<int>(sweep_k)}, cosine, endpoints, tol);
    st.p_sweep.push_back(std::abs(exact_variance(1.0) - moments(sol, 1.0).variance));
  }
  return st;
}

}  // namespace chaos
