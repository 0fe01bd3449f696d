#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "chaos/error.hpp"
#include "chaos/io.hpp"

using namespace chaos;

namespace {

ChaosSolution sample_solution() {
  ChaosSolution sol;
  sol.index_set = enumerate(FullTruncation{2, 2});
  sol.grid = {0.0, 0.1, 1.0 / 3.0};
  for (double t : sol.grid) {
    std::vector<double> row;
    for (std::size_t j = 0; j < sol.index_set.size(); ++j) row.push_back(std::exp(t) / (j + 1) - 1e-300 * j);
    sol.coeffs.push_back(row);
  }
  return sol;
}

ExperimentReport sample_report() {
  ExperimentReport r;
  r.basis = "haar";
  r.p = 3;
  r.k = 8;
  r.truncation = "sp12";
  r.sparse_index = "1,1,1,1,1,1,1,1;2,2,2,2,0,0,0,0;3,3,2,0,0,0,0,0";
  r.n_coeff = 32;
  r.error_at_T = 0.1 + 0.2;
  r.error_max = 1.0 / 7.0;
  r.wall_time_s = 0.0123;
  r.rtol = 1e-8;
  r.atol = 1e-10;
  return r;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("format_real round-trips bit for bit") {
    for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23,
                     std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max()}) {
      const double back = parse_real(format_real(v));
      CHECK(back == v);
      CHECK(std::signbit(back) == std::signbit(v));
    }
    CHECK(format_real(0.5) == "0.5");
    CHECK_THROWS_AS(parse_real("1.5x"), Error);
    CHECK_THROWS_AS(parse_real(""), Error);
  }

  TEST_CASE("split_csv_line") {
    CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_csv_line(R"(x,"1,2;3","say ""hi""")") == std::vector<std::string>{"x", "1,2;3", R"(say "hi")"});
    CHECK_THROWS_AS(split_csv_line(R"(a,"open)"), Error);
  }

  TEST_CASE("solution CSV round trip") {
    const auto sol = sample_solution();
    std::stringstream ss;
    write_solution_csv(ss, sol);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header == "t,0,a2:1,a1:1,a2:2,a1:1|a2:1,a1:2");
    const auto back = read_solution_csv(ss);
    CHECK(back.grid == sol.grid);
    CHECK(back.coeffs == sol.coeffs);
    REQUIRE(back.index_set.size() == sol.index_set.size());
    for (std::size_t j = 0; j < sol.index_set.size(); ++j) CHECK(back.index_set[j] == sol.index_set[j]);
  }

  TEST_CASE("malformed solution CSV") {
    std::stringstream empty;
    CHECK_THROWS_AS(read_solution_csv(empty), Error);
    std::stringstream bad_header("x,0\n0,1\n");
    CHECK_THROWS_AS(read_solution_csv(bad_header), Error);
    std::stringstream ragged("t,0,a1:1\n0,1\n");
    CHECK_THROWS_AS(read_solution_csv(ragged), Error);
  }

  TEST_CASE("solution JSON carries metadata") {
    std::stringstream ss;
    write_solution_json(ss, sample_solution(), RunMetadata{"solve --p 2", 1e-8, 1e-10, std::nullopt});
    const auto doc = nlohmann::json::parse(ss.str());
    CHECK(doc["metadata"]["version"] == std::string(kToolVersion));
    CHECK(doc["metadata"]["command"] == "solve --p 2");
    CHECK(doc["metadata"]["seed"].is_null());
    CHECK(doc["metadata"]["rtol"].get<double>() == 1e-8);
    CHECK(doc["indices"].size() == 6);
    CHECK(doc["coefficients"][2][1].get<double>() == sample_solution().coeffs[2][1]);
  }

  TEST_CASE("report CSV round trip with a quoted sparse index") {
    const std::vector<ExperimentReport> reports{sample_report(), [] {
      auto r = sample_report();
      r.truncation = "full";
      r.sparse_index.clear();
      r.basis = "cos";
      return r;
    }()};
    std::stringstream ss;
    write_reports_csv(ss, reports);
    CHECK(ss.str().rfind("basis,p,k,truncation,sparse_index,n_coeff,error_at_T,error_max,rtol,atol,wall_time_s\n", 0) == 0);
    const auto back = read_reports_csv(ss);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back[i].basis == reports[i].basis);
      CHECK(back[i].truncation == reports[i].truncation);
      CHECK(back[i].sparse_index == reports[i].sparse_index);
      CHECK(back[i].n_coeff == reports[i].n_coeff);
      CHECK(back[i].error_at_T == reports[i].error_at_T);
      CHECK(back[i].error_max == reports[i].error_max);
      CHECK(back[i].rtol == reports[i].rtol);
      CHECK(back[i].wall_time_s == reports[i].wall_time_s);
    }
    std::stringstream seeded;
    write_reports_json(seeded, reports, RunMetadata{"table1", 1e-8, 1e-10, 42});
    const auto doc = nlohmann::json::parse(seeded.str());
    CHECK(doc["metadata"]["seed"].get<std::uint64_t>() == 42);
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["sparse_index"] == reports[0].sparse_index);
  }

  TEST_CASE("error curve CSV round trip") {
    ErrorCurve c;
    c.grid = {0.0, 0.5, 1.0};
    c.exact = {0.0, 1.1, 12.696};
    c.approx = {0.0, 1.0, 12.5};
    for (std::size_t i = 0; i < 3; ++i) c.values.push_back(std::abs(c.exact[i] - c.approx[i]));
    std::stringstream ss;
    write_error_curve_csv(ss, c);
    const auto back = read_error_curve_csv(ss);
    CHECK(back.grid == c.grid);
    CHECK(back.exact == c.exact);
    CHECK(back.approx == c.approx);
    CHECK(back.values == c.values);
    CHECK(back.argmax == 2);
    CHECK(back.error_at_T == c.values[2]);
  }
}
