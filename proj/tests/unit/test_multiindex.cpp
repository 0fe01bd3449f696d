#include <doctest.h>

#include <algorithm>
#include <set>

#include "chaos/error.hpp"
#include "chaos/experiments.hpp"
#include "chaos/multiindex.hpp"
#include "oracles.hpp"

using namespace chaos;

namespace {

MultiIndex dense(std::initializer_list<int> v) {
  const std::vector<int> d(v);
  return MultiIndex::from_dense(d);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected chaos::Error");
  return ErrorCode::InvalidArgument;
}

// Brute-force version of the sparse membership rule.
bool admitted(const std::vector<int>& a, const TruncationSpec& spec) {
  int order = 0;
  for (int v : a) order += v;
  if (const auto* first = std::get_if<SparseFirstTruncation>(&spec)) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > first->r[i]) return false;
    }
    return true;
  }
  if (const auto* second = std::get_if<SparseSecondTruncation>(&spec)) {
    if (order == 0) return true;
    const auto& caps = second->rows[static_cast<std::size_t>(order - 1)];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > caps[i]) return false;
    }
    return true;
  }
  return true;
}

}  // namespace

TEST_SUITE("multiindex") {
  TEST_CASE("enumerate examples") {
    CHECK(enumerate(FullTruncation{3, 5}).size() == 56);
    CHECK(enumerate(SparseFirstTruncation{{3, 2, 2, 1, 1}}).size() == 42);
    const SparseSecondTruncation sp2{{{1, 1, 1, 1, 1, 1, 1, 1}, {2, 2, 2, 2, 0, 0, 0, 0}}};
    CHECK(enumerate(sp2).size() == 19);
    const auto zero = enumerate(FullTruncation{0, 4});
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].is_zero());
  }

  TEST_CASE("count examples") {
    CHECK(count(FullTruncation{2, 8}) == 45);
    CHECK(count(SparseFirstTruncation{{2, 2, 2, 2, 1, 1, 1, 1}}) == 41);
    CHECK(count(FullTruncation{5, 16}) == 20349);
  }

  TEST_CASE("full count equals a dynamic-programming count for p + k <= 24") {
    for (int k = 1; k <= 24; ++k) {
      for (int p = 0; p + k <= 24; ++p) {
        CHECK(count(FullTruncation{p, k}) == oracle::count_dense(k, p));
      }
    }
  }

  TEST_CASE("full enumeration matches brute force and binomial") {
    for (int k = 1; k <= 7; ++k) {
      for (int p = 0; p + k <= 12; ++p) {
        const auto set = enumerate(FullTruncation{p, k});
        CHECK(set.size() == binomial(static_cast<std::uint64_t>(k + p), static_cast<std::uint64_t>(p)));
        std::set<std::vector<int>> expected;
        for (const auto& a : oracle::all_dense(k, p)) expected.insert(a);
        std::set<std::vector<int>> got;
        for (const auto& alpha : set) got.insert(alpha.to_dense(static_cast<std::size_t>(k)));
        CHECK(got == expected);
      }
    }
  }

  TEST_CASE("sparse enumeration matches brute-force filtering") {
    for (int n = 1; n <= kSparsePresetCount; ++n) {
      const auto spec = sparse_preset(n);
      const int k = basis_count(spec), p = max_order(spec);
      if (k > 16) continue;  // brute force over (k + p choose p) stays small below this
      std::set<std::vector<int>> expected;
      for (const auto& a : oracle::all_dense(k, p)) {
        if (admitted(a, spec)) expected.insert(a);
      }
      std::set<std::vector<int>> got;
      for (const auto& alpha : enumerate(spec)) got.insert(alpha.to_dense(static_cast<std::size_t>(k)));
      CHECK_MESSAGE(got == expected, "sp" << n);
    }
  }

  TEST_CASE("published sparse index counts") {
    const std::size_t expected[] = {41, 19,  141, 27, 537, 69, 127, 37, 763,
                                    45, 303, 32,  40, 92,  599, 36, 44, 98};
    for (int n = 1; n <= kSparsePresetCount; ++n) {
      CHECK_MESSAGE(count(sparse_preset(n)) == expected[n - 1], "sp" << n);
    }
  }

  TEST_CASE("blank slot in the third row reads as zero") {
    // Filling the blank with 2 instead would change both published counts.
    const SparseSecondTruncation sp12_alt{{{1, 1, 1, 1, 1, 1, 1, 1},
                                           {2, 2, 2, 2, 0, 0, 0, 0},
                                           {3, 3, 2, 2, 0, 0, 0, 0},
                                           {4, 3, 0, 0, 0, 0, 0, 0}}};
    CHECK(count(sparse_preset(12)) == 32);
    CHECK(count(sp12_alt) != 32);
    auto sp16_alt = std::get<SparseSecondTruncation>(sparse_preset(16));
    sp16_alt.rows[2][3] = 2;
    CHECK(count(sparse_preset(16)) == 36);
    CHECK(count(sp16_alt) != 36);
  }

  TEST_CASE("sparse sets are subsets of the full set") {
    for (int n = 1; n <= kSparsePresetCount; ++n) {
      const auto spec = sparse_preset(n);
      const auto full = enumerate(FullTruncation{max_order(spec), basis_count(spec)});
      for (const auto& alpha : enumerate(spec)) CHECK(full.contains(alpha));
    }
  }

  TEST_CASE("second-order caps min(j, r_i) give a subset of the first-order set") {
    const std::vector<int> r{3, 2, 2, 1, 1};
    SparseSecondTruncation second;
    for (int j = 1; j <= 3; ++j) {
      std::vector<int> row;
      for (int v : r) row.push_back(std::min(j, v));
      second.rows.push_back(row);
    }
    const auto first = enumerate(SparseFirstTruncation{r});
    const auto sub = enumerate(second);
    CHECK(sub.size() <= first.size());
    for (const auto& alpha : sub) CHECK(first.contains(alpha));
  }

  TEST_CASE("canonical order: by order, then lexicographic on (alpha_1, alpha_2, ...)") {
    const auto set = enumerate(FullTruncation{2, 2});
    std::vector<std::string> labels;
    for (const auto& a : set) labels.push_back(a.label());
    CHECK(labels == std::vector<std::string>{"0", "a2:1", "a1:1", "a2:2", "a1:1|a2:1", "a1:2"});
    for (std::size_t i = 1; i < set.size(); ++i) CHECK(set[i - 1] < set[i]);
  }

  TEST_CASE("enumerate is deterministic") {
    const auto a = enumerate(sparse_preset(9));
    const auto b = enumerate(sparse_preset(9));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(a[0].is_zero());
  }

  TEST_CASE("decrement") {
    CHECK(dense({2, 0, 1}).decrement(1) == dense({1, 0, 1}));
    CHECK(dense({1}).decrement(1).is_zero());
    CHECK(code_of([] { (void)dense({0, 3}).decrement(1); }) == ErrorCode::CoordinateNotPositive);
  }

  TEST_CASE("characteristic set") {
    using V = std::vector<MultiIndex::Coordinate>;
    CHECK(dense({2, 0, 1, 4}).characteristic_set() == V{1, 1, 3, 4, 4, 4, 4});
    CHECK(MultiIndex::unit(7).characteristic_set() == V{7});
    CHECK(dense({0, 2}).characteristic_set() == V{2, 2});
    CHECK(code_of([] { (void)MultiIndex{}.characteristic_set(); }) == ErrorCode::EmptyIndex);
  }

  TEST_CASE("order, factorial, storage") {
    const auto a = dense({2, 0, 3});
    CHECK(a.order() == 5);
    CHECK(a.factorial() == 12);
    CHECK(a.entries().size() == 2);
    CHECK(a.max_coordinate() == 3);
    CHECK(MultiIndex::unit(1).increment(1).factorial() == 2);
    CHECK(MultiIndex::from_entries({{1, 20}}).factorial() == 2432902008176640000ull);
    CHECK(code_of([] { (void)MultiIndex::from_entries({{1, 21}}).factorial(); }) ==
          ErrorCode::OrderTooLarge);
  }

  TEST_CASE("labels round-trip") {
    for (const auto& alpha : enumerate(FullTruncation{3, 4})) {
      CHECK(MultiIndex::parse_label(alpha.label()) == alpha);
    }
    CHECK(dense({2, 0, 1}).label() == "a1:2|a3:1");
    CHECK(MultiIndex{}.label() == "0");
    CHECK(code_of([] { (void)MultiIndex::parse_label("a1:0"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { (void)MultiIndex::parse_label("b2"); }) == ErrorCode::ParseError);
  }

  TEST_CASE("sparse index text") {
    const auto first = parse_sparse_index("3,2,2,1,1");
    CHECK(truncation_token(first) == "sp1");
    CHECK(count(first) == 42);
    CHECK(format_sparse_index(first) == "3,2,2,1,1");
    const auto second = parse_sparse_index("1,1,1,1,1;2,2,2,1,0;3,2,0,0,0");
    CHECK(truncation_token(second) == "sp2");
    CHECK(max_order(second) == 3);
    CHECK(format_sparse_index(second) == "1,1,1,1,1;2,2,2,1,0;3,2,0,0,0");
    CHECK(code_of([] { (void)parse_sparse_index("2,3,1"); }) == ErrorCode::InvalidSparseIndex);
    CHECK(code_of([] { (void)parse_sparse_index("1,1;3,0"); }) == ErrorCode::InvalidSparseIndex);
    CHECK(code_of([] { (void)parse_sparse_index("1,x"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { validate(SparseFirstTruncation{{1, 2}}); }) == ErrorCode::InvalidSparseIndex);
  }

  TEST_CASE("index set lookup") {
    const auto set = enumerate(FullTruncation{2, 3});
    for (std::size_t i = 0; i < set.size(); ++i) CHECK(set.find(set[i]) == static_cast<std::ptrdiff_t>(i));
    CHECK(set.find(MultiIndex::unit(4)) == -1);
    CHECK(set.max_order() == 2);
    CHECK(set.max_coordinate() == 3);
    CHECK(code_of([] { IndexSet dup({MultiIndex{}, MultiIndex{}}); }) == ErrorCode::InvalidArgument);
  }
}
