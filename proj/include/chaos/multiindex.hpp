#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace chaos {

/// Finitely supported multi-index alpha = (alpha_1, alpha_2, ...).
///
/// Only positive entries are stored, sorted by coordinate. Coordinates are
/// 1-based to match the basis numbering e_1, e_2, ...
class MultiIndex {
 public:
  using Coordinate = std::uint32_t;
  using Value = std::uint32_t;
  using Entry = std::pair<Coordinate, Value>;

  MultiIndex() = default;

  /// Builds from a dense vector; position i holds alpha_{i+1}.
  static MultiIndex from_dense(std::span<const int> dense);
  /// Builds from (coordinate, value) pairs in any order; zero values are dropped.
  static MultiIndex from_entries(std::vector<Entry> entries);
  static MultiIndex unit(Coordinate i);

  /// alpha_i, zero when i is not in the support.
  Value operator[](Coordinate i) const noexcept;

  std::span<const Entry> entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }

  /// |alpha| = sum of entries.
  std::uint32_t order() const noexcept;
  /// alpha! = prod alpha_i!; exact for order <= 20.
  std::uint64_t factorial() const;
  /// d(alpha) = largest coordinate with a positive entry, 0 for the zero index.
  Coordinate max_coordinate() const noexcept;

  /// alpha^-(i): coordinate i lowered by one.
  MultiIndex decrement(Coordinate i) const;
  /// alpha with coordinate i raised by one.
  MultiIndex increment(Coordinate i) const;

  /// Non-decreasing list in which coordinate i appears alpha_i times.
  std::vector<Coordinate> characteristic_set() const;

  std::vector<int> to_dense(std::size_t k) const;

  /// Compact text: "0" for the zero index, otherwise "a1:2|a3:1".
  std::string label() const;
  static MultiIndex parse_label(std::string_view text);

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Canonical order: ascending |alpha|, then lexicographic on (alpha_1, alpha_2, ...).
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                         const MultiIndex& b) noexcept;

 private:
  std::vector<Entry> entries_;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const noexcept;
};

struct FullTruncation {
  int p = 0;
  int k = 1;
};

/// First-order sparse index r with p = r_1 >= r_2 >= ... >= r_k >= 0.
struct SparseFirstTruncation {
  std::vector<int> r;
};

/// Second-order sparse index: rows[j-1] is the cap vector r^j for |alpha| = j.
struct SparseSecondTruncation {
  std::vector<std::vector<int>> rows;
};

using TruncationSpec =
    std::variant<FullTruncation, SparseFirstTruncation, SparseSecondTruncation>;

int max_order(const TruncationSpec& spec);
int basis_count(const TruncationSpec& spec);
/// Throws InvalidSparseIndex / InvalidArgument when the spec violates its invariants.
void validate(const TruncationSpec& spec);

/// Parses "3,2,2,1,1" (first order) or "1,1,1;2,2,0" (second order).
TruncationSpec parse_sparse_index(std::string_view text);
std::string format_sparse_index(const TruncationSpec& spec);
/// "full", "sp1" or "sp2".
std::string truncation_token(const TruncationSpec& spec);

/// Ordered index set with O(1) ordinal lookup.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts into canonical order; throws InvalidArgument on duplicates.
  explicit IndexSet(std::vector<MultiIndex> indices);

  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& operator[](std::size_t ordinal) const { return indices_[ordinal]; }
  std::span<const MultiIndex> indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  /// Ordinal of alpha, or -1 when absent.
  std::ptrdiff_t find(const MultiIndex& alpha) const;
  bool contains(const MultiIndex& alpha) const { return find(alpha) >= 0; }

  int max_order() const noexcept;
  MultiIndex::Coordinate max_coordinate() const noexcept;

 private:
  std::vector<MultiIndex> indices_;
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> position_;
};

IndexSet enumerate(const TruncationSpec& spec);
std::size_t count(const TruncationSpec& spec);

/// binomial(n, r) in 64 bits; throws InvalidArgument on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

}  // namespace chaos
