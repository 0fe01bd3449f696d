#include "chaos/multiindex.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "chaos/error.hpp"

namespace chaos {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSparseIndex: return "InvalidSparseIndex";
    case ErrorCode::CoordinateNotPositive: return "CoordinateNotPositive";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::NotGbm: return "NotGbm";
    case ErrorCode::NotBm: return "NotBm";
    case ErrorCode::TimeNotOnGrid: return "TimeNotOnGrid";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex MultiIndex::from_dense(std::span<const int> dense) {
  MultiIndex a;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] < 0) {
      throw Error(ErrorCode::InvalidArgument, "negative multi-index entry");
    }
    if (dense[i] > 0) {
      a.entries_.emplace_back(static_cast<Coordinate>(i + 1),
                              static_cast<Value>(dense[i]));
    }
  }
  return a;
}

MultiIndex MultiIndex::from_entries(std::vector<Entry> entries) {
  std::erase_if(entries, [](const Entry& e) { return e.second == 0; });
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first == 0) {
      throw Error(ErrorCode::InvalidArgument, "coordinates are 1-based");
    }
    if (i > 0 && entries[i].first == entries[i - 1].first) {
      throw Error(ErrorCode::InvalidArgument, "duplicate coordinate");
    }
  }
  MultiIndex a;
  a.entries_ = std::move(entries);
  return a;
}

MultiIndex MultiIndex::unit(Coordinate i) {
  if (i == 0) throw Error(ErrorCode::InvalidArgument, "coordinates are 1-based");
  MultiIndex a;
  a.entries_.emplace_back(i, 1);
  return a;
}

MultiIndex::Value MultiIndex::operator[](Coordinate i) const noexcept {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), i,
      [](const Entry& e, Coordinate c) { return e.first < c; });
  return (it != entries_.end() && it->first == i) ? it->second : 0;
}

std::uint32_t MultiIndex::order() const noexcept {
  std::uint32_t n = 0;
  for (const auto& e : entries_) n += e.second;
  return n;
}

std::uint64_t MultiIndex::factorial() const {
  if (order() > 20) {
    throw Error(ErrorCode::OrderTooLarge, "alpha! is exact only for |alpha| <= 20");
  }
  std::uint64_t f = 1;
  for (const auto& e : entries_) {
    for (Value v = 2; v <= e.second; ++v) f *= v;
  }
  return f;
}

MultiIndex::Coordinate MultiIndex::max_coordinate() const noexcept {
  return entries_.empty() ? 0 : entries_.back().first;
}

MultiIndex MultiIndex::decrement(Coordinate i) const {
  MultiIndex a = *this;
  auto it = std::find_if(a.entries_.begin(), a.entries_.end(),
                         [i](const Entry& e) { return e.first == i; });
  if (it == a.entries_.end()) {
    throw Error(ErrorCode::CoordinateNotPositive,
                "alpha_" + std::to_string(i) + " = 0 cannot be decremented");
  }
  if (--it->second == 0) a.entries_.erase(it);
  return a;
}

MultiIndex MultiIndex::increment(Coordinate i) const {
  if (i == 0) throw Error(ErrorCode::InvalidArgument, "coordinates are 1-based");
  MultiIndex a = *this;
  auto it = std::lower_bound(
      a.entries_.begin(), a.entries_.end(), i,
      [](const Entry& e, Coordinate c) { return e.first < c; });
  if (it != a.entries_.end() && it->first == i) {
    ++it->second;
  } else {
    a.entries_.insert(it, Entry{i, 1});
  }
  return a;
}

std::vector<MultiIndex::Coordinate> MultiIndex::characteristic_set() const {
  if (entries_.empty()) {
    throw Error(ErrorCode::EmptyIndex, "zero index has no characteristic set");
  }
  std::vector<Coordinate> out;
  out.reserve(order());
  for (const auto& [coord, value] : entries_) out.insert(out.end(), value, coord);
  return out;
}

std::vector<int> MultiIndex::to_dense(std::size_t k) const {
  if (max_coordinate() > k) {
    throw Error(ErrorCode::DimensionMismatch, "support exceeds requested length");
  }
  std::vector<int> dense(k, 0);
  for (const auto& [coord, value] : entries_) {
    dense[coord - 1] = static_cast<int>(value);
  }
  return dense;
}

std::string MultiIndex::label() const {
  if (entries_.empty()) return "0";
  std::string s;
  for (const auto& [coord, value] : entries_) {
    if (!s.empty()) s += '|';
    s += 'a';
    s += std::to_string(coord);
    s += ':';
    s += std::to_string(value);
  }
  return s;
}

namespace {

std::uint32_t parse_uint(std::string_view text, std::string_view context) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError,
                "bad integer '" + std::string(text) + "' in " + std::string(context));
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

MultiIndex MultiIndex::parse_label(std::string_view text) {
  text = trim(text);
  if (text == "0") return {};
  std::vector<Entry> entries;
  for (auto part : split(text, '|')) {
    if (part.size() < 4 || part[0] != 'a') {
      throw Error(ErrorCode::ParseError, "bad multi-index label '" + std::string(text) + "'");
    }
    auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "bad multi-index label '" + std::string(text) + "'");
    }
    Coordinate c = parse_uint(part.substr(1, colon - 1), "multi-index label");
    Value v = parse_uint(part.substr(colon + 1), "multi-index label");
    if (v == 0) throw Error(ErrorCode::ParseError, "zero entry in multi-index label");
    entries.emplace_back(c, v);
  }
  return from_entries(std::move(entries));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  auto ia = a.entries_.begin();
  auto ib = b.entries_.begin();
  while (ia != a.entries_.end() || ib != b.entries_.end()) {
    const auto ca = ia != a.entries_.end() ? ia->first : ~MultiIndex::Coordinate{0};
    const auto cb = ib != b.entries_.end() ? ib->first : ~MultiIndex::Coordinate{0};
    const auto coord = std::min(ca, cb);
    const MultiIndex::Value va = ca == coord ? ia->second : 0;
    const MultiIndex::Value vb = cb == coord ? ib->second : 0;
    if (va != vb) return va <=> vb;
    if (ca == coord) ++ia;
    if (cb == coord) ++ib;
  }
  return std::strong_ordering::equal;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& [coord, value] : a.entries()) {
    std::size_t x = (static_cast<std::size_t>(coord) << 32) ^ value;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Truncation specs

int max_order(const TruncationSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FullTruncation>) {
          return s.p;
        } else if constexpr (std::is_same_v<T, SparseFirstTruncation>) {
          return s.r.empty() ? 0 : s.r.front();
        } else {
          return static_cast<int>(s.rows.size());
        }
      },
      spec);
}

int basis_count(const TruncationSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FullTruncation>) {
          return s.k;
        } else if constexpr (std::is_same_v<T, SparseFirstTruncation>) {
          return static_cast<int>(s.r.size());
        } else {
          return s.rows.empty() ? 0 : static_cast<int>(s.rows.front().size());
        }
      },
      spec);
}

namespace {

void check_monotone_caps(const std::vector<int>& r, int head, const std::string& what) {
  if (r.empty()) throw Error(ErrorCode::InvalidSparseIndex, what + " is empty");
  if (r.front() != head) {
    throw Error(ErrorCode::InvalidSparseIndex,
                what + ": first entry must equal " + std::to_string(head));
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0) throw Error(ErrorCode::InvalidSparseIndex, what + ": negative entry");
    if (i > 0 && r[i] > r[i - 1]) {
      throw Error(ErrorCode::InvalidSparseIndex, what + ": entries must be non-increasing");
    }
  }
}

}  // namespace

void validate(const TruncationSpec& spec) {
  if (const auto* full = std::get_if<FullTruncation>(&spec)) {
    if (full->p < 0) throw Error(ErrorCode::InvalidArgument, "p must be >= 0");
    if (full->k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  } else if (const auto* first = std::get_if<SparseFirstTruncation>(&spec)) {
    if (first->r.empty()) throw Error(ErrorCode::InvalidSparseIndex, "empty sparse index");
    check_monotone_caps(first->r, first->r.front(), "sparse index r");
  } else {
    const auto& second = std::get<SparseSecondTruncation>(spec);
    if (second.rows.empty()) {
      throw Error(ErrorCode::InvalidSparseIndex, "second-order sparse index has no rows");
    }
    const auto k = second.rows.front().size();
    for (std::size_t j = 0; j < second.rows.size(); ++j) {
      if (second.rows[j].size() != k) {
        throw Error(ErrorCode::InvalidSparseIndex, "sparse index rows differ in length");
      }
      check_monotone_caps(second.rows[j], static_cast<int>(j + 1),
                          "sparse index r^" + std::to_string(j + 1));
    }
  }
}

TruncationSpec parse_sparse_index(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty sparse index");
  auto parse_row = [](std::string_view row) {
    std::vector<int> r;
    for (auto item : split(row, ',')) {
      r.push_back(static_cast<int>(parse_uint(item, "sparse index")));
    }
    return r;
  };
  TruncationSpec spec;
  if (text.find(';') == std::string_view::npos) {
    spec = SparseFirstTruncation{parse_row(text)};
  } else {
    SparseSecondTruncation second;
    for (auto row : split(text, ';')) second.rows.push_back(parse_row(row));
    spec = std::move(second);
  }
  validate(spec);
  return spec;
}

std::string format_sparse_index(const TruncationSpec& spec) {
  auto row_text = [](const std::vector<int>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(r[i]);
    }
    return s;
  };
  if (const auto* first = std::get_if<SparseFirstTruncation>(&spec)) {
    return row_text(first->r);
  }
  if (const auto* second = std::get_if<SparseSecondTruncation>(&spec)) {
    std::string s;
    for (std::size_t j = 0; j < second->rows.size(); ++j) {
      if (j) s += ';';
      s += row_text(second->rows[j]);
    }
    return s;
  }
  return {};
}

std::string truncation_token(const TruncationSpec& spec) {
  switch (spec.index()) {
    case 0: return "full";
    case 1: return "sp1";
    default: return "sp2";
  }
}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::vector<MultiIndex> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  position_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (!position_.emplace(indices_[i], i).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate multi-index " + indices_[i].label());
    }
  }
}

std::ptrdiff_t IndexSet::find(const MultiIndex& alpha) const {
  auto it = position_.find(alpha);
  return it == position_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

int IndexSet::max_order() const noexcept {
  return indices_.empty() ? 0 : static_cast<int>(indices_.back().order());
}

MultiIndex::Coordinate IndexSet::max_coordinate() const noexcept {
  MultiIndex::Coordinate d = 0;
  for (const auto& a : indices_) d = std::max(d, a.max_coordinate());
  return d;
}

namespace {

// Depth-first over coordinates 1..k with per-coordinate caps; `accept` filters
// complete candidates (used for order-dependent caps).
void enumerate_capped(const std::vector<int>& caps, int p,
                      const std::function<bool(const std::vector<int>&, int)>& accept,
                      std::vector<MultiIndex>& out) {
  const std::size_t k = caps.size();
  std::vector<int> dense(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
    if (i == k) {
      const int order = p - remaining;
      if (!accept || accept(dense, order)) out.push_back(MultiIndex::from_dense(dense));
      return;
    }
    const int top = std::min(caps[i], remaining);
    for (int v = 0; v <= top; ++v) {
      dense[i] = v;
      rec(i + 1, remaining - v);
    }
    dense[i] = 0;
  };
  rec(0, p);
}

}  // namespace

IndexSet enumerate(const TruncationSpec& spec) {
  validate(spec);
  std::vector<MultiIndex> out;
  const int p = max_order(spec);
  const auto k = static_cast<std::size_t>(basis_count(spec));

  if (const auto* full = std::get_if<FullTruncation>(&spec)) {
    enumerate_capped(std::vector<int>(k, full->p), p, nullptr, out);
  } else if (const auto* first = std::get_if<SparseFirstTruncation>(&spec)) {
    enumerate_capped(first->r, p, nullptr, out);
  } else {
    const auto& rows = std::get<SparseSecondTruncation>(spec).rows;
    std::vector<int> caps(k, 0);
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < k; ++i) caps[i] = std::max(caps[i], r[i]);
    }
    auto accept = [&rows](const std::vector<int>& dense, int order) {
      if (order == 0) return true;
      const auto& r = rows[static_cast<std::size_t>(order - 1)];
      for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] > r[i]) return false;
      }
      return true;
    };
    enumerate_capped(caps, p, accept, out);
  }
  return IndexSet(std::move(out));
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorCode::InvalidArgument, "binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::size_t count(const TruncationSpec& spec) {
  validate(spec);
  if (const auto* full = std::get_if<FullTruncation>(&spec)) {
    return static_cast<std::size_t>(binomial(
        static_cast<std::uint64_t>(full->k + full->p), static_cast<std::uint64_t>(full->p)));
  }
  // No closed form for sparse sets; they are small enough to enumerate.
  return enumerate(spec).size();
}

}  // namespace chaos
