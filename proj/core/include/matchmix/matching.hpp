#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace matchmix::core {

// Objects are labelled 1..2n. Pair slot r (0-based) of the identity is
// {2r+1, 2r+2}.
using Object = std::int32_t;
using Pair = std::pair<Object, Object>;

inline constexpr Object identity_partner(Object x) {
  return (x & 1) ? x + 1 : x - 1;
}
inline constexpr std::int32_t slot_of(Object x) { return (x - 1) / 2; }

enum class SwapChoice { kBar, kCross };

// A fixed-point-free involution on {1..2n}, stored as a partner array.
class PerfectMatching {
 public:
  PerfectMatching() = default;
  // partner[x-1] is the partner of x. Throws std::invalid_argument if the
  // array is not a fixed-point-free involution.
  explicit PerfectMatching(std::vector<Object> partner);

  static PerfectMatching identity(std::int32_t n);
  static PerfectMatching from_pairs(std::int32_t n, std::span<const Pair> pairs);

  std::int32_t n() const { return static_cast<std::int32_t>(partner_.size() / 2); }
  Object partner(Object x) const { return partner_[x - 1]; }
  bool contains(Pair p) const {
    return p.first >= 1 && p.first <= 2 * n() && partner(p.first) == p.second;
  }

  // Canonical form: each pair min-first, pairs sorted by min.
  std::vector<Pair> pairs() const;
  const std::vector<Object>& partners() const { return partner_; }

  // Raw re-pairing used by the hot loops. Caller keeps the involution valid.
  void set_pair(Object a, Object b) {
    partner_[a - 1] = b;
    partner_[b - 1] = a;
  }

  bool operator==(const PerfectMatching&) const = default;
  std::string to_string() const;

 private:
  std::vector<Object> partner_;
};

// c_l = number of l-cycles (2l-cycles of pm + id). counts()[0] is c_1.
class CycleStructure {
 public:
  CycleStructure() = default;
  explicit CycleStructure(std::vector<std::int64_t> counts);
  // From a list of cycle lengths (any order).
  static CycleStructure from_lengths(std::span<const std::int64_t> lengths);
  static CycleStructure identity(std::int64_t n) { return CycleStructure({n}); }

  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t count(std::int64_t l) const {
    return l >= 1 && l <= static_cast<std::int64_t>(counts_.size()) ? counts_[l - 1] : 0;
  }
  std::int64_t max_length() const { return static_cast<std::int64_t>(counts_.size()); }
  std::int64_t n() const;
  std::int64_t support() const;
  std::int64_t swap_distance() const;
  std::int64_t nontrivial_cycles() const;
  // Lengths >= 2, non-increasing.
  std::vector<std::int64_t> nontrivial_lengths() const;

  bool operator==(const CycleStructure&) const = default;
  std::string to_string() const;

 private:
  std::vector<std::int64_t> counts_;
};

std::int64_t support(const CycleStructure& c);
std::int64_t swap_distance(const CycleStructure& c);

// Blocks sorted non-increasing, summing to n.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::int32_t> blocks);
  static Partition ones(std::int32_t n) {
    return Partition(std::vector<std::int32_t>(static_cast<std::size_t>(n), 1));
  }

  const std::vector<std::int32_t>& blocks() const { return blocks_; }
  std::int32_t n() const { return n_; }
  std::size_t size() const { return blocks_.size(); }

  auto operator<=>(const Partition&) const = default;
  std::string to_string() const;

 private:
  std::vector<std::int32_t> blocks_;
  std::int32_t n_ = 0;
};

// Bijection on {1..2n}. map[x-1] is the image of x.
class LabelPermutation {
 public:
  explicit LabelPermutation(std::vector<Object> map);
  Object operator()(Object x) const { return map_[x - 1]; }
  LabelPermutation inverse() const;
  std::size_t size() const { return map_.size(); }

 private:
  std::vector<Object> map_;
};

CycleStructure cycle_structure(const PerfectMatching& pm);
// Cycles of pm + id, each a list of identity slots in traversal order.
std::vector<std::vector<std::int32_t>> cycle_slots(const PerfectMatching& pm);
Partition partition_of(const PerfectMatching& pm);
Partition partition_of(const CycleStructure& c);
std::int64_t fixed_points(const PerfectMatching& pm);

// Cycle structure of a read with b as the reference matching.
CycleStructure relative_cycle_structure(const PerfectMatching& a, const PerfectMatching& b);
Partition relative_partition(const PerfectMatching& a, const PerfectMatching& b);
std::int64_t swap_distance_between(const PerfectMatching& a, const PerfectMatching& b);

// sigma with sigma(b) = id: the r-th canonical pair of b goes to slot r.
LabelPermutation relabel_to_identity(const PerfectMatching& b);
// sigma pm sigma^-1.
PerfectMatching conjugate(const PerfectMatching& pm, const LabelPermutation& sigma);

// Replaces {a,b},{c,d} (each read min-first) by {a,c},{b,d} for kBar or
// {a,d},{b,c} for kCross.
PerfectMatching apply_swap(const PerfectMatching& pm, Pair x, Pair y, SwapChoice choice);
void apply_swap_inplace(PerfectMatching& pm, Pair x, Pair y, SwapChoice choice);

// (2n-1)!!; throws std::overflow_error past 64 bits.
std::uint64_t matching_count(std::int32_t n);

struct EnumerationLimits {
  std::int32_t cap = 8;
  bool override_cap = false;
};

// Calls visit on each of the (2n-1)!! matchings in rank order.
void for_each_matching(std::int32_t n, const std::function<void(const PerfectMatching&)>& visit,
                       EnumerationLimits limits = {});
std::vector<PerfectMatching> enumerate_matchings(std::int32_t n, EnumerationLimits limits = {});

// Position in the enumeration order; bijective onto [0, (2n-1)!!).
std::uint64_t matching_rank(const PerfectMatching& pm);
PerfectMatching matching_unrank(std::int32_t n, std::uint64_t rank);

// All integer partitions of n, in reverse lexicographic order.
std::vector<Partition> integer_partitions(std::int32_t n);

}  // namespace matchmix::core

template <>
struct std::hash<matchmix::core::Partition> {
  std::size_t operator()(const matchmix::core::Partition& p) const noexcept;
};
