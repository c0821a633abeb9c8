#include "matchmix/matching.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace matchmix::core {

PerfectMatching::PerfectMatching(std::vector<Object> partner) : partner_(std::move(partner)) {
  const auto m = static_cast<Object>(partner_.size());
  if (m % 2 != 0) throw std::invalid_argument("matching needs an even number of objects");
  for (Object x = 1; x <= m; ++x) {
    Object y = partner_[x - 1];
    if (y < 1 || y > m || y == x || partner_[y - 1] != x)
      throw std::invalid_argument("partner array is not a fixed-point-free involution");
  }
}

PerfectMatching PerfectMatching::identity(std::int32_t n) {
  if (n < 0) throw std::invalid_argument("negative n");
  std::vector<Object> p(2 * static_cast<std::size_t>(n));
  for (Object x = 1; x <= 2 * n; ++x) p[x - 1] = identity_partner(x);
  PerfectMatching pm;
  pm.partner_ = std::move(p);
  return pm;
}

PerfectMatching PerfectMatching::from_pairs(std::int32_t n, std::span<const Pair> pairs) {
  if (static_cast<std::int32_t>(pairs.size()) != n)
    throw std::invalid_argument("expected exactly n pairs");
  std::vector<Object> p(2 * static_cast<std::size_t>(n), 0);
  for (auto [a, b] : pairs) {
    if (a < 1 || b < 1 || a > 2 * n || b > 2 * n || a == b || p[a - 1] || p[b - 1])
      throw std::invalid_argument("pairs do not partition {1..2n}");
    p[a - 1] = b;
    p[b - 1] = a;
  }
  return PerfectMatching(std::move(p));
}

std::vector<Pair> PerfectMatching::pairs() const {
  std::vector<Pair> out;
  out.reserve(static_cast<std::size_t>(n()));
  for (Object x = 1; x <= 2 * n(); ++x)
    if (x < partner(x)) out.emplace_back(x, partner(x));
  return out;
}

std::string PerfectMatching::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto [a, b] : pairs()) {
    os << (first ? "" : ",") << '{' << a << ',' << b << '}';
    first = false;
  }
  os << '}';
  return os.str();
}

CycleStructure::CycleStructure(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  for (auto c : counts_)
    if (c < 0) throw std::invalid_argument("negative cycle count");
  while (!counts_.empty() && counts_.back() == 0) counts_.pop_back();
}

CycleStructure CycleStructure::from_lengths(std::span<const std::int64_t> lengths) {
  std::vector<std::int64_t> c;
  for (auto l : lengths) {
    if (l < 1) throw std::invalid_argument("cycle length must be positive");
    if (static_cast<std::int64_t>(c.size()) < l) c.resize(static_cast<std::size_t>(l), 0);
    ++c[static_cast<std::size_t>(l - 1)];
  }
  return CycleStructure(std::move(c));
}

std::int64_t CycleStructure::n() const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) s += static_cast<std::int64_t>(i + 1) * counts_[i];
  return s;
}

std::int64_t CycleStructure::support() const {
  std::int64_t s = 0;
  for (std::size_t i = 1; i < counts_.size(); ++i) s += static_cast<std::int64_t>(i + 1) * counts_[i];
  return s;
}

std::int64_t CycleStructure::swap_distance() const {
  std::int64_t s = 0;
  for (std::size_t i = 1; i < counts_.size(); ++i) s += static_cast<std::int64_t>(i) * counts_[i];
  return s;
}

std::int64_t CycleStructure::nontrivial_cycles() const {
  std::int64_t s = 0;
  for (std::size_t i = 1; i < counts_.size(); ++i) s += counts_[i];
  return s;
}

std::vector<std::int64_t> CycleStructure::nontrivial_lengths() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = counts_.size(); i-- > 1;)
    for (std::int64_t r = 0; r < counts_[i]; ++r) out.push_back(static_cast<std::int64_t>(i + 1));
  return out;
}

std::string CycleStructure::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < counts_.size(); ++i) os << (i ? "," : "") << counts_[i];
  os << ')';
  return os.str();
}

std::int64_t support(const CycleStructure& c) { return c.support(); }
std::int64_t swap_distance(const CycleStructure& c) { return c.swap_distance(); }

Partition::Partition(std::vector<std::int32_t> blocks) : blocks_(std::move(blocks)) {
  for (auto b : blocks_)
    if (b <= 0) throw std::invalid_argument("partition blocks must be positive");
  std::sort(blocks_.begin(), blocks_.end(), std::greater<>());
  n_ = std::accumulate(blocks_.begin(), blocks_.end(), 0);
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i];
  os << ']';
  return os.str();
}

LabelPermutation::LabelPermutation(std::vector<Object> map) : map_(std::move(map)) {
  std::vector<char> seen(map_.size(), 0);
  for (auto y : map_) {
    if (y < 1 || y > static_cast<Object>(map_.size()) || seen[y - 1])
      throw std::invalid_argument("label map is not a bijection");
    seen[y - 1] = 1;
  }
}

LabelPermutation LabelPermutation::inverse() const {
  std::vector<Object> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i] - 1] = static_cast<Object>(i + 1);
  return LabelPermutation(std::move(inv));
}

namespace {

// Lengths of the cycles of a + b, counted in a-edges.
template <typename Visit>
void walk_cycles(const PerfectMatching& a, const PerfectMatching& b, Visit&& visit) {
  const Object m = 2 * a.n();
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (Object s = 1; s <= m; ++s) {
    if (seen[s - 1]) continue;
    std::int64_t len = 0;
    Object x = s;
    do {
      Object y = a.partner(x);
      seen[x - 1] = seen[y - 1] = 1;
      ++len;
      x = b.partner(y);
    } while (x != s);
    visit(len);
  }
}

CycleStructure structure_from(const PerfectMatching& a, const PerfectMatching& b) {
  std::vector<std::int64_t> c;
  walk_cycles(a, b, [&](std::int64_t len) {
    if (static_cast<std::int64_t>(c.size()) < len) c.resize(static_cast<std::size_t>(len), 0);
    ++c[static_cast<std::size_t>(len - 1)];
  });
  return CycleStructure(std::move(c));
}

}  // namespace

CycleStructure cycle_structure(const PerfectMatching& pm) {
  std::vector<std::int64_t> c;
  const Object m = 2 * pm.n();
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (Object s = 1; s <= m; s += 2) {
    if (seen[s - 1]) continue;
    std::int64_t len = 0;
    Object x = s;
    do {
      Object y = pm.partner(x);
      seen[x - 1] = seen[y - 1] = 1;
      ++len;
      x = identity_partner(y);
    } while (x != s);
    if (static_cast<std::int64_t>(c.size()) < len) c.resize(static_cast<std::size_t>(len), 0);
    ++c[static_cast<std::size_t>(len - 1)];
  }
  return CycleStructure(std::move(c));
}

std::vector<std::vector<std::int32_t>> cycle_slots(const PerfectMatching& pm) {
  std::vector<std::vector<std::int32_t>> out;
  const Object m = 2 * pm.n();
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (Object s = 1; s <= m; s += 2) {
    if (seen[s - 1]) continue;
    auto& cyc = out.emplace_back();
    Object x = s;
    do {
      cyc.push_back(slot_of(x));
      Object y = pm.partner(x);
      seen[x - 1] = seen[y - 1] = 1;
      x = identity_partner(y);
    } while (x != s);
  }
  return out;
}

Partition partition_of(const CycleStructure& c) {
  std::vector<std::int32_t> blocks;
  for (std::int64_t l = c.max_length(); l >= 1; --l)
    for (std::int64_t r = 0; r < c.count(l); ++r) blocks.push_back(static_cast<std::int32_t>(l));
  return Partition(std::move(blocks));
}

Partition partition_of(const PerfectMatching& pm) { return partition_of(cycle_structure(pm)); }

std::int64_t fixed_points(const PerfectMatching& pm) {
  std::int64_t f = 0;
  for (Object x = 1; x <= 2 * pm.n(); x += 2) f += pm.partner(x) == x + 1;
  return f;
}

CycleStructure relative_cycle_structure(const PerfectMatching& a, const PerfectMatching& b) {
  if (a.n() != b.n()) throw std::invalid_argument("matchings have different n");
  return structure_from(a, b);
}

Partition relative_partition(const PerfectMatching& a, const PerfectMatching& b) {
  return partition_of(relative_cycle_structure(a, b));
}

std::int64_t swap_distance_between(const PerfectMatching& a, const PerfectMatching& b) {
  if (a.n() != b.n()) throw std::invalid_argument("matchings have different n");
  std::int64_t d = 0;
  walk_cycles(a, b, [&](std::int64_t len) { d += len - 1; });
  return d;
}

LabelPermutation relabel_to_identity(const PerfectMatching& b) {
  std::vector<Object> map(static_cast<std::size_t>(2 * b.n()));
  Object r = 0;
  for (auto [x, y] : b.pairs()) {
    map[x - 1] = 2 * r + 1;
    map[y - 1] = 2 * r + 2;
    ++r;
  }
  return LabelPermutation(std::move(map));
}

PerfectMatching conjugate(const PerfectMatching& pm, const LabelPermutation& sigma) {
  if (sigma.size() != static_cast<std::size_t>(2 * pm.n()))
    throw std::invalid_argument("relabelling has the wrong size");
  std::vector<Object> p(sigma.size());
  for (Object x = 1; x <= 2 * pm.n(); ++x) p[sigma(x) - 1] = sigma(pm.partner(x));
  return PerfectMatching(std::move(p));
}

void apply_swap_inplace(PerfectMatching& pm, Pair x, Pair y, SwapChoice choice) {
  if (x.first > x.second) std::swap(x.first, x.second);
  if (y.first > y.second) std::swap(y.first, y.second);
  if (!pm.contains(x) || !pm.contains(y)) throw std::invalid_argument("pair is not in the matching");
  if (x == y) throw std::invalid_argument("swap needs two distinct pairs");
  auto [a, b] = x;
  auto [c, d] = y;
  if (choice == SwapChoice::kBar) {
    pm.set_pair(a, c);
    pm.set_pair(b, d);
  } else {
    pm.set_pair(a, d);
    pm.set_pair(b, c);
  }
}

PerfectMatching apply_swap(const PerfectMatching& pm, Pair x, Pair y, SwapChoice choice) {
  PerfectMatching out = pm;
  apply_swap_inplace(out, x, y, choice);
  return out;
}

std::vector<Partition> integer_partitions(std::int32_t n) {
  std::vector<Partition> out;
  if (n <= 0) return out;
  std::vector<std::int32_t> a{n};
  while (true) {
    out.emplace_back(a);
    // Next partition in reverse lexicographic order.
    std::int32_t rem = 0;
    while (!a.empty() && a.back() == 1) {
      ++rem;
      a.pop_back();
    }
    if (a.empty()) break;
    std::int32_t v = --a.back();
    ++rem;
    while (rem > v) {
      a.push_back(v);
      rem -= v;
    }
    if (rem > 0) a.push_back(rem);
  }
  return out;
}

}  // namespace matchmix::core

std::size_t std::hash<matchmix::core::Partition>::operator()(
    const matchmix::core::Partition& p) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto b : p.blocks()) h = (h ^ static_cast<std::size_t>(b)) * 1099511628211ULL;
  return h;
}
