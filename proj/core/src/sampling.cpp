#include "matchmix/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace matchmix::sampling {

using core::Object;
using core::Pair;

void sample_uniform_partners(std::int32_t n, Rng& rng, std::vector<Object>& out) {
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  static thread_local std::vector<Object> objs;
  objs.resize(m);
  std::iota(objs.begin(), objs.end(), 1);
  out.assign(m, 0);
  // The first remaining object is paired with a uniform other remaining one.
  for (std::size_t i = 0; i < m; i += 2) {
    std::size_t j = i + 1 + uniform_index(rng, m - i - 1);
    std::swap(objs[i + 1], objs[j]);
    out[objs[i] - 1] = objs[i + 1];
    out[objs[i + 1] - 1] = objs[i];
  }
}

PerfectMatching sample_uniform_matching(std::int32_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<Object> p;
  sample_uniform_partners(n, rng, p);
  return PerfectMatching(std::move(p));
}

CycleStructure sample_rematch_structure(std::int32_t k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  static thread_local std::vector<Object> p;
  static thread_local std::vector<char> seen;
  sample_uniform_partners(k, rng, p);
  seen.assign(p.size(), 0);
  std::vector<std::int64_t> c;
  for (Object s = 1; s <= 2 * k; s += 2) {
    if (seen[s - 1]) continue;
    std::int64_t len = 0;
    Object x = s;
    do {
      Object y = p[x - 1];
      seen[x - 1] = seen[y - 1] = 1;
      ++len;
      x = core::identity_partner(y);
    } while (x != s);
    if (static_cast<std::int64_t>(c.size()) < len) c.resize(static_cast<std::size_t>(len), 0);
    ++c[static_cast<std::size_t>(len - 1)];
  }
  return CycleStructure(std::move(c));
}

namespace {

// Slot table: slot r holds an oriented pair. A swap on slots (i, j) keeps the
// first object of slot i in slot i.
struct Slots {
  std::vector<Pair> pair;
  explicit Slots(std::int32_t n) : pair(static_cast<std::size_t>(n)) {
    for (std::int32_t r = 0; r < n; ++r) pair[r] = {2 * r + 1, 2 * r + 2};
  }
  void swap(std::int32_t i, std::int32_t j, SwapChoice b) {
    auto [a1, a2] = pair[i];
    auto [c1, c2] = pair[j];
    if (b == SwapChoice::kBar) {
      pair[i] = {a1, c1};
      pair[j] = {a2, c2};
    } else {
      pair[i] = {a1, c2};
      pair[j] = {a2, c1};
    }
  }
  PerfectMatching matching() const {
    return PerfectMatching::from_pairs(static_cast<std::int32_t>(pair.size()), pair);
  }
};

SwapChoice coin_choice(Rng& rng) { return fair_coin(rng) ? SwapChoice::kCross : SwapChoice::kBar; }

// Set of slots with O(1) insert, erase and uniform pick.
class SlotSet {
 public:
  explicit SlotSet(std::int32_t n) : pos_(static_cast<std::size_t>(n), -1) {}
  void fill() {
    items_.resize(pos_.size());
    std::iota(items_.begin(), items_.end(), 0);
    for (std::size_t i = 0; i < pos_.size(); ++i) pos_[i] = static_cast<std::int32_t>(i);
  }
  bool contains(std::int32_t x) const { return pos_[x] >= 0; }
  void insert(std::int32_t x) {
    if (contains(x)) return;
    pos_[x] = static_cast<std::int32_t>(items_.size());
    items_.push_back(x);
  }
  void erase(std::int32_t x) {
    std::int32_t p = pos_[x];
    if (p < 0) return;
    std::int32_t last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[x] = -1;
  }
  void clear() {
    for (auto x : items_) pos_[x] = -1;
    items_.clear();
  }
  std::int32_t pick(Rng& rng) const { return items_[uniform_index(rng, items_.size())]; }
  std::size_t size() const { return items_.size(); }
  const std::vector<std::int32_t>& items() const { return items_; }

 private:
  std::vector<std::int32_t> pos_;
  std::vector<std::int32_t> items_;
};

std::vector<bool> refresh_flags(const CycleStructure& c) {
  std::vector<bool> flags;
  for (auto l : c.nontrivial_lengths()) {
    flags.push_back(true);
    for (std::int64_t s = 2; s < l; ++s) flags.push_back(false);
  }
  return flags;
}

void check_embeds(const CycleStructure& c, std::int32_t n) {
  if (c.support() > n) throw std::invalid_argument("cycle structure does not embed in n pairs");
}

}  // namespace

PerfectMatching sample_uniform_cycle_via_swaps(std::int32_t l, Rng& rng) {
  if (l < 1) throw std::invalid_argument("cycle length must be at least 1");
  Slots slots(l);
  SlotSet visited(l), fresh(l);
  fresh.fill();
  std::int32_t i0 = static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(l)));
  visited.insert(i0);
  fresh.erase(i0);
  for (std::int32_t s = 1; s < l; ++s) {
    std::int32_t i = visited.pick(rng);
    std::int32_t j = fresh.pick(rng);
    slots.swap(i, j, coin_choice(rng));
    // The visited set grows by the newly reached slot.
    visited.insert(j);
    fresh.erase(j);
  }
  return slots.matching();
}

PerfectMatching sample_k_rematch(std::int32_t n, std::int32_t k, Rng& rng) {
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  PerfectMatching local = sample_uniform_matching(k, rng);
  // k distinct target slots by partial Fisher-Yates.
  std::vector<std::int32_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::int32_t r = 0; r < k; ++r)
    std::swap(perm[r], perm[r + static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(n - r)))]);
  PerfectMatching out = PerfectMatching::identity(n);
  auto lift = [&](Object x) {
    std::int32_t slot = perm[core::slot_of(x)];
    return static_cast<Object>(2 * slot + 1 + ((x - 1) & 1));
  };
  // Cycle by cycle: each cycle's slots land on distinct uniform slots of [n].
  for (const auto& cyc : core::cycle_slots(local)) {
    for (auto r : cyc) {
      Object x = 2 * r + 1;
      out.set_pair(lift(x), lift(local.partner(x)));
      Object y = 2 * r + 2;
      out.set_pair(lift(y), lift(local.partner(y)));
    }
  }
  return out;
}

std::vector<std::int64_t> refresh_times(const CycleStructure& c) {
  std::vector<std::int64_t> out;
  std::int64_t t = 1;
  for (auto l : c.nontrivial_lengths()) {
    out.push_back(t);
    t += l - 1;
  }
  return out;
}

SwapSequence swap_sequence_conditional(const CycleStructure& c, std::int32_t n, Rng& rng) {
  check_embeds(c, n);
  SwapSequence seq;
  seq.refresh = refresh_flags(c);
  seq.step_violation.assign(seq.refresh.size(), false);
  SlotSet free(n), current(n);
  free.fill();
  for (bool refresh : seq.refresh) {
    SwapStep st;
    if (refresh) {
      // Slots of finished cycles never come back.
      current.clear();
      st.first = free.pick(rng);
      free.erase(st.first);
      current.insert(st.first);
    } else {
      st.first = current.pick(rng);
    }
    st.second = free.pick(rng);
    free.erase(st.second);
    current.insert(st.second);
    st.choice = coin_choice(rng);
    seq.steps.push_back(st);
  }
  return seq;
}

SwapSequence swap_sequence_relaxed(const CycleStructure& c, std::int32_t n, Rng& rng) {
  check_embeds(c, n);
  SwapSequence seq;
  seq.refresh = refresh_flags(c);
  seq.step_violation.assign(seq.refresh.size(), false);
  std::vector<char> old(static_cast<std::size_t>(n), 0);
  SlotSet current(n);
  for (std::size_t s = 0; s < seq.refresh.size(); ++s) {
    SwapStep st;
    bool bad = false;
    if (seq.refresh[s]) {
      for (auto x : current.items()) old[x] = 1;
      current.clear();
      st.first = static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(n)));
      bad = old[st.first] != 0;
    } else {
      st.first = current.pick(rng);
    }
    st.second = static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(n - 1)));
    if (st.second >= st.first) ++st.second;
    bad = bad || old[st.second] || (!seq.refresh[s] && current.contains(st.second));
    current.insert(st.first);
    current.insert(st.second);
    st.choice = coin_choice(rng);
    seq.steps.push_back(st);
    seq.step_violation[s] = bad;
    seq.violation = seq.violation || bad;
  }
  return seq;
}

PerfectMatching apply_swap_sequence(const SwapSequence& seq, std::int32_t n) {
  Slots slots(n);
  for (const auto& st : seq.steps) {
    if (st.first == st.second) throw std::invalid_argument("swap step uses one slot twice");
    slots.swap(st.first, st.second, st.choice);
  }
  return slots.matching();
}

Rational expected_support(std::int32_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  // k - k/(2k-1) = 2k(k-1)/(2k-1); numerator and denominator are coprime
  // up to a common factor of gcd(2k(k-1), 2k-1).
  std::int64_t num = 2LL * k * (k - 1);
  std::int64_t den = 2LL * k - 1;
  std::int64_t g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

RematchLaw rematch_law(std::int32_t k, std::uint64_t mc_samples, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  static std::mutex mu;
  static std::map<std::tuple<std::int32_t, std::uint64_t, std::uint64_t>, RematchLaw> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(k, k <= 8 ? 0 : mc_samples, k <= 8 ? 0 : seed);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  RematchLaw law;
  law.k = k;
  law.kappa = expected_support(k);
  if (k <= 8) {
    std::uint64_t total = 0;
    core::for_each_matching(k, [&](const PerfectMatching& pm) {
      total += static_cast<std::uint64_t>(core::cycle_structure(pm).swap_distance());
    });
    auto count = static_cast<std::int64_t>(core::matching_count(k));
    auto num = static_cast<std::int64_t>(total);
    std::int64_t g = std::gcd(num, count);
    law.rho_rational = {num / (g ? g : 1), count / (g ? g : 1)};
    law.rho = law.rho_rational.value();
    law.rho_exact = true;
  } else {
    Rng rng = derive_stream(seed, 0xd157);
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t i = 1; i <= mc_samples; ++i) {
      double d = static_cast<double>(sample_rematch_structure(k, rng).swap_distance());
      double delta = d - mean;
      mean += delta / static_cast<double>(i);
      m2 += delta * (d - mean);
    }
    law.rho = mean;
    law.rho_se = std::sqrt(m2 / static_cast<double>(mc_samples - 1) / static_cast<double>(mc_samples));
  }
  cache.emplace(key, law);
  return law;
}

bool relaxed_window_violates(std::int32_t n, std::int32_t k, std::int32_t delta, Rng& rng) {
  if (delta < 1) return false;
  CycleStructure c;
  do {
    c = sample_rematch_structure(k, rng);
  } while (c.swap_distance() == 0);
  SwapSequence seq = swap_sequence_relaxed(c, n, rng);
  std::size_t s = uniform_index(rng, seq.steps.size());
  std::int32_t left = delta;
  while (true) {
    for (; s < seq.steps.size() && left > 0; ++s, --left)
      if (seq.step_violation[s]) return true;
    if (left == 0) return false;
    seq = swap_sequence_relaxed(sample_rematch_structure(k, rng), n, rng);
    s = 0;
  }
}

}  // namespace matchmix::sampling
