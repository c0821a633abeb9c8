#include "matchmix/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matchmix/sampling.hpp"

namespace matchmix::walk {

using core::Object;

std::vector<Pair> choose_pairs(const PerfectMatching& pm, std::int32_t k, Rng& rng) {
  const std::int32_t n = pm.n();
  if (k < 0 || k > n) throw std::invalid_argument("cannot choose that many pairs");
  std::vector<Pair> out;
  out.reserve(static_cast<std::size_t>(k));
  if (2 * k <= n) {
    // Rejection on objects; a stamp array makes membership O(1).
    static thread_local std::vector<std::uint64_t> stamp;
    static thread_local std::uint64_t epoch = 0;
    if (stamp.size() < static_cast<std::size_t>(2 * n)) stamp.assign(static_cast<std::size_t>(2 * n), 0);
    ++epoch;
    while (static_cast<std::int32_t>(out.size()) < k) {
      Object x = static_cast<Object>(1 + uniform_index(rng, static_cast<std::size_t>(2 * n)));
      Object y = pm.partner(x);
      Object lo = std::min(x, y);
      if (stamp[lo - 1] == epoch) continue;
      stamp[lo - 1] = epoch;
      out.emplace_back(lo, std::max(x, y));
    }
    return out;
  }
  auto all = pm.pairs();
  for (std::int32_t r = 0; r < k; ++r) {
    std::size_t j = static_cast<std::size_t>(r) + uniform_index(rng, all.size() - static_cast<std::size_t>(r));
    std::swap(all[static_cast<std::size_t>(r)], all[j]);
    out.push_back(all[static_cast<std::size_t>(r)]);
  }
  return out;
}

void rematch_pairs(PerfectMatching& pm, const std::vector<Pair>& chosen,
                   const std::vector<Object>& local) {
  auto map = [&](Object a) {
    const auto& p = chosen[static_cast<std::size_t>(core::slot_of(a))];
    return (a & 1) ? p.first : p.second;
  };
  for (Object a = 1; a <= static_cast<Object>(local.size()); ++a) {
    Object b = local[a - 1];
    if (a < b) pm.set_pair(map(a), map(b));
  }
}

namespace {

CycleStructure local_structure(const std::vector<Object>& local) {
  std::vector<std::int64_t> c;
  std::vector<char> seen(local.size(), 0);
  for (Object s = 1; s <= static_cast<Object>(local.size()); s += 2) {
    if (seen[s - 1]) continue;
    std::int64_t len = 0;
    Object x = s;
    do {
      Object y = local[x - 1];
      seen[x - 1] = seen[y - 1] = 1;
      ++len;
      x = core::identity_partner(y);
    } while (x != s);
    if (static_cast<std::int64_t>(c.size()) < len) c.resize(static_cast<std::size_t>(len), 0);
    ++c[static_cast<std::size_t>(len - 1)];
  }
  return CycleStructure(std::move(c));
}

}  // namespace

CycleStructure advance_round(WalkState& state, std::int32_t k, Rng& rng) {
  const std::int32_t n = state.matching.n();
  std::vector<Object> local;
  CycleStructure c;
  std::vector<Pair> chosen;
  if (state.cs_schedule) {
    const auto& sched = *state.cs_schedule;
    if (state.round >= sched.size()) throw std::out_of_range("cycle-structure schedule exhausted");
    const CycleStructure& target = sched[state.round];
    auto m = static_cast<std::int32_t>(target.support());
    if (m > n) throw std::invalid_argument("scheduled cycle structure does not fit");
    chosen = choose_pairs(state.matching, m, rng);
    // A uniform matching of the m chosen pairs with exactly this structure.
    auto lengths = target.nontrivial_lengths();
    CycleStructure inner = CycleStructure::from_lengths(lengths);
    if (m > 0) {
      PerfectMatching pm = sampling::apply_swap_sequence(sampling::swap_sequence_conditional(inner, m, rng), m);
      local = pm.partners();
    }
    c = target;
  } else {
    if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
    chosen = choose_pairs(state.matching, k, rng);
    sampling::sample_uniform_partners(k, rng, local);
    c = local_structure(local);
  }
  rematch_pairs(state.matching, chosen, local);
  ++state.round;
  state.swap_clock += static_cast<std::uint64_t>(c.swap_distance());
  return c;
}

WalkState step_round(WalkState state, std::int32_t k, Rng& rng) {
  advance_round(state, k, rng);
  return state;
}

std::int64_t fixed_point_count(const PerfectMatching& pm) { return core::fixed_points(pm); }

double cutoff_time(std::int32_t n, std::int32_t k) {
  double kappa = sampling::expected_support(k).value();
  return static_cast<double>(n) * std::log(static_cast<double>(n)) / kappa;
}

std::uint64_t coupon_collector_threshold(const std::vector<std::int64_t>& supports, double lambda,
                                         std::int32_t n) {
  const double target = lambda * static_cast<double>(n) * std::log(static_cast<double>(n));
  if (target <= 0.0) return 0;
  double acc = 0.0;
  for (std::size_t t = 0; t < supports.size(); ++t) {
    acc += static_cast<double>(supports[t]);
    if (acc >= target) return t + 1;
  }
  throw std::out_of_range("support sequence ends before the threshold");
}

std::vector<ProfileRow> profile_replica(std::int32_t n, std::int32_t k,
                                        const std::vector<std::uint64_t>& times,
                                        std::uint64_t replica, Rng& rng) {
  std::vector<ProfileRow> rows;
  WalkState st = WalkState::start(n);
  std::int64_t used = 0;
  for (auto t : times) {
    while (st.round < t) used += advance_round(st, k, rng).support();
    rows.push_back({t, replica, fixed_point_count(st.matching), used, std::nullopt});
  }
  return rows;
}

std::vector<ProfileRow> mixing_profile(std::int32_t n, std::int32_t k,
                                       std::vector<std::uint64_t> times, std::size_t reps,
                                       std::uint64_t seed, const ReplicaRunner& run) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<std::vector<ProfileRow>> per(reps);
  run(reps, [&](std::size_t r) {
    Rng rng = derive_stream(seed, r);
    per[r] = profile_replica(n, k, times, r, rng);
  });
  std::vector<ProfileRow> rows;
  for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

}  // namespace matchmix::walk
