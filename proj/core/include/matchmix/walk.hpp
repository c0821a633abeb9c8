#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matchmix/matching.hpp"
#include "matchmix/random.hpp"
#include "matchmix/replicas.hpp"

namespace matchmix::walk {

using core::CycleStructure;
using core::Pair;
using core::Partition;
using core::PerfectMatching;

struct WalkState {
  PerfectMatching matching;
  std::uint64_t round = 0;
  std::uint64_t swap_clock = 0;
  // Quenched mode: round t applies a uniform matching with structure
  // cs_schedule[t] instead of a uniform k-rematch.
  std::optional<std::vector<CycleStructure>> cs_schedule;

  static WalkState start(std::int32_t n) { return {PerfectMatching::identity(n), 0, 0, {}}; }
};

struct TvOracleResult {
  std::uint64_t t = 0;
  std::optional<double> tv_full;
  double tv_lumped = 0.0;
};

// k distinct pairs of pm, uniformly, each min-first.
std::vector<Pair> choose_pairs(const PerfectMatching& pm, std::int32_t k, Rng& rng);

// Re-pairs the 2m objects of `chosen` following `local`, a partner array on
// 1..2m where local object 2r+1 (2r+2) stands for chosen[r].first (.second).
void rematch_pairs(PerfectMatching& pm, const std::vector<Pair>& chosen,
                   const std::vector<core::Object>& local);

// One round in place. Returns the cycle structure applied (relative to the
// chosen pairs) and advances round and swap_clock.
CycleStructure advance_round(WalkState& state, std::int32_t k, Rng& rng);
WalkState step_round(WalkState state, std::int32_t k, Rng& rng);

std::int64_t fixed_point_count(const PerfectMatching& pm);

// n log n / (k - k/(2k-1)).
double cutoff_time(std::int32_t n, std::int32_t k);

// min{t : supports[0] + ... + supports[t-1] >= lambda n log n}.
std::uint64_t coupon_collector_threshold(const std::vector<std::int64_t>& supports, double lambda,
                                         std::int32_t n);

struct ProfileRow {
  std::uint64_t time = 0;
  std::uint64_t replica = 0;
  std::int64_t fixed_points = 0;
  std::int64_t support_used = 0;  // cumulative support up to this time
  std::optional<bool> coalesced;
};

// One walk from id_n observed at the (sorted) times.
std::vector<ProfileRow> profile_replica(std::int32_t n, std::int32_t k,
                                        const std::vector<std::uint64_t>& times,
                                        std::uint64_t replica, Rng& rng);

std::vector<ProfileRow> mixing_profile(std::int32_t n, std::int32_t k,
                                       std::vector<std::uint64_t> times, std::size_t reps,
                                       std::uint64_t seed, const ReplicaRunner& run = run_serial);

// Exact oracles.
struct TvLimits {
  std::int32_t enumeration_cap = 8;
  std::uint64_t max_transitions = 200'000'000;
  std::int32_t lumped_n_cap = 40;
  std::int32_t lumped_enum_n_cap = 12;
  std::int32_t lumped_enum_k_cap = 4;
};

std::vector<double> exact_tv_full(std::int32_t n, std::int32_t k, std::uint64_t t_max,
                                  TvLimits limits = {});
std::vector<double> exact_tv_lumped(std::int32_t n, std::int32_t k, std::uint64_t t_max,
                                    TvLimits limits = {});
// Both columns; tv_full is absent when the full chain is too large.
std::vector<TvOracleResult> exact_tv(std::int32_t n, std::int32_t k, std::uint64_t t_max,
                                     TvLimits limits = {});

// Law of partition_of(M) for M uniform on M_n, over integer_partitions(n).
std::vector<double> uniform_partition_law(std::int32_t n);
double uniform_partition_probability(const Partition& p);

// Lumped kernel rows as (target index, probability) lists over
// integer_partitions(n). Closed form for k = 2, summation otherwise.
std::vector<std::vector<std::pair<std::size_t, double>>> lumped_kernel(std::int32_t n,
                                                                       std::int32_t k,
                                                                       TvLimits limits = {});
// Summation over k-subsets and rematches from a representative matching;
// valid for every k and used to cross-check the closed form.
std::vector<std::vector<std::pair<std::size_t, double>>> lumped_kernel_by_summation(
    std::int32_t n, std::int32_t k);

}  // namespace matchmix::walk
