#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "matchmix/matching.hpp"
#include "matchmix/random.hpp"
#include "matchmix/replicas.hpp"
#include "matchmix/tiling.hpp"
#include "matchmix/walk.hpp"

namespace matchmix::coupling {

using core::CycleStructure;
using core::Object;
using core::Pair;
using core::PerfectMatching;

// The random input of one round: k chosen pairs and a matching of their 2k
// objects (local object 2r+1 / 2r+2 is chosen[r].first / .second).
struct RoundDraw {
  std::vector<Pair> chosen;
  std::vector<Object> local;
};

RoundDraw draw_round(const PerfectMatching& pm, std::int32_t k, Rng& rng);
void apply_round(PerfectMatching& pm, const RoundDraw& draw);
CycleStructure round_structure(const RoundDraw& draw);

// Follower draw for `follower`, given the driver's draw, when the two
// matchings are equal or one swap apart. The map is a bijection between
// the two round laws and keeps the pair one swap apart.
RoundDraw neighbour_draw(const PerfectMatching& driver, const PerfectMatching& follower,
                         const RoundDraw& draw);

// Matchings from a to b, consecutive ones a single swap apart.
std::vector<PerfectMatching> swap_path(const PerfectMatching& a, const PerfectMatching& b);

enum class DpMode { kSwap, kRound };

// One uniform swap of nu (both pairs uniform, fair choice) and the matching
// swap of mu; the swap distance is unchanged.
void dp_swap_step(PerfectMatching& mu, PerfectMatching& nu, Rng& rng);

// One k-rematch round of each chain. Exact marginals always; the distance
// never increases, and is preserved exactly when d(mu, nu) <= 1 or k = 2.
// Returns the structure applied to nu.
CycleStructure dp_round_step(PerfectMatching& mu, PerfectMatching& nu, std::int32_t k, Rng& rng);

// Value form. kRound with k > 2 requires d(mu, nu) <= 1 (std::domain_error
// otherwise) so that preservation is exact.
std::pair<PerfectMatching, PerfectMatching> distance_preserving_step(const PerfectMatching& mu,
                                                                     const PerfectMatching& nu,
                                                                     Rng& rng,
                                                                     DpMode mode = DpMode::kSwap,
                                                                     std::int32_t k = 2);

struct CouplingStageConfig {
  std::int32_t n = 0;
  std::int32_t k = 2;
  double beta = 1.0;
  double delta = 0.2;
  double kappa = 0.0;
  double rho = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;  // swap-clock boundaries
  bool stage2_enabled = false;
  std::uint64_t horizon_rounds = 0;     // floor(beta n / kappa)

  static CouplingStageConfig make(std::int32_t n, std::int32_t k, double beta, double delta);
};

struct CouplingOutcome {
  bool coalesced = false;
  std::int64_t final_distance = 0;
  bool a_delta = false;
  bool stage2_ran = false;
  std::uint64_t rounds = 0;
  std::uint64_t swaps = 0;
  std::int64_t coalesced_round = -1;
  std::int64_t breaches = 0;
  double wall_seconds = 0.0;
};

// Matchings whose partitions are those of the pair: matched tiles become
// identical cycles, unmatched ones are cut from one common long cycle.
std::pair<PerfectMatching, PerfectMatching> lift_tilings(const TilingPair& pair);

CouplingOutcome three_stage_coupling(const PerfectMatching& mu0, const PerfectMatching& nu0,
                                     const CouplingStageConfig& cfg, Rng& rng);

struct ContractionEstimate {
  double lambda = 0.0;
  double se = 0.0;
  double coalesced_fraction = 0.0;
  std::vector<CouplingOutcome> runs;
};

// Runs start from id_n and id_n with slots 0 and 1 swapped.
std::pair<PerfectMatching, PerfectMatching> neighbour_start(std::int32_t n);

ContractionEstimate estimate_contraction(std::int32_t n, std::int32_t k, double beta, double delta,
                                         std::size_t reps, std::uint64_t seed,
                                         const ReplicaRunner& run = run_serial);

// Walk profile with a coalescence indicator: a second chain started one swap
// away is driven by the rematch coupling; the flag is set once their
// partitions agree.
std::vector<walk::ProfileRow> coupled_profile_replica(std::int32_t n, std::int32_t k,
                                                      const std::vector<std::uint64_t>& times,
                                                      std::uint64_t replica, Rng& rng);

}  // namespace matchmix::coupling
