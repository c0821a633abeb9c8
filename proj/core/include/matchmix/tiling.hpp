#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matchmix/matching.hpp"
#include "matchmix/random.hpp"

namespace matchmix::coupling {

using core::Partition;

// Tiles of (0,1] on the 1/n grid; widths are in grid units.
struct Tiling {
  std::int32_t n = 0;
  std::vector<std::int32_t> tiles;
  std::optional<std::size_t> distinguished;

  static Tiling from_partition(const Partition& p);
  Partition partition() const { return Partition(tiles); }
};

// One move of the marginal dynamics. The distinguished tile (index 0 unless
// set) holds the first marker at grid point u = 1; v in [1, n] is the
// second marker. v = 1 is the degenerate split and leaves p unchanged.
Tiling marginal_step(const Tiling& p, std::int32_t u, std::int32_t v, bool b);

// Grid version of the measure-preserving map for unmatched distinguished
// tiles of widths a <= b. Bijective on {2..n}.
std::int32_t phi_map(std::int32_t a, std::int32_t b, std::int32_t n, std::int32_t v);

struct Tile {
  std::int32_t width = 0;
  // Cells hit by a marker since the current cycle started.
  std::int32_t touched = 0;
};

struct SchrammStepInfo {
  bool refresh = false;
  // The two first markers fell into tiles of different classes; the step
  // then falls back to v_q = v_p.
  bool breach = false;
  bool both_unmatched = false;
  std::int32_t v_p = 0;
  std::int32_t v_q = 0;
  bool b = false;
  std::int32_t unmatched_before = 0;
  std::int32_t unmatched_after = 0;
  std::int32_t smallest_before = 0;  // 0 when nothing is unmatched
  std::int32_t smallest_after = 0;
};

class TilingPair {
 public:
  TilingPair() = default;
  static TilingPair from_partitions(const Partition& p, const Partition& q);

  std::int32_t n() const { return n_; }
  const std::vector<Tile>& p() const { return p_; }
  const std::vector<Tile>& q() const { return q_; }
  // Partner index in the other tiling, or -1.
  const std::vector<std::int32_t>& match_p() const { return match_p_; }
  const std::vector<std::int32_t>& match_q() const { return match_q_; }

  std::int32_t unmatched_count() const;
  // Smallest unmatched width over both tilings; 0 when all are matched.
  std::int32_t smallest_unmatched() const;
  bool coalesced() const { return unmatched_count() == 0; }

  Tiling tiling_p() const;
  Tiling tiling_q() const;
  Partition partition_p() const;
  Partition partition_q() const;

  // Checks equal widths on matched tiles, maximality, and that no
  // unmatched width appears on both sides.
  bool invariants_hold() const;

  // Sets touched counts; used by tests to build arbitrary mid-cycle states.
  void set_touched(std::vector<std::int32_t> tp, std::vector<std::int32_t> tq);

  SchrammStepInfo step(bool refresh, Rng& rng);

 private:
  void rematch(const std::vector<std::int32_t>& keep_p, const std::vector<std::int32_t>& keep_q);

  std::int32_t n_ = 0;
  std::vector<Tile> p_, q_;
  std::vector<std::int32_t> match_p_, match_q_;
};

SchrammStepInfo schramm_step(TilingPair& pair, bool refresh, Rng& rng);

}  // namespace matchmix::coupling
