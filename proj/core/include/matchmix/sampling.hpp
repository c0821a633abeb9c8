#pragma once

#include <cstdint>
#include <vector>

#include "matchmix/matching.hpp"
#include "matchmix/random.hpp"

namespace matchmix::sampling {

using core::CycleStructure;
using core::PerfectMatching;
using core::SwapChoice;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// Markers are 0-based pair slots.
struct SwapStep {
  std::int32_t first = 0;
  std::int32_t second = 0;
  SwapChoice choice = SwapChoice::kBar;
};

struct SwapSequence {
  std::vector<SwapStep> steps;
  std::vector<bool> refresh;
  // Set by the relaxed generator when some step breaks the conditional rules.
  bool violation = false;
  std::vector<bool> step_violation;
};

struct RematchLaw {
  std::int32_t k = 0;
  Rational kappa;
  double rho = 0.0;
  double rho_se = 0.0;
  bool rho_exact = false;
  Rational rho_rational;  // meaningful when rho_exact
};

PerfectMatching sample_uniform_matching(std::int32_t n, Rng& rng);

// Partner-array form of the above on objects 1..2n, written into out.
void sample_uniform_partners(std::int32_t n, Rng& rng, std::vector<core::Object>& out);

PerfectMatching sample_uniform_cycle_via_swaps(std::int32_t l, Rng& rng);

PerfectMatching sample_k_rematch(std::int32_t n, std::int32_t k, Rng& rng);

// Cycle structure of a uniform element of M_k (the law of one round's c).
CycleStructure sample_rematch_structure(std::int32_t k, Rng& rng);

// 1-based swap indices at which a new cycle starts; cycles are processed
// longest first.
std::vector<std::int64_t> refresh_times(const CycleStructure& c);

SwapSequence swap_sequence_conditional(const CycleStructure& c, std::int32_t n, Rng& rng);
SwapSequence swap_sequence_relaxed(const CycleStructure& c, std::int32_t n, Rng& rng);

// Applies the steps to the given matching, slot by slot. Slot i holds the
// pair through its lower object's position in the sequence bookkeeping.
PerfectMatching apply_swap_sequence(const SwapSequence& seq, std::int32_t n);

Rational expected_support(std::int32_t k);
RematchLaw rematch_law(std::int32_t k, std::uint64_t mc_samples = 200000, std::uint64_t seed = 1);

// Violation indicator for a window of delta consecutive relaxed swap steps
// that starts at a uniform swap of a fresh round; rounds draw c iid from
// the uniform k-rematch law.
bool relaxed_window_violates(std::int32_t n, std::int32_t k, std::int32_t delta, Rng& rng);

}  // namespace matchmix::sampling
