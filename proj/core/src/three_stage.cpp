#include <chrono>
#include <cmath>
#include <stdexcept>

#include "matchmix/coupling.hpp"
#include "matchmix/sampling.hpp"

namespace matchmix::coupling {

CouplingStageConfig CouplingStageConfig::make(std::int32_t n, std::int32_t k, double beta,
                                              double delta) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  CouplingStageConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.beta = beta;
  cfg.delta = delta;
  cfg.kappa = sampling::expected_support(k).value();
  cfg.rho = sampling::rematch_law(k).rho;
  const double bn = beta * n;
  const double burn = std::pow(delta, -9.0);
  cfg.horizon_rounds = static_cast<std::uint64_t>(std::floor(bn / cfg.kappa));
  cfg.s3 = std::ceil(bn / cfg.kappa) * cfg.rho;
  // With beta n < delta^-9 the burn-in budget is negative: no Schramm stage.
  cfg.stage2_enabled = bn >= burn;
  if (cfg.stage2_enabled) {
    cfg.s1 = std::max(0.0, std::floor((bn - burn) / cfg.kappa) * cfg.rho);
    cfg.s2 = cfg.s1 + std::ceil(burn);
  }
  cfg.s1 = std::min(cfg.s1, cfg.s3);
  cfg.s2 = std::min(std::max(cfg.s2, cfg.s1), cfg.s3);
  return cfg;
}

namespace {

// Fills slots [base, base + len) with one canonical cycle.
void place_cycle(PerfectMatching& pm, std::int32_t base, std::int32_t len) {
  if (len < 2) return;
  for (std::int32_t r = 0; r < len; ++r) {
    std::int32_t s = base + r;
    std::int32_t next = base + (r + 1) % len;
    pm.set_pair(2 * s + 2, 2 * next + 1);
  }
}

bool same_partition(const PerfectMatching& a, const PerfectMatching& b) {
  return core::cycle_structure(a) == core::cycle_structure(b);
}

}  // namespace

std::pair<PerfectMatching, PerfectMatching> lift_tilings(const TilingPair& pair) {
  const std::int32_t n = pair.n();
  PerfectMatching mu = PerfectMatching::identity(n), nu = mu;
  std::int32_t base = 0;
  for (std::size_t i = 0; i < pair.p().size(); ++i) {
    if (pair.match_p()[i] < 0) continue;
    std::int32_t w = pair.p()[i].width;
    place_cycle(mu, base, w);
    place_cycle(nu, base, w);
    base += w;
  }
  std::int32_t bp = base, bq = base;
  for (std::size_t i = 0; i < pair.p().size(); ++i)
    if (pair.match_p()[i] < 0) {
      place_cycle(mu, bp, pair.p()[i].width);
      bp += pair.p()[i].width;
    }
  for (std::size_t j = 0; j < pair.q().size(); ++j)
    if (pair.match_q()[j] < 0) {
      place_cycle(nu, bq, pair.q()[j].width);
      bq += pair.q()[j].width;
    }
  return {std::move(mu), std::move(nu)};
}

CouplingOutcome three_stage_coupling(const PerfectMatching& mu0, const PerfectMatching& nu0,
                                     const CouplingStageConfig& cfg, Rng& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  if (mu0.n() != cfg.n || nu0.n() != cfg.n) throw std::invalid_argument("matchings do not match the config");
  if (core::swap_distance_between(mu0, nu0) > 1)
    throw std::invalid_argument("the coupling starts from matchings at most one swap apart");

  CouplingOutcome out;
  PerfectMatching mu = mu0, nu = nu0;
  double clock = 0.0;
  std::uint64_t round = 0;
  bool coalesced = same_partition(mu, nu);
  if (coalesced) out.coalesced_round = 0;
  bool schramm_done = !cfg.stage2_enabled;

  while (!coalesced && round < cfg.horizon_rounds) {
    if (!schramm_done && clock >= cfg.s1) {
      schramm_done = true;
      TilingPair pair = TilingPair::from_partitions(core::partition_of(mu), core::partition_of(nu));
      const std::int32_t u = pair.smallest_unmatched();
      out.a_delta = u == 0 || u >= cfg.delta * cfg.n;
      if (out.a_delta) {
        out.stage2_ran = true;
        // Whole rounds until the clock passes s2.
        while (clock < cfg.s2 && round < cfg.horizon_rounds && !pair.coalesced()) {
          CycleStructure c = sampling::sample_rematch_structure(cfg.k, rng);
          auto d = c.swap_distance();
          auto refresh = sampling::refresh_times(c);
          std::size_t next = 0;
          for (std::int64_t s = 1; s <= d; ++s) {
            bool flag = next < refresh.size() && refresh[next] == s;
            if (flag) ++next;
            if (pair.step(flag, rng).breach) ++out.breaches;
          }
          clock += static_cast<double>(d);
          out.swaps += static_cast<std::uint64_t>(d);
          ++round;
        }
        std::tie(mu, nu) = lift_tilings(pair);
        if (pair.coalesced()) {
          coalesced = true;
          out.coalesced_round = static_cast<std::int64_t>(round);
        }
        continue;
      }
    }
    CycleStructure c = dp_round_step(mu, nu, cfg.k, rng);
    clock += static_cast<double>(c.swap_distance());
    out.swaps += static_cast<std::uint64_t>(c.swap_distance());
    ++round;
    if (same_partition(mu, nu)) {
      coalesced = true;
      out.coalesced_round = static_cast<std::int64_t>(round);
    }
  }
  out.coalesced = coalesced;
  out.final_distance = coalesced ? 0 : core::swap_distance_between(mu, nu);
  out.rounds = round;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ContractionEstimate estimate_contraction(std::int32_t n, std::int32_t k, double beta, double delta,
                                         std::size_t reps, std::uint64_t seed,
                                         const ReplicaRunner& run) {
  auto cfg = CouplingStageConfig::make(n, k, beta, delta);
  auto [mu0, nu0] = neighbour_start(n);
  ContractionEstimate est;
  est.runs.resize(reps);
  run(reps, [&](std::size_t r) {
    Rng rng = derive_stream(seed, r);
    est.runs[r] = three_stage_coupling(mu0, nu0, cfg, rng);
  });
  if (reps == 0) return est;
  double sum = 0.0, sq = 0.0, co = 0.0;
  for (const auto& o : est.runs) {
    sum += static_cast<double>(o.final_distance);
    sq += static_cast<double>(o.final_distance * o.final_distance);
    co += o.coalesced ? 1.0 : 0.0;
  }
  const double m = static_cast<double>(reps);
  est.lambda = sum / m;
  est.coalesced_fraction = co / m;
  if (reps > 1) {
    double var = (sq - m * est.lambda * est.lambda) / (m - 1.0);
    est.se = std::sqrt(std::max(0.0, var) / m);
  }
  return est;
}

}  // namespace matchmix::coupling
