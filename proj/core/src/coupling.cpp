#include "matchmix/coupling.hpp"

#include <algorithm>
#include <stdexcept>

#include "matchmix/sampling.hpp"

namespace matchmix::coupling {

RoundDraw draw_round(const PerfectMatching& pm, std::int32_t k, Rng& rng) {
  if (k < 2 || k > pm.n()) throw std::invalid_argument("need 2 <= k <= n");
  RoundDraw d;
  d.chosen = walk::choose_pairs(pm, k, rng);
  sampling::sample_uniform_partners(k, rng, d.local);
  return d;
}

void apply_round(PerfectMatching& pm, const RoundDraw& draw) {
  walk::rematch_pairs(pm, draw.chosen, draw.local);
}

CycleStructure round_structure(const RoundDraw& draw) {
  return core::cycle_structure(PerfectMatching(draw.local));
}

namespace {

Object global_of(const RoundDraw& d, Object local) {
  const auto& p = d.chosen[static_cast<std::size_t>(core::slot_of(local))];
  return (local & 1) ? p.first : p.second;
}

std::int32_t find_pair(const std::vector<Pair>& chosen, Object x) {
  for (std::size_t r = 0; r < chosen.size(); ++r)
    if (chosen[r].first == x || chosen[r].second == x) return static_cast<std::int32_t>(r);
  return -1;
}

}  // namespace

RoundDraw neighbour_draw(const PerfectMatching& driver, const PerfectMatching& follower,
                         const RoundDraw& draw) {
  if (driver.n() != follower.n()) throw std::invalid_argument("matchings of different size");
  Object a = 0;
  for (Object x = 1; x <= 2 * driver.n(); ++x)
    if (driver.partner(x) != follower.partner(x)) {
      a = x;
      break;
    }
  if (a == 0) return draw;
  // Driver pairs {a,b}, {c,d}; follower pairs {a,c}, {b,d}.
  const Object b = driver.partner(a);
  const Object c = follower.partner(a);
  const Object d = driver.partner(c);
  if (follower.partner(b) != d) throw std::invalid_argument("matchings are not one swap apart");

  const std::int32_t ia = find_pair(draw.chosen, a);
  const std::int32_t ib = find_pair(draw.chosen, c);
  if (ia < 0 && ib < 0) return draw;

  RoundDraw out = draw;
  if (ia < 0 || ib < 0) {
    // Exactly one of the two pairs is rematched: relabel b <-> c inside it.
    for (auto& p : out.chosen) {
      if (p.first == b) p.first = c;
      else if (p.first == c) p.first = b;
      if (p.second == b) p.second = c;
      else if (p.second == c) p.second = b;
    }
    return out;
  }

  // Both rematched: the chosen set covers the same objects. Conjugate the
  // driver's new pairing by (z z'), z its partner of a, z' the next object
  // of X \ {a} in increasing cyclic order.
  const std::size_t m = draw.local.size();
  std::vector<Object> xs(m);
  for (std::size_t i = 0; i < m; ++i) xs[i] = global_of(draw, static_cast<Object>(i + 1));
  std::vector<Object> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  auto eta = [&](Object g) {
    auto it = std::find(xs.begin(), xs.end(), g);
    Object li = static_cast<Object>(it - xs.begin()) + 1;
    return xs[static_cast<std::size_t>(draw.local[li - 1] - 1)];
  };
  const Object z = eta(a);
  std::vector<Object> rest;
  for (Object g : sorted)
    if (g != a) rest.push_back(g);
  auto zi = std::find(rest.begin(), rest.end(), z) - rest.begin();
  const Object z2 = rest[static_cast<std::size_t>(zi + 1) % rest.size()];
  auto t = [&](Object g) { return g == z ? z2 : (g == z2 ? z : g); };

  out.chosen[static_cast<std::size_t>(ia)] = {std::min(a, c), std::max(a, c)};
  out.chosen[static_cast<std::size_t>(ib)] = {std::min(b, d), std::max(b, d)};
  std::vector<Object> xs2(m);
  for (std::size_t i = 0; i < m; ++i) xs2[i] = global_of(out, static_cast<Object>(i + 1));
  auto local_of = [&](Object g) {
    return static_cast<Object>(std::find(xs2.begin(), xs2.end(), g) - xs2.begin()) + 1;
  };
  for (std::size_t i = 0; i < m; ++i) {
    Object g = xs2[i];
    out.local[i] = local_of(t(eta(t(g))));
  }
  return out;
}

std::vector<PerfectMatching> swap_path(const PerfectMatching& a, const PerfectMatching& b) {
  if (a.n() != b.n()) throw std::invalid_argument("matchings of different size");
  std::vector<PerfectMatching> path{a};
  PerfectMatching cur = a;
  for (Object x = 1; x <= 2 * a.n(); ++x) {
    if (cur.partner(x) == b.partner(x)) continue;
    Object y = cur.partner(x);
    Object w = b.partner(x);
    Object z = cur.partner(w);
    cur.set_pair(x, w);
    cur.set_pair(y, z);
    path.push_back(cur);
  }
  return path;
}

namespace {

void swap_oriented(PerfectMatching& pm, Object a1, Object a2, Object c1, Object c2, bool cross) {
  if (cross) {
    pm.set_pair(a1, c2);
    pm.set_pair(a2, c1);
  } else {
    pm.set_pair(a1, c1);
    pm.set_pair(a2, c2);
  }
}

}  // namespace

void dp_swap_step(PerfectMatching& mu, PerfectMatching& nu, Rng& rng) {
  const std::int32_t n = nu.n();
  if (mu.n() != n) throw std::invalid_argument("matchings of different size");
  if (n < 2) return;
  // Walking each relative cycle orients every nu-pair (x, nu x) and pairs it
  // with the mu-pair (x, mu x). This is a bijection between the two pair sets.
  std::vector<Object> orient(static_cast<std::size_t>(2 * n + 1), 0);
  std::vector<char> seen(static_cast<std::size_t>(2 * n + 1), 0);
  for (Object s = 1; s <= 2 * n; ++s) {
    if (seen[s]) continue;
    Object x = s;
    do {
      Object y = nu.partner(x);
      seen[x] = seen[y] = 1;
      orient[std::min(x, y)] = x;
      x = mu.partner(y);
    } while (x != s);
  }
  Object p = static_cast<Object>(1 + uniform_index(rng, static_cast<std::size_t>(2 * n)));
  Object q;
  do {
    q = static_cast<Object>(1 + uniform_index(rng, static_cast<std::size_t>(2 * n)));
  } while (q == p || q == nu.partner(p));
  const bool b = fair_coin(rng);
  const Object x1 = orient[std::min(p, nu.partner(p))];
  const Object x2 = orient[std::min(q, nu.partner(q))];
  const Object n1 = nu.partner(x1), n2 = nu.partner(x2);
  const Object m1 = mu.partner(x1), m2 = mu.partner(x2);

  // The follower's coin is flipped only on the pairs {P, Q} where the
  // unflipped map would change the distance; the flip depends on {P, Q}
  // alone, so the follower's coin stays fair.
  const std::int64_t d0 = core::swap_distance_between(mu, nu);
  bool flip = false;
  for (bool bb : {false, true}) {
    PerfectMatching m2c = mu, n2c = nu;
    swap_oriented(n2c, x1, n1, x2, n2, bb);
    swap_oriented(m2c, x1, m1, x2, m2, bb);
    if (core::swap_distance_between(m2c, n2c) != d0) flip = true;
  }
  swap_oriented(nu, x1, n1, x2, n2, b);
  swap_oriented(mu, x1, m1, x2, m2, b != flip);
}

CycleStructure dp_round_step(PerfectMatching& mu, PerfectMatching& nu, std::int32_t k, Rng& rng) {
  const std::int32_t n = nu.n();
  if (mu.n() != n) throw std::invalid_argument("matchings of different size");
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  if (k == 2) {
    // A 2-rematch keeps its pairs with probability 1/3, otherwise it is a
    // uniform swap.
    if (uniform_index(rng, 3) == 0) return CycleStructure::identity(n);
    dp_swap_step(mu, nu, rng);
    return CycleStructure({static_cast<std::int64_t>(n) - 2, 1});
  }
  auto path = swap_path(nu, mu);
  RoundDraw draw = draw_round(nu, k, rng);
  CycleStructure c = round_structure(draw);
  std::vector<std::int64_t> counts = c.counts();
  counts[0] += n - k;
  RoundDraw cur = draw;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) cur = neighbour_draw(path[i], path[i + 1], cur);
  apply_round(nu, draw);
  apply_round(mu, cur);
  return CycleStructure(std::move(counts));
}

std::pair<PerfectMatching, PerfectMatching> distance_preserving_step(const PerfectMatching& mu,
                                                                     const PerfectMatching& nu,
                                                                     Rng& rng, DpMode mode,
                                                                     std::int32_t k) {
  if (mu.n() != nu.n()) throw std::invalid_argument("matchings of different size");
  PerfectMatching a = mu, b = nu;
  if (mode == DpMode::kSwap) {
    dp_swap_step(a, b, rng);
  } else {
    if (k > 2 && core::swap_distance_between(mu, nu) > 1)
      throw std::domain_error("rematch rounds with k > 2 preserve the distance only for neighbours");
    dp_round_step(a, b, k, rng);
  }
  return {std::move(a), std::move(b)};
}

std::pair<PerfectMatching, PerfectMatching> neighbour_start(std::int32_t n) {
  if (n < 2) throw std::invalid_argument("need n >= 2 for a neighbouring start");
  PerfectMatching mu = PerfectMatching::identity(n);
  PerfectMatching nu = mu;
  nu.set_pair(1, 3);
  nu.set_pair(2, 4);
  return {std::move(mu), std::move(nu)};
}

std::vector<walk::ProfileRow> coupled_profile_replica(std::int32_t n, std::int32_t k,
                                                      const std::vector<std::uint64_t>& times,
                                                      std::uint64_t replica, Rng& rng) {
  auto [walk_pm, other] = neighbour_start(n);
  bool coalesced = core::partition_of(walk_pm) == core::partition_of(other);
  std::vector<walk::ProfileRow> rows;
  std::uint64_t round = 0;
  std::int64_t used = 0;
  for (auto t : times) {
    while (round < t) {
      if (coalesced) {
        RoundDraw d = draw_round(walk_pm, k, rng);
        used += round_structure(d).support();
        apply_round(walk_pm, d);
      } else {
        used += dp_round_step(other, walk_pm, k, rng).support();
        coalesced = core::partition_of(walk_pm) == core::partition_of(other);
      }
      ++round;
    }
    rows.push_back({t, replica, core::fixed_points(walk_pm), used, coalesced});
  }
  return rows;
}

}  // namespace matchmix::coupling
