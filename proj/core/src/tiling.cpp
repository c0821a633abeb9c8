#include "matchmix/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace matchmix::coupling {

Tiling Tiling::from_partition(const Partition& p) { return {p.n(), p.blocks(), std::nullopt}; }

Tiling marginal_step(const Tiling& p, std::int32_t u, std::int32_t v, bool b) {
  if (p.tiles.empty()) throw std::invalid_argument("empty tiling");
  if (u != 1) throw std::invalid_argument("the distinguished tile must sit at the left with u = 1/n");
  if (v < 1 || v > p.n) throw std::invalid_argument("second marker off the grid");
  std::vector<std::int32_t> t = p.tiles;
  if (p.distinguished && *p.distinguished != 0) {
    if (*p.distinguished >= t.size()) throw std::invalid_argument("no such distinguished tile");
    std::rotate(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(*p.distinguished),
                t.begin() + static_cast<std::ptrdiff_t>(*p.distinguished) + 1);
  }
  if (std::accumulate(t.begin(), t.end(), 0) != p.n) throw std::invalid_argument("widths do not sum to n");
  if (v == 1) {
    // Degenerate split: nothing to do.
  } else if (v <= t[0]) {
    if (b) {
      std::int32_t w = t[0];
      t[0] = v - 1;
      t.push_back(w - v + 1);
    }
  } else {
    std::int32_t acc = t[0];
    std::size_t j = 1;
    while (acc + t[j] < v) acc += t[j++];
    t[0] += t[j];
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(j));
  }
  std::sort(t.begin(), t.end(), std::greater<>());
  return {p.n, std::move(t), std::nullopt};
}

std::int32_t phi_map(std::int32_t a, std::int32_t b, std::int32_t n, std::int32_t v) {
  if (a < 1 || a > b || b > n) throw std::invalid_argument("phi_map needs 1 <= a <= b <= n");
  if (v == 1) throw std::invalid_argument("v = 1/n is reserved for the first marker");
  if (v < 2 || v > n) throw std::invalid_argument("v off the grid");
  const std::int32_t g = (a + 1) / 2 - 1;  // ceil(a/2) - 1
  // For even a < b the plain map hits b - a/2 + 1 twice and misses a/2 + 1;
  // sending g + 2 = a/2 + 1 to itself repairs it.
  const bool patch = (a % 2 == 0) && a < b;
  if (v > b || v <= g + 1) return v;
  if (patch && v == g + 2) return v;
  if (v > a) return v - g;
  return v + b - a;
}

namespace {

// Inverse-CDF hypergeometric draw: successes among `draws` cells taken from
// `total` cells of which `good` are marked.
std::int32_t hypergeometric(double u, std::int32_t total, std::int32_t good, std::int32_t draws) {
  std::int32_t lo = std::max(0, draws - (total - good));
  std::int32_t hi = std::min(good, draws);
  if (lo >= hi) return lo;
  auto lchoose = [](double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  };
  const double denom = lchoose(total, draws);
  double acc = 0.0;
  for (std::int32_t h = lo; h < hi; ++h) {
    acc += std::exp(lchoose(good, h) + lchoose(total - good, draws - h) - denom);
    if (u < acc) return h;
  }
  return hi;
}

struct Move {
  std::vector<Tile> tiles;
  std::vector<std::int32_t> origin;  // old index of an unchanged tile, else -1
};

Move apply_move(const std::vector<Tile>& tiles, const std::vector<std::int32_t>& layout,
                std::int32_t v, bool b, bool refresh, double uj, double uh) {
  const std::int32_t d = layout[0];
  const Tile D = tiles[static_cast<std::size_t>(d)];
  const std::int32_t td = D.touched + (refresh ? 1 : 0);
  std::int32_t acc = 0;
  std::int32_t hit = -1;
  for (auto idx : layout) {
    acc += tiles[static_cast<std::size_t>(idx)].width;
    if (v <= acc) {
      hit = idx;
      break;
    }
  }
  Move m;
  auto keep_all_but = [&](std::int32_t x, std::int32_t y) {
    for (std::size_t i = 0; i < tiles.size(); ++i) {
      auto ii = static_cast<std::int32_t>(i);
      if (ii == x || ii == y) continue;
      m.tiles.push_back(tiles[i]);
      m.origin.push_back(ii);
    }
  };
  if (hit != d) {
    const Tile J = tiles[static_cast<std::size_t>(hit)];
    bool jt = J.touched > 0 && uj * J.width < J.touched;
    keep_all_but(d, hit);
    m.tiles.push_back({D.width + J.width, td + J.touched + (jt ? 0 : 1)});
    m.origin.push_back(-1);
    return m;
  }
  bool jt = D.width > 1 && uj * (D.width - 1) < (td - 1);
  if (!b) {
    keep_all_but(d, -1);
    m.tiles.push_back({D.width, td + (jt ? 0 : 1)});
    m.origin.push_back(d);
    return m;
  }
  std::int32_t rest = td - 1 - (jt ? 1 : 0);
  std::int32_t h = hypergeometric(uh, D.width - 2, rest, v - 2);
  keep_all_but(d, -1);
  m.tiles.push_back({v - 1, 1 + h});
  m.origin.push_back(-1);
  m.tiles.push_back({D.width - v + 1, 1 + rest - h});
  m.origin.push_back(-1);
  return m;
}

}  // namespace

TilingPair TilingPair::from_partitions(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw std::invalid_argument("partitions of different n");
  TilingPair tp;
  tp.n_ = p.n();
  for (auto w : p.blocks()) tp.p_.push_back({w, 0});
  for (auto w : q.blocks()) tp.q_.push_back({w, 0});
  tp.rematch(std::vector<std::int32_t>(tp.p_.size(), -1), std::vector<std::int32_t>(tp.q_.size(), -1));
  return tp;
}

void TilingPair::set_touched(std::vector<std::int32_t> tp, std::vector<std::int32_t> tq) {
  if (tp.size() != p_.size() || tq.size() != q_.size()) throw std::invalid_argument("touched size mismatch");
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (tp[i] < 0 || tp[i] > p_[i].width) throw std::invalid_argument("bad touched count");
    p_[i].touched = tp[i];
  }
  for (std::size_t i = 0; i < tq.size(); ++i) {
    if (tq[i] < 0 || tq[i] > q_[i].width) throw std::invalid_argument("bad touched count");
    q_[i].touched = tq[i];
  }
}

void TilingPair::rematch(const std::vector<std::int32_t>& origin_p,
                         const std::vector<std::int32_t>& origin_q) {
  std::vector<std::int32_t> new_of_old_q;
  std::int32_t max_old = -1;
  for (auto o : origin_q) max_old = std::max(max_old, o);
  new_of_old_q.assign(static_cast<std::size_t>(max_old + 1), -1);
  for (std::size_t j = 0; j < origin_q.size(); ++j)
    if (origin_q[j] >= 0) new_of_old_q[static_cast<std::size_t>(origin_q[j])] = static_cast<std::int32_t>(j);

  std::vector<std::int32_t> mp(p_.size(), -1), mq(q_.size(), -1);
  // Pairs whose two tiles both survived unchanged stay matched.
  for (std::size_t i = 0; i < origin_p.size(); ++i) {
    std::int32_t o = origin_p[i];
    if (o < 0 || static_cast<std::size_t>(o) >= match_p_.size()) continue;
    std::int32_t oq = match_p_[static_cast<std::size_t>(o)];
    if (oq < 0 || oq > max_old) continue;
    std::int32_t j = new_of_old_q[static_cast<std::size_t>(oq)];
    if (j >= 0 && q_[static_cast<std::size_t>(j)].width == p_[i].width) {
      mp[i] = j;
      mq[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(i);
    }
  }
  // Greedy on the rest, equal touched counts first, then index order.
  std::map<std::int32_t, std::vector<std::int32_t>, std::greater<>> free_p, free_q;
  for (std::size_t i = 0; i < p_.size(); ++i)
    if (mp[i] < 0) free_p[p_[i].width].push_back(static_cast<std::int32_t>(i));
  for (std::size_t j = 0; j < q_.size(); ++j)
    if (mq[j] < 0) free_q[q_[j].width].push_back(static_cast<std::int32_t>(j));
  for (auto& [w, ps] : free_p) {
    auto it = free_q.find(w);
    if (it == free_q.end()) continue;
    auto& qs = it->second;
    for (int pass = 0; pass < 2; ++pass) {
      for (auto i : ps) {
        if (mp[static_cast<std::size_t>(i)] >= 0) continue;
        for (auto j : qs) {
          if (mq[static_cast<std::size_t>(j)] >= 0) continue;
          if (pass == 0 && p_[static_cast<std::size_t>(i)].touched != q_[static_cast<std::size_t>(j)].touched)
            continue;
          mp[static_cast<std::size_t>(i)] = j;
          mq[static_cast<std::size_t>(j)] = i;
          break;
        }
      }
    }
  }
  match_p_ = std::move(mp);
  match_q_ = std::move(mq);
}

std::int32_t TilingPair::unmatched_count() const {
  std::int32_t c = 0;
  for (auto m : match_p_) c += m < 0;
  for (auto m : match_q_) c += m < 0;
  return c;
}

std::int32_t TilingPair::smallest_unmatched() const {
  std::int32_t s = 0;
  auto consider = [&](std::int32_t w) { s = (s == 0) ? w : std::min(s, w); };
  for (std::size_t i = 0; i < p_.size(); ++i)
    if (match_p_[i] < 0) consider(p_[i].width);
  for (std::size_t j = 0; j < q_.size(); ++j)
    if (match_q_[j] < 0) consider(q_[j].width);
  return s;
}

Tiling TilingPair::tiling_p() const {
  Tiling t{n_, {}, std::nullopt};
  for (const auto& x : p_) t.tiles.push_back(x.width);
  std::sort(t.tiles.begin(), t.tiles.end(), std::greater<>());
  return t;
}

Tiling TilingPair::tiling_q() const {
  Tiling t{n_, {}, std::nullopt};
  for (const auto& x : q_) t.tiles.push_back(x.width);
  std::sort(t.tiles.begin(), t.tiles.end(), std::greater<>());
  return t;
}

Partition TilingPair::partition_p() const { return tiling_p().partition(); }
Partition TilingPair::partition_q() const { return tiling_q().partition(); }

bool TilingPair::invariants_hold() const {
  std::int32_t sp = 0, sq = 0;
  for (const auto& t : p_) sp += t.width;
  for (const auto& t : q_) sq += t.width;
  if (sp != n_ || sq != n_) return false;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    auto j = match_p_[i];
    if (j < 0) continue;
    if (match_q_[static_cast<std::size_t>(j)] != static_cast<std::int32_t>(i)) return false;
    if (q_[static_cast<std::size_t>(j)].width != p_[i].width) return false;
  }
  std::map<std::int32_t, int> up;
  for (std::size_t i = 0; i < p_.size(); ++i)
    if (match_p_[i] < 0) up[p_[i].width] = 1;
  for (std::size_t j = 0; j < q_.size(); ++j)
    if (match_q_[j] < 0 && up.count(q_[j].width)) return false;
  return true;
}

SchrammStepInfo TilingPair::step(bool refresh, Rng& rng) {
  SchrammStepInfo info;
  info.unmatched_before = unmatched_count();
  info.smallest_before = smallest_unmatched();
  std::int64_t tot_p = 0, tot_q = 0;
  for (const auto& t : p_) tot_p += t.touched;
  for (const auto& t : q_) tot_q += t.touched;
  if (tot_p == 0 || tot_q == 0) refresh = true;
  info.refresh = refresh;
  if (refresh) {
    for (auto& t : p_) t.touched = 0;
    for (auto& t : q_) t.touched = 0;
  }

  std::vector<std::int32_t> unp, unq, matched;  // matched: p indices
  for (std::size_t i = 0; i < p_.size(); ++i)
    (match_p_[i] < 0 ? unp : matched).push_back(static_cast<std::int32_t>(i));
  for (std::size_t j = 0; j < q_.size(); ++j)
    if (match_q_[j] < 0) unq.push_back(static_cast<std::int32_t>(j));

  std::int32_t dp = -1, dq = -1;
  if (refresh) {
    // Same grid point in both base layouts: unmatched tiles first, then the
    // matched pairs in a common order.
    std::int32_t u = 1 + static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(n_)));
    std::int32_t acc = 0;
    for (auto i : unp) {
      acc += p_[static_cast<std::size_t>(i)].width;
      if (u <= acc) {
        dp = i;
        break;
      }
    }
    acc = 0;
    for (auto j : unq) {
      acc += q_[static_cast<std::size_t>(j)].width;
      if (u <= acc) {
        dq = j;
        break;
      }
    }
    if (dp < 0) {
      for (auto i : unp) u -= p_[static_cast<std::size_t>(i)].width;
      acc = 0;
      for (auto i : matched) {
        acc += p_[static_cast<std::size_t>(i)].width;
        if (u <= acc) {
          dp = i;
          dq = match_p_[static_cast<std::size_t>(i)];
          break;
        }
      }
    }
  } else {
    // Class of a tile: its matched pair (named by the p index) or -1.
    std::vector<double> wp(p_.size() + 1, 0.0), wq(p_.size() + 1, 0.0);
    for (std::size_t i = 0; i < p_.size(); ++i)
      wp[static_cast<std::size_t>(match_p_[i] < 0 ? 0 : i + 1)] += p_[i].touched / static_cast<double>(tot_p);
    for (std::size_t j = 0; j < q_.size(); ++j)
      wq[static_cast<std::size_t>(match_q_[j] < 0 ? 0 : match_q_[j] + 1)] +=
          q_[j].touched / static_cast<double>(tot_q);
    std::vector<double> common(wp.size());
    double overlap = 0.0;
    for (std::size_t c = 0; c < wp.size(); ++c) overlap += common[c] = std::min(wp[c], wq[c]);
    auto pick = [&](const std::vector<double>& w, double total) {
      double x = uniform01(rng) * total;
      std::size_t last = 0;
      for (std::size_t c = 0; c < w.size(); ++c) {
        if (w[c] <= 0.0) continue;
        last = c;
        if (x < w[c]) return c;
        x -= w[c];
      }
      return last;
    };
    std::size_t cp, cq;
    if (uniform01(rng) < overlap) {
      cp = cq = pick(common, overlap);
    } else {
      std::vector<double> rp(wp.size()), rq(wq.size());
      for (std::size_t c = 0; c < wp.size(); ++c) {
        rp[c] = std::max(0.0, wp[c] - common[c]);
        rq[c] = std::max(0.0, wq[c] - common[c]);
      }
      double sp = std::accumulate(rp.begin(), rp.end(), 0.0);
      double sq = std::accumulate(rq.begin(), rq.end(), 0.0);
      if (sp < 1e-12 || sq < 1e-12) {
        // Rounding left no residual mass: the laws agree.
        cp = cq = pick(common, overlap);
      } else {
        cp = pick(rp, sp);
        cq = pick(rq, sq);
      }
    }
    // The touched laws disagree here. q follows p's class so the two
    // distinguished tiles stay matched to each other or both unmatched.
    info.breach = cp != cq;
    cq = cp;
    auto within = [&](const std::vector<Tile>& tiles, const std::vector<std::int32_t>& pool) {
      std::int64_t tot = 0;
      for (auto i : pool) tot += tiles[static_cast<std::size_t>(i)].touched;
      const bool by_width = tot == 0;  // only after a breach
      if (by_width)
        for (auto i : pool) tot += tiles[static_cast<std::size_t>(i)].width;
      auto x = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(tot)));
      for (auto i : pool) {
        const auto& t = tiles[static_cast<std::size_t>(i)];
        x -= by_width ? t.width : t.touched;
        if (x < 0) return i;
      }
      return pool.back();
    };
    dp = cp == 0 ? within(p_, unp) : static_cast<std::int32_t>(cp - 1);
    dq = cq == 0 ? within(q_, unq) : match_p_[cq - 1];
  }

  // Layouts: distinguished tile, other unmatched tiles, matched pairs.
  std::vector<std::int32_t> lp{dp}, lq{dq};
  for (auto i : unp)
    if (i != dp) lp.push_back(i);
  for (auto j : unq)
    if (j != dq) lq.push_back(j);
  for (auto i : matched) {
    if (i != dp) lp.push_back(i);
    if (match_p_[static_cast<std::size_t>(i)] != dq) lq.push_back(match_p_[static_cast<std::size_t>(i)]);
  }

  const bool p_unmatched = match_p_[static_cast<std::size_t>(dp)] < 0;
  const bool q_unmatched = match_q_[static_cast<std::size_t>(dq)] < 0;
  info.both_unmatched = p_unmatched && q_unmatched;
  if (!info.breach && info.both_unmatched) {
    std::int32_t a = p_[static_cast<std::size_t>(dp)].width;
    std::int32_t b = q_[static_cast<std::size_t>(dq)].width;
    std::int32_t v = 2 + static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(n_ - 1)));
    if (a <= b) {
      info.v_p = v;
      info.v_q = phi_map(a, b, n_, v);
    } else {
      info.v_q = v;
      info.v_p = phi_map(b, a, n_, v);
    }
  } else {
    info.v_p = info.v_q =
        2 + static_cast<std::int32_t>(uniform_index(rng, static_cast<std::size_t>(n_ - 1)));
  }
  info.b = fair_coin(rng);
  // Common random numbers for the touched bookkeeping.
  const double uj = uniform01(rng), uh = uniform01(rng);

  Move mp = apply_move(p_, lp, info.v_p, info.b, refresh, uj, uh);
  Move mq = apply_move(q_, lq, info.v_q, info.b, refresh, uj, uh);
  p_ = std::move(mp.tiles);
  q_ = std::move(mq.tiles);
  rematch(mp.origin, mq.origin);

  info.unmatched_after = unmatched_count();
  info.smallest_after = smallest_unmatched();
  return info;
}

SchrammStepInfo schramm_step(TilingPair& pair, bool refresh, Rng& rng) { return pair.step(refresh, rng); }

}  // namespace matchmix::coupling
