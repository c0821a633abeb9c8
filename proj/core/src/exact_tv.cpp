#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "matchmix/walk.hpp"

namespace matchmix::walk {

using core::Object;

namespace {

using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

// Visits every k-subset of {0..n-1} as an index vector.
template <typename Visit>
void for_each_subset(std::int32_t n, std::int32_t k, Visit&& visit) {
  std::vector<std::int32_t> idx(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::int32_t i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (std::int32_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binomial(std::int32_t n, std::int32_t k) {
  double r = 1.0;
  for (std::int32_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

std::vector<std::vector<Object>> local_matchings(std::int32_t k) {
  std::vector<std::vector<Object>> out;
  core::for_each_matching(k, [&](const PerfectMatching& pm) { out.push_back(pm.partners()); });
  return out;
}

void compact(std::vector<std::pair<std::size_t, double>>& row) {
  std::map<std::size_t, double> acc;
  for (auto [j, p] : row) acc[j] += p;
  row.assign(acc.begin(), acc.end());
}

std::vector<double> evolve_tv(const SparseRows& rows, const std::vector<double>& target,
                              std::size_t start, std::uint64_t t_max) {
  const std::size_t m = rows.size();
  std::vector<double> v(m, 0.0), next(m);
  v[start] = 1.0;
  std::vector<double> out;
  out.reserve(t_max + 1);
  for (std::uint64_t t = 0;; ++t) {
    double tv = 0.0;
    for (std::size_t i = 0; i < m; ++i) tv += std::fabs(v[i] - target[i]);
    out.push_back(0.5 * tv);
    if (t == t_max) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (v[i] == 0.0) continue;
      for (auto [j, p] : rows[i]) next[j] += v[i] * p;
    }
    v.swap(next);
  }
  return out;
}

std::vector<double> evolve_tv_dense(const std::vector<double>& kernel, std::size_t m,
                                    std::size_t start, std::uint64_t t_max) {
  std::vector<double> v(m, 0.0), next(m);
  v[start] = 1.0;
  const double u = 1.0 / static_cast<double>(m);
  std::vector<double> out;
  for (std::uint64_t t = 0;; ++t) {
    double tv = 0.0;
    for (double x : v) tv += std::fabs(x - u);
    out.push_back(0.5 * tv);
    if (t == t_max) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (v[i] == 0.0) continue;
      const double* row = &kernel[i * m];
      for (std::size_t j = 0; j < m; ++j) next[j] += v[i] * row[j];
    }
    v.swap(next);
  }
  return out;
}

// Canonical matching with the given partition: block b occupies consecutive
// slots as one cycle.
PerfectMatching representative(const Partition& p) {
  PerfectMatching pm = PerfectMatching::identity(p.n());
  std::int32_t base = 0;
  for (auto len : p.blocks()) {
    for (std::int32_t r = 0; r < len; ++r) {
      std::int32_t s = base + r;
      std::int32_t next = base + (r + 1) % len;
      if (len > 1) pm.set_pair(2 * s + 2, 2 * next + 1);
    }
    base += len;
  }
  return pm;
}

Partition merged(const std::vector<std::int32_t>& blocks, std::size_t i, std::size_t j) {
  std::vector<std::int32_t> b;
  b.reserve(blocks.size() - 1);
  for (std::size_t r = 0; r < blocks.size(); ++r)
    if (r != i && r != j) b.push_back(blocks[r]);
  b.push_back(blocks[i] + blocks[j]);
  return Partition(std::move(b));
}

Partition split(const std::vector<std::int32_t>& blocks, std::size_t i, std::int32_t left) {
  std::vector<std::int32_t> b;
  b.reserve(blocks.size() + 1);
  for (std::size_t r = 0; r < blocks.size(); ++r)
    if (r != i) b.push_back(blocks[r]);
  b.push_back(left);
  b.push_back(blocks[i] - left);
  return Partition(std::move(b));
}

}  // namespace

double uniform_partition_probability(const Partition& p) {
  const std::int32_t n = p.n();
  std::map<std::int32_t, std::int32_t> mult;
  for (auto b : p.blocks()) ++mult[b];
  // |{M : partition_of(M) = p}| = n! prod_l (2^(l-1)/l)^(c_l) / c_l!.
  double lg = std::lgamma(n + 1.0);
  for (auto [l, c] : mult)
    lg += c * ((l - 1) * std::log(2.0) - std::log(static_cast<double>(l))) - std::lgamma(c + 1.0);
  for (std::int32_t odd = 3; odd <= 2 * n - 1; odd += 2) lg -= std::log(static_cast<double>(odd));
  return std::exp(lg);
}

std::vector<double> uniform_partition_law(std::int32_t n) {
  std::vector<double> out;
  for (const auto& p : core::integer_partitions(n)) out.push_back(uniform_partition_probability(p));
  return out;
}

std::vector<std::vector<std::pair<std::size_t, double>>> lumped_kernel_by_summation(
    std::int32_t n, std::int32_t k) {
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  auto parts = core::integer_partitions(n);
  std::unordered_map<Partition, std::size_t> index;
  for (std::size_t i = 0; i < parts.size(); ++i) index.emplace(parts[i], i);
  auto locals = local_matchings(k);
  const double w = 1.0 / (binomial(n, k) * static_cast<double>(locals.size()));
  SparseRows rows(parts.size());
  for (std::size_t s = 0; s < parts.size(); ++s) {
    const PerfectMatching rep = representative(parts[s]);
    const auto pairs = rep.pairs();
    std::map<std::size_t, double> acc;
    for_each_subset(n, k, [&](const std::vector<std::int32_t>& idx) {
      std::vector<Pair> chosen;
      for (auto i : idx) chosen.push_back(pairs[static_cast<std::size_t>(i)]);
      for (const auto& local : locals) {
        PerfectMatching pm = rep;
        rematch_pairs(pm, chosen, local);
        acc[index.at(core::partition_of(pm))] += w;
      }
    });
    rows[s].assign(acc.begin(), acc.end());
  }
  return rows;
}

std::vector<std::vector<std::pair<std::size_t, double>>> lumped_kernel(std::int32_t n,
                                                                       std::int32_t k,
                                                                       TvLimits limits) {
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  if (n > limits.lumped_n_cap)
    throw std::length_error("lumped kernel for n=" + std::to_string(n) + " is infeasible");
  if (k > 2) {
    if (n > limits.lumped_enum_n_cap || k > limits.lumped_enum_k_cap)
      throw std::length_error("lumped kernel for k>2 is capped at n<=" +
                              std::to_string(limits.lumped_enum_n_cap) +
                              ", k<=" + std::to_string(limits.lumped_enum_k_cap));
    return lumped_kernel_by_summation(n, k);
  }
  auto parts = core::integer_partitions(n);
  std::unordered_map<Partition, std::size_t> index;
  for (std::size_t i = 0; i < parts.size(); ++i) index.emplace(parts[i], i);
  const double pairs_total = binomial(n, 2);
  SparseRows rows(parts.size());
  for (std::size_t s = 0; s < parts.size(); ++s) {
    const auto& b = parts[s].blocks();
    auto& row = rows[s];
    double stay = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      // Both pairs in block i: a third of rematches split it, uniformly.
      double same = binomial(b[i], 2) / pairs_total;
      if (b[i] >= 2) {
        for (std::int32_t r = 1; r < b[i]; ++r)
          row.emplace_back(index.at(split(b, i, r)), same / 3.0 / (b[i] - 1));
        stay += same * 2.0 / 3.0;
      }
      // Pairs in different blocks: two thirds of rematches merge.
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        double cross = static_cast<double>(b[i]) * b[j] / pairs_total;
        row.emplace_back(index.at(merged(b, i, j)), cross * 2.0 / 3.0);
        stay += cross / 3.0;
      }
    }
    row.emplace_back(s, stay);
    compact(row);
  }
  return rows;
}

std::vector<double> exact_tv_lumped(std::int32_t n, std::int32_t k, std::uint64_t t_max,
                                    TvLimits limits) {
  auto rows = lumped_kernel(n, k, limits);
  auto parts = core::integer_partitions(n);
  // All-ones is the last partition in reverse lexicographic order.
  return evolve_tv(rows, uniform_partition_law(n), parts.size() - 1, t_max);
}

std::vector<double> exact_tv_full(std::int32_t n, std::int32_t k, std::uint64_t t_max,
                                  TvLimits limits) {
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  if (n > limits.enumeration_cap)
    throw std::length_error("state space of M_" + std::to_string(n) + " exceeds the enumeration cap");
  const std::uint64_t states = core::matching_count(n);
  auto locals = local_matchings(k);
  const double per_state = binomial(n, k) * static_cast<double>(locals.size());
  if (static_cast<double>(states) * per_state > static_cast<double>(limits.max_transitions))
    throw std::length_error("full kernel for n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                            " is infeasible");
  const double w = 1.0 / per_state;
  const std::size_t m = states;
  const bool dense = m <= 10000;
  std::vector<double> kernel;
  SparseRows rows;
  if (dense)
    kernel.assign(m * m, 0.0);
  else
    rows.resize(m);
  core::EnumerationLimits lim{limits.enumeration_cap, false};
  std::size_t s = 0;
  core::for_each_matching(n, [&](const PerfectMatching& from) {
    const auto pairs = from.pairs();
    std::vector<std::pair<std::size_t, double>> row;
    for_each_subset(n, k, [&](const std::vector<std::int32_t>& idx) {
      std::vector<Pair> chosen;
      for (auto i : idx) chosen.push_back(pairs[static_cast<std::size_t>(i)]);
      for (const auto& local : locals) {
        PerfectMatching pm = from;
        rematch_pairs(pm, chosen, local);
        auto j = static_cast<std::size_t>(core::matching_rank(pm));
        if (dense)
          kernel[s * m + j] += w;
        else
          row.emplace_back(j, w);
      }
    });
    if (!dense) {
      compact(row);
      rows[s] = std::move(row);
    }
    ++s;
  }, lim);
  // id_n has rank 0: every object pairs with its successor.
  if (dense) return evolve_tv_dense(kernel, m, 0, t_max);
  return evolve_tv(rows, std::vector<double>(m, 1.0 / static_cast<double>(m)), 0, t_max);
}

std::vector<TvOracleResult> exact_tv(std::int32_t n, std::int32_t k, std::uint64_t t_max,
                                     TvLimits limits) {
  auto lumped = exact_tv_lumped(n, k, t_max, limits);
  std::optional<std::vector<double>> full;
  try {
    full = exact_tv_full(n, k, t_max, limits);
  } catch (const std::length_error&) {
  }
  std::vector<TvOracleResult> out;
  for (std::uint64_t t = 0; t <= t_max; ++t)
    out.push_back({t, full ? std::optional<double>((*full)[t]) : std::nullopt, lumped[t]});
  return out;
}

}  // namespace matchmix::walk
