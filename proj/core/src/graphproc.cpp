#include "matchmix/graphproc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "matchmix/sampling.hpp"

namespace matchmix::graphproc {

CliqueGraph::CliqueGraph(std::int32_t n) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  parent_.resize(static_cast<std::size_t>(n));
  std::iota(parent_.begin(), parent_.end(), 0);
  size_.assign(static_cast<std::size_t>(n), 1);
  perm_ = parent_;
}

std::int32_t CliqueGraph::find(std::int32_t v) {
  auto* p = parent_.data();
  while (p[v] != v) {
    p[v] = p[p[v]];
    v = p[v];
  }
  return v;
}

void CliqueGraph::unite(std::int32_t a, std::int32_t b) {
  ++unions_;
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  largest_ = std::max(largest_, size_[static_cast<std::size_t>(a)]);
}

std::vector<std::int32_t> CliqueGraph::component_sizes() {
  std::vector<std::int32_t> out;
  for (std::int32_t v = 0; v < n(); ++v)
    if (find(v) == v) out.push_back(size_[static_cast<std::size_t>(v)]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

void CliqueGraph::step(const CycleStructure& c, Rng& rng) {
  const auto lengths = c.nontrivial_lengths();
  std::int64_t s = 0;
  for (auto l : lengths) s += l;
  if (s > n()) throw std::invalid_argument("support exceeds the number of labels");
  // The first s entries of a partial shuffle are a uniform ordered sample;
  // cutting it into consecutive runs gives a uniform split by length.
  const auto total = static_cast<std::size_t>(n());
  for (std::size_t i = 0; i < static_cast<std::size_t>(s); ++i)
    std::swap(perm_[i], perm_[i + uniform_index(rng, total - i)]);
  std::size_t pos = 0;
  for (auto l : lengths) {
    for (std::int64_t j = 1; j < l; ++j) unite(perm_[pos], perm_[pos + static_cast<std::size_t>(j)]);
    pos += static_cast<std::size_t>(l);
  }
  ++rounds_;
}

CliqueGraph graph_step(CliqueGraph g, const CycleStructure& c, Rng& rng) {
  g.step(c, rng);
  return g;
}

double giant_fraction(const CliqueGraph& g) {
  return static_cast<double>(g.largest()) / static_cast<double>(g.n());
}

double GiantEstimate::se() const {
  return samples.size() > 1 ? sd / std::sqrt(static_cast<double>(samples.size())) : 0.0;
}

GiantEstimate summarize(double beta, std::uint64_t rounds, std::vector<double> samples) {
  GiantEstimate e;
  e.beta = beta;
  e.rounds = rounds;
  e.samples = std::move(samples);
  const double m = static_cast<double>(e.samples.size());
  if (m == 0) return e;
  e.mean = std::accumulate(e.samples.begin(), e.samples.end(), 0.0) / m;
  if (m > 1) {
    double ss = 0.0;
    for (double x : e.samples) ss += (x - e.mean) * (x - e.mean);
    e.sd = std::sqrt(ss / (m - 1));
  }
  return e;
}

GiantEstimate theta_hat(std::int32_t n, std::int32_t k, double beta, std::size_t reps,
                        std::uint64_t seed, const ReplicaRunner& run) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  const double kappa = sampling::expected_support(k).value();
  const auto rounds = static_cast<std::uint64_t>(std::floor(beta * n / kappa));
  std::vector<double> out(reps);
  run(reps, [&](std::size_t r) {
    Rng rng = derive_stream(seed, r);
    CliqueGraph g(n);
    for (std::uint64_t t = 0; t < rounds; ++t) g.step(sampling::sample_rematch_structure(k, rng), rng);
    out[r] = giant_fraction(g);
  });
  return summarize(beta, rounds, std::move(out));
}

std::vector<double> quenched_graph_run(std::int32_t n, const std::vector<CycleStructure>& schedule,
                                       Rng& rng) {
  CliqueGraph g(n);
  std::vector<double> traj;
  traj.reserve(schedule.size());
  for (const auto& c : schedule) {
    g.step(c, rng);
    traj.push_back(giant_fraction(g));
  }
  return traj;
}

GiantEstimate transposition_giant(std::int32_t n, double gamma, std::size_t reps, std::uint64_t seed,
                                  const ReplicaRunner& run) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const auto rounds = static_cast<std::uint64_t>(std::ceil(gamma * n));
  const CycleStructure swap({static_cast<std::int64_t>(n) - 2, 1});
  std::vector<double> out(reps);
  run(reps, [&](std::size_t r) {
    Rng rng = derive_stream(seed, r);
    CliqueGraph g(n);
    for (std::uint64_t t = 0; t < rounds; ++t) g.step(swap, rng);
    out[r] = giant_fraction(g);
  });
  return summarize(gamma, rounds, std::move(out));
}

double er_giant_fraction(double c) {
  if (c <= 1.0) return 0.0;
  double theta = 1.0;
  for (int i = 0; i < 10000; ++i) {
    double next = 1.0 - std::exp(-c * theta);
    if (std::fabs(next - theta) < 1e-15) return next;
    theta = next;
  }
  return theta;
}

}  // namespace matchmix::graphproc
