#pragma once

#include <cstdint>
#include <vector>

#include "matchmix/matching.hpp"
#include "matchmix/random.hpp"
#include "matchmix/replicas.hpp"

namespace matchmix::graphproc {

using core::CycleStructure;

// Components of a graph on pair labels 0..n-1 to which cliques are added.
// Union by size with path halving.
class CliqueGraph {
 public:
  explicit CliqueGraph(std::int32_t n);

  std::int32_t n() const { return static_cast<std::int32_t>(parent_.size()); }
  std::uint64_t rounds_applied() const { return rounds_; }
  std::uint64_t union_calls() const { return unions_; }
  std::int32_t largest() const { return largest_; }

  std::int32_t find(std::int32_t v);
  std::int32_t component_size(std::int32_t v) { return size_[static_cast<std::size_t>(find(v))]; }
  // Sizes of all components, non-increasing.
  std::vector<std::int32_t> component_sizes();

  void unite(std::int32_t a, std::int32_t b);
  // One round: a uniform support(c)-subset of labels, cut uniformly into the
  // cycle lengths of c, each part added as a clique.
  void step(const CycleStructure& c, Rng& rng);

 private:
  std::vector<std::int32_t> parent_, size_;
  // Persistent permutation for partial Fisher-Yates; any permutation of the
  // labels is a valid starting point.
  std::vector<std::int32_t> perm_;
  std::int32_t largest_ = 1;
  std::uint64_t rounds_ = 0;
  std::uint64_t unions_ = 0;
};

CliqueGraph graph_step(CliqueGraph g, const CycleStructure& c, Rng& rng);
double giant_fraction(const CliqueGraph& g);

struct GiantEstimate {
  double beta = 0.0;
  std::uint64_t rounds = 0;
  std::vector<double> samples;
  double mean = 0.0;
  double sd = 0.0;
  double se() const;
};

GiantEstimate summarize(double beta, std::uint64_t rounds, std::vector<double> samples);

// Giant fraction after floor(beta n / kappa) rounds with iid structures of a
// uniform k-rematch.
GiantEstimate theta_hat(std::int32_t n, std::int32_t k, double beta, std::size_t reps,
                        std::uint64_t seed, const ReplicaRunner& run = run_serial);

// Giant fraction after each round of a prescribed schedule.
std::vector<double> quenched_graph_run(std::int32_t n, const std::vector<CycleStructure>& schedule,
                                       Rng& rng);

// Single transpositions for ceil(gamma n) rounds: the Erdos-Renyi graph with
// ceil(gamma n) uniform edges.
GiantEstimate transposition_giant(std::int32_t n, double gamma, std::size_t reps, std::uint64_t seed,
                                  const ReplicaRunner& run = run_serial);

// Largest root of theta = 1 - exp(-c theta); 0 for c <= 1.
double er_giant_fraction(double mean_degree);

}  // namespace matchmix::graphproc
