#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchmix/replicas.hpp"

namespace matchmix::harness {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kVerifyFailed = 3 };

// Bad or missing parameters.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Valid request that exceeds what can be computed at desk scale.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string kind;  // sample | walk | tv-exact | couple | contraction | giant | verify
  std::int32_t n = 0;
  std::int32_t k = 2;
  std::vector<std::uint64_t> times;   // walk: rounds
  std::vector<double> t_factors;      // walk: multiples of n log n / kappa
  std::uint64_t t_max = 50;           // tv-exact
  std::vector<double> betas;
  double delta = 0.2;
  std::size_t reps = 1;
  std::optional<std::uint64_t> seed;
  bool coupled = false;               // walk: add the coalescence column
  std::string out;                    // empty or "-" is stdout
  std::string format = "csv";         // csv | jsonl
};

// Reads a JSON object with the field names above ("t" for times,
// "t_factor", "beta", "t_max").
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Throws ConfigError or InfeasibleError.
void validate(const ExperimentConfig& cfg);

// Replica scheduler on std::thread; threads <= 1 runs serially.
ReplicaRunner threaded_runner(std::size_t threads);
// MATCHMIX_THREADS, else the hardware concurrency.
std::size_t thread_count_from_env();

// Flat rows with a fixed column order per experiment.
class RecordWriter {
 public:
  RecordWriter(std::ostream& os, std::string format, std::string kind,
               std::vector<std::string> columns);
  void row(const std::vector<std::string>& values);

 private:
  std::ostream& os_;
  std::string format_, kind_;
  std::vector<std::string> columns_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Small-scale invariant checks across all modules.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed, const ReplicaRunner& run = run_serial);

// Runs the experiment, writes records, prints a summary. Returns an ExitCode.
int run_experiment(const ExperimentConfig& cfg, std::ostream& summary, std::ostream& err);

}  // namespace matchmix::harness
