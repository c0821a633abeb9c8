#include "matchmix/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <iostream>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "matchmix/coupling.hpp"
#include "matchmix/graphproc.hpp"
#include "matchmix/sampling.hpp"
#include "matchmix/stats.hpp"
#include "matchmix/walk.hpp"

namespace matchmix::harness {

using core::CycleStructure;
using core::PerfectMatching;
using nlohmann::json;

namespace {

constexpr std::int32_t kMaxN = 10'000'000;
constexpr std::size_t kMaxReps = 10'000'000;

const std::vector<std::string> kKinds = {"sample", "walk", "tv-exact", "couple",
                                         "contraction", "giant", "verify"};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}
std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }
std::string num(std::int32_t x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "1" : "0"; }

// "3+1+1": no separator that clashes with CSV.
std::string blocks_label(const core::Partition& p) {
  std::string s;
  for (auto b : p.blocks()) s += (s.empty() ? "" : "+") + std::to_string(b);
  return s;
}

template <typename T>
std::vector<T> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (auto& [key, v] : j.items()) {
      if (key == "kind") c.kind = v.get<std::string>();
      else if (key == "n") c.n = v.get<std::int32_t>();
      else if (key == "k") c.k = v.get<std::int32_t>();
      else if (key == "t") c.times = as_list<std::uint64_t>(v);
      else if (key == "t_factor") c.t_factors = as_list<double>(v);
      else if (key == "t_max") c.t_max = v.get<std::uint64_t>();
      else if (key == "beta") c.betas = as_list<double>(v);
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "reps") c.reps = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "coupled") c.coupled = v.get<bool>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else throw ConfigError("unknown config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void validate(const ExperimentConfig& c) {
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end())
    throw ConfigError("unknown experiment kind '" + c.kind + "'");
  if (!c.seed) throw ConfigError("--seed is required");
  if (c.format != "csv" && c.format != "jsonl") throw ConfigError("format must be csv or jsonl");
  if (c.kind == "verify") return;
  if (c.n < 1) throw ConfigError("--n must be positive");
  if (c.n > kMaxN) throw InfeasibleError("n=" + std::to_string(c.n) + " is infeasible at desk scale");
  if (c.reps < 1) throw ConfigError("--reps must be positive");
  if (c.reps > kMaxReps) throw InfeasibleError("reps above " + std::to_string(kMaxReps) + " is infeasible at desk scale");
  const bool needs_k = c.kind != "sample" || c.k != 0;
  if (needs_k && (c.k < 2 || c.k > c.n)) throw ConfigError("need 2 <= k <= n");
  if (c.kind == "walk" && c.times.empty() && c.t_factors.empty())
    throw ConfigError("walk needs --t or --t-factor");
  if (c.kind == "couple" || c.kind == "contraction" || c.kind == "giant") {
    if (c.betas.empty()) throw ConfigError(c.kind + " needs --beta");
    for (double b : c.betas)
      if (!(b > 0.0)) throw ConfigError("beta must be positive");
  }
  if ((c.kind == "couple" || c.kind == "contraction") && !(c.delta > 0.0 && c.delta < 1.0))
    throw ConfigError("delta must lie in (0, 1)");
  if ((c.kind == "couple" || c.kind == "contraction") && c.n < 2) throw ConfigError("coupling needs n >= 2");
  if (c.kind == "tv-exact") {
    walk::TvLimits lim;
    if (c.n > lim.lumped_n_cap || (c.k > 2 && (c.n > lim.lumped_enum_n_cap || c.k > lim.lumped_enum_k_cap)))
      throw InfeasibleError("exact TV for n=" + std::to_string(c.n) + ", k=" + std::to_string(c.k) +
                            " is infeasible at desk scale");
    if (c.t_max > 1'000'000) throw InfeasibleError("t_max above 10^6 is infeasible at desk scale");
  }
}

ReplicaRunner threaded_runner(std::size_t threads) {
  if (threads <= 1) return run_serial;
  return [threads](std::size_t count, const std::function<void(std::size_t)>& body) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  };
}

std::size_t thread_count_from_env() {
  if (const char* s = std::getenv("MATCHMIX_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RecordWriter::RecordWriter(std::ostream& os, std::string format, std::string kind,
                           std::vector<std::string> columns)
    : os_(os), format_(std::move(format)), kind_(std::move(kind)), columns_(std::move(columns)) {
  if (format_ == "csv") {
    os_ << "# schema_version=" << kSchemaVersion << " kind=" << kind_ << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
    os_ << '\n';
  }
}

void RecordWriter::row(const std::vector<std::string>& values) {
  if (values.size() != columns_.size()) throw std::logic_error("row does not match the schema");
  if (format_ == "csv") {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
    os_ << '\n';
    return;
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind_;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string& v = values[i];
    // Numbers stay numbers; everything else is a string.
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (!v.empty() && end && *end == '\0' && v != "nan")
      j[columns_[i]] = (v.find_first_of(".eE") == std::string::npos && std::fabs(d) < 9e15)
                           ? json(static_cast<std::int64_t>(d))
                           : json(d);
    else
      j[columns_[i]] = v;
  }
  os_ << j.dump() << '\n';
}

// ---------------------------------------------------------------- verify

namespace {

CheckResult check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

// Swap graph distances from every matching of M_3 by breadth-first search.
CheckResult verify_metric() {
  auto all = core::enumerate_matchings(3);
  const std::size_t m = all.size();
  std::size_t bad = 0;
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<int> dist(m, -1);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      auto pairs = all[u].pairs();
      for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i + 1; j < pairs.size(); ++j)
          for (auto ch : {core::SwapChoice::kBar, core::SwapChoice::kCross}) {
            auto v = static_cast<std::size_t>(core::matching_rank(core::apply_swap(all[u], pairs[i], pairs[j], ch)));
            if (dist[v] < 0) {
              dist[v] = dist[u] + 1;
              q.push(v);
            }
          }
    }
    for (std::size_t t = 0; t < m; ++t)
      if (core::swap_distance_between(all[s], all[t]) != dist[t]) ++bad;
  }
  return check("core.swap_distance_bfs", bad == 0, num(bad) + " mismatches over 15x15");
}

CheckResult verify_enumeration() {
  bool ok = true;
  std::string d;
  for (std::int32_t n = 1; n <= 7; ++n) {
    std::uint64_t cnt = 0, bad = 0;
    core::for_each_matching(n, [&](const PerfectMatching& pm) {
      ++cnt;
      auto c = core::cycle_structure(pm);
      if (c.n() != n || c.support() + c.count(1) != n ||
          c.swap_distance() != c.support() - c.nontrivial_cycles())
        ++bad;
    });
    ok = ok && cnt == core::matching_count(n) && bad == 0;
    d += num(cnt) + (n < 7 ? " " : "");
  }
  return check("core.enumeration_counts", ok, d);
}

CheckResult verify_cycle_sampler(Rng& rng) {
  const std::int32_t l = 4;
  std::map<std::uint64_t, std::size_t> idx;
  core::for_each_matching(l, [&](const PerfectMatching& pm) {
    auto c = core::cycle_structure(pm);
    if (c.count(l) == 1) idx.emplace(core::matching_rank(pm), idx.size());
  });
  std::vector<std::uint64_t> obs(idx.size(), 0);
  for (int i = 0; i < 100000; ++i) {
    auto it = idx.find(core::matching_rank(sampling::sample_uniform_cycle_via_swaps(l, rng)));
    if (it == idx.end()) return check("sampling.cycle_via_swaps", false, "output outside the class");
    ++obs[it->second];
  }
  auto r = stats::chi_square(obs, std::vector<double>(obs.size(), 1.0 / static_cast<double>(obs.size())));
  return check("sampling.cycle_via_swaps", r.p_value > 1e-3, "l=4 class=" + num(obs.size()) + " p=" + num(r.p_value));
}

CheckResult verify_conditional(Rng& rng) {
  const CycleStructure c({0, 0, 1});
  std::map<std::uint64_t, std::size_t> idx;
  core::for_each_matching(3, [&](const PerfectMatching& pm) {
    if (core::cycle_structure(pm) == c) idx.emplace(core::matching_rank(pm), idx.size());
  });
  std::vector<std::uint64_t> obs(idx.size(), 0);
  for (int i = 0; i < 100000; ++i) {
    auto pm = sampling::apply_swap_sequence(sampling::swap_sequence_conditional(c, 3, rng), 3);
    auto it = idx.find(core::matching_rank(pm));
    if (it == idx.end()) return check("sampling.conditional_sequence", false, "wrong cycle structure");
    ++obs[it->second];
  }
  auto r = stats::chi_square(obs, std::vector<double>(obs.size(), 1.0 / static_cast<double>(obs.size())));
  return check("sampling.conditional_sequence", r.p_value > 1e-3, "p=" + num(r.p_value));
}

CheckResult verify_kappa(Rng& rng) {
  const std::int32_t n = 6, k = 3, N = 100000;
  std::vector<double> s(N);
  for (auto& x : s) x = static_cast<double>(core::cycle_structure(sampling::sample_k_rematch(n, k, rng)).support());
  auto m = stats::mean_se(s);
  double target = sampling::expected_support(k).value();
  return check("sampling.expected_support", std::fabs(m.mean - target) <= 3 * m.se,
               "mean=" + num(m.mean) + " target=" + num(target) + " se=" + num(m.se));
}

CheckResult verify_relaxed(Rng& rng) {
  const std::int32_t n = 100, k = 10, trials = 20000;
  std::int32_t hits = 0;
  for (int i = 0; i < trials; ++i) hits += sampling::relaxed_window_violates(n, k, 1, rng);
  double f = static_cast<double>(hits) / trials;
  double se = std::sqrt(f * (1 - f) / trials);
  double bound = 2.0 * k / n;
  return check("sampling.relaxed_bound", f <= bound + 3 * se, "freq=" + num(f) + " bound=" + num(bound));
}

CheckResult verify_tv() {
  double worst = 0.0;
  bool mono = true;
  for (auto [n, k] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}}) {
    auto full = walk::exact_tv_full(n, k, 50);
    auto lumped = walk::exact_tv_lumped(n, k, 50);
    for (std::size_t t = 0; t < full.size(); ++t) {
      worst = std::max(worst, std::fabs(full[t] - lumped[t]));
      if (t > 0 && full[t] > full[t - 1] + 1e-12) mono = false;
    }
  }
  return check("walk.tv_full_equals_lumped", worst <= 1e-9 && mono, "max diff=" + num(worst));
}

CheckResult verify_phi() {
  std::size_t bad = 0;
  const std::int32_t nmax = 60;
  for (std::int32_t n = 2; n <= nmax; ++n)
    for (std::int32_t a = 1; a <= n; ++a)
      for (std::int32_t b = a; b <= n; ++b) {
        std::vector<char> hit(static_cast<std::size_t>(n + 1), 0);
        for (std::int32_t v = 2; v <= n; ++v) {
          auto w = coupling::phi_map(a, b, n, v);
          if (w < 2 || w > n || hit[static_cast<std::size_t>(w)]) {
            ++bad;
            break;
          }
          hit[static_cast<std::size_t>(w)] = 1;
        }
      }
  return check("coupling.phi_bijective", bad == 0, "n<=" + num(nmax) + " failures=" + num(bad));
}

CheckResult verify_schramm(Rng& rng) {
  const std::int32_t n = 30;
  std::size_t viol = 0, steps = 0;
  for (int start = 0; start < 50; ++start) {
    auto pair = coupling::TilingPair::from_partitions(core::partition_of(sampling::sample_uniform_matching(n, rng)),
                                                      core::partition_of(sampling::sample_uniform_matching(n, rng)));
    for (int r = 0; r < 20; ++r) {
      auto c = sampling::sample_rematch_structure(3, rng);
      auto refresh = sampling::refresh_times(c);
      std::size_t nx = 0;
      for (std::int64_t s = 1; s <= c.swap_distance(); ++s) {
        bool fl = nx < refresh.size() && refresh[nx] == s;
        if (fl) ++nx;
        auto info = pair.step(fl, rng);
        ++steps;
        if (info.unmatched_after > info.unmatched_before) ++viol;
        if (info.smallest_before > 0 && info.smallest_after > 0 && info.smallest_after < info.smallest_before / 2)
          ++viol;
        if (!pair.invariants_hold()) ++viol;
      }
    }
  }
  return check("coupling.schramm_monotone", viol == 0, num(steps) + " steps, " + num(viol) + " violations");
}

CheckResult verify_dp(Rng& rng) {
  std::size_t viol = 0;
  for (int start = 0; start < 20; ++start) {
    auto mu = sampling::sample_uniform_matching(12, rng);
    auto nu = sampling::sample_uniform_matching(12, rng);
    auto d0 = core::swap_distance_between(mu, nu);
    for (int s = 0; s < 200; ++s) {
      coupling::dp_swap_step(mu, nu, rng);
      if (core::swap_distance_between(mu, nu) != d0) ++viol;
    }
  }
  for (int start = 0; start < 20; ++start) {
    auto [mu, nu] = coupling::neighbour_start(10);
    for (int s = 0; s < 200; ++s) {
      coupling::dp_round_step(mu, nu, 4, rng);
      if (core::swap_distance_between(mu, nu) != 1) ++viol;
    }
  }
  return check("coupling.distance_preserved", viol == 0, num(viol) + " violations");
}

CheckResult verify_graph(const ReplicaRunner& run, std::uint64_t seed) {
  Rng rng = derive_stream(seed, 991);
  graphproc::CliqueGraph g(200);
  bool ok = true;
  double last = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto c = sampling::sample_rematch_structure(4, rng);
    auto before = g.union_calls();
    g.step(c, rng);
    ok = ok && g.union_calls() - before ==
                   static_cast<std::uint64_t>(c.support() - c.nontrivial_cycles());
    auto sizes = g.component_sizes();
    std::int64_t sum = 0;
    for (auto s : sizes) sum += s;
    ok = ok && sum == 200 && giant_fraction(g) >= last;
    last = giant_fraction(g);
  }
  auto est = graphproc::transposition_giant(20000, 1.0, 10, seed, run);
  double target = graphproc::er_giant_fraction(2.0);
  bool er = std::fabs(est.mean - target) <= 0.03;
  return check("graphproc.union_find_and_er", ok && er,
               "theta=" + num(est.mean) + " er=" + num(target));
}

CheckResult verify_stationary(Rng& rng) {
  const std::int32_t n = 4, k = 2, N = 20000;
  auto parts = core::integer_partitions(n);
  std::map<core::Partition, std::size_t> idx;
  for (std::size_t i = 0; i < parts.size(); ++i) idx[parts[i]] = i;
  std::vector<std::uint64_t> obs(parts.size(), 0);
  for (int r = 0; r < N; ++r) {
    auto st = walk::WalkState::start(n);
    for (int t = 0; t < 100; ++t) walk::advance_round(st, k, rng);
    ++obs[idx[core::partition_of(st.matching)]];
  }
  auto res = stats::chi_square(obs, walk::uniform_partition_law(n));
  return check("walk.stationary_partition", res.p_value > 1e-3, "p=" + num(res.p_value));
}

CheckResult verify_streams() {
  Rng a = derive_stream(7, 0), b = derive_stream(7, 0), c = derive_stream(7, 1);
  bool same = true, differ = false;
  for (int i = 0; i < 10000; ++i) same = same && a() == b();
  Rng a2 = derive_stream(7, 0);
  for (int i = 0; i < 100; ++i) differ = differ || a2() != c();
  return check("harness.streams", same && differ, "");
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed, const ReplicaRunner& run) {
  std::vector<CheckResult> out;
  std::uint64_t stream = 0;
  auto rng = [&] { return derive_stream(seed, stream++); };
  out.push_back(verify_metric());
  out.push_back(verify_enumeration());
  { Rng r = rng(); out.push_back(verify_cycle_sampler(r)); }
  { Rng r = rng(); out.push_back(verify_conditional(r)); }
  { Rng r = rng(); out.push_back(verify_kappa(r)); }
  { Rng r = rng(); out.push_back(verify_relaxed(r)); }
  out.push_back(verify_tv());
  out.push_back(verify_phi());
  { Rng r = rng(); out.push_back(verify_schramm(r)); }
  { Rng r = rng(); out.push_back(verify_dp(r)); }
  out.push_back(verify_graph(run, seed));
  { Rng r = rng(); out.push_back(verify_stationary(r)); }
  out.push_back(verify_streams());
  return out;
}

// ---------------------------------------------------------------- experiments

namespace {

struct Sink {
  std::ofstream file;
  std::ostream* os = nullptr;
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") {
      os = &std::cout;
    } else {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file " + path);
      os = &file;
    }
  }
};

int run_sample(const ExperimentConfig& c, std::ostream& os, std::ostream& summary) {
  RecordWriter w(os, c.format, c.kind, {"replica", "support", "distance", "fixed_points", "partition"});
  std::vector<double> supp;
  for (std::size_t r = 0; r < c.reps; ++r) {
    Rng rng = derive_stream(*c.seed, r);
    PerfectMatching pm = c.k == 0 ? sampling::sample_uniform_matching(c.n, rng)
                                  : sampling::sample_k_rematch(c.n, c.k, rng);
    auto cs = core::cycle_structure(pm);
    supp.push_back(static_cast<double>(cs.support()));
    w.row({num(r), num(cs.support()), num(cs.swap_distance()), num(cs.count(1)),
           blocks_label(core::partition_of(cs))});
  }
  auto m = stats::mean_se(supp);
  summary << "mean support " << num(m.mean) << " +/- " << num(m.se);
  if (c.k != 0) summary << " (expected " << num(sampling::expected_support(c.k).value()) << ")";
  summary << '\n';
  return kOk;
}

int run_walk(const ExperimentConfig& c, std::ostream& os, std::ostream& summary, const ReplicaRunner& run) {
  std::vector<std::uint64_t> times = c.times;
  const double tstar = walk::cutoff_time(c.n, c.k);
  for (double f : c.t_factors) times.push_back(static_cast<std::uint64_t>(std::llround(f * tstar)));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<std::vector<walk::ProfileRow>> per(c.reps);
  run(c.reps, [&](std::size_t r) {
    Rng rng = derive_stream(*c.seed, r);
    per[r] = c.coupled ? coupling::coupled_profile_replica(c.n, c.k, times, r, rng)
                       : walk::profile_replica(c.n, c.k, times, r, rng);
  });
  RecordWriter w(os, c.format, c.kind, {"time", "replica", "fixed_points", "support_used", "coalesced"});
  std::map<std::uint64_t, std::vector<double>> fp, co;
  for (const auto& rows : per)
    for (const auto& row : rows) {
      w.row({num(row.time), num(row.replica), num(row.fixed_points), num(row.support_used),
             row.coalesced ? flag(*row.coalesced) : ""});
      fp[row.time].push_back(static_cast<double>(row.fixed_points));
      if (row.coalesced) co[row.time].push_back(*row.coalesced ? 1.0 : 0.0);
    }
  summary << "t* = n log n / kappa = " << num(tstar) << '\n';
  for (auto& [t, xs] : fp) {
    auto m = stats::mean_se(xs);
    summary << "t=" << t << " (" << num(static_cast<double>(t) / tstar) << " t*) fixed points "
            << num(m.mean) << " +/- " << num(m.se);
    if (co.count(t)) summary << ", coalesced " << num(stats::mean_se(co[t]).mean);
    summary << '\n';
  }
  return kOk;
}

int run_tv(const ExperimentConfig& c, std::ostream& os, std::ostream& summary) {
  auto res = walk::exact_tv(c.n, c.k, c.t_max);
  RecordWriter w(os, c.format, c.kind, {"t", "tv_full", "tv_lumped"});
  double worst = 0.0;
  for (const auto& r : res) {
    w.row({num(r.t), r.tv_full ? num(*r.tv_full) : "", num(r.tv_lumped)});
    if (r.tv_full) worst = std::max(worst, std::fabs(*r.tv_full - r.tv_lumped));
  }
  if (res.front().tv_full)
    summary << "max |tv_full - tv_lumped| = " << num(worst) << '\n';
  else
    summary << "full chain too large; lumped column only\n";
  return kOk;
}

int run_couple(const ExperimentConfig& c, std::ostream& os, std::ostream& summary, const ReplicaRunner& run,
               bool per_run) {
  std::vector<std::string> cols = per_run
      ? std::vector<std::string>{"beta", "delta", "n", "k", "replica", "a_delta", "stage2", "coalesced",
                                 "final_distance", "rounds", "breaches", "wall_seconds"}
      : std::vector<std::string>{"beta", "delta", "n", "k", "reps", "lambda", "se", "coalesced_fraction"};
  RecordWriter w(os, c.format, c.kind, cols);
  for (std::size_t bi = 0; bi < c.betas.size(); ++bi) {
    double beta = c.betas[bi];
    // Each beta gets its own block of streams.
    auto est = coupling::estimate_contraction(c.n, c.k, beta, c.delta, c.reps,
                                              splitmix64(*c.seed + bi), run);
    if (per_run) {
      for (std::size_t r = 0; r < est.runs.size(); ++r) {
        const auto& o = est.runs[r];
        w.row({num(beta), num(c.delta), num(c.n), num(c.k), num(r), flag(o.a_delta), flag(o.stage2_ran),
               flag(o.coalesced), num(o.final_distance), num(o.rounds), num(o.breaches), num(o.wall_seconds)});
      }
    } else {
      w.row({num(beta), num(c.delta), num(c.n), num(c.k), num(c.reps), num(est.lambda), num(est.se),
             num(est.coalesced_fraction)});
    }
    summary << "beta=" << num(beta) << " lambda=" << num(est.lambda) << " +/- " << num(est.se)
            << " coalesced=" << num(est.coalesced_fraction) << '\n';
  }
  return kOk;
}

int run_giant(const ExperimentConfig& c, std::ostream& os, std::ostream& summary, const ReplicaRunner& run) {
  RecordWriter w(os, c.format, c.kind, {"beta", "rep", "giant_fraction", "rounds", "seed"});
  for (std::size_t bi = 0; bi < c.betas.size(); ++bi) {
    std::uint64_t seed = splitmix64(*c.seed + bi);
    auto est = graphproc::theta_hat(c.n, c.k, c.betas[bi], c.reps, seed, run);
    for (std::size_t r = 0; r < est.samples.size(); ++r)
      w.row({num(est.beta), num(r), num(est.samples[r]), num(est.rounds), num(seed)});
    summary << "beta=" << num(est.beta) << " theta=" << num(est.mean) << " +/- " << num(est.se())
            << " 1-theta^2=" << num(1 - est.mean * est.mean) << " exp(-beta)=" << num(std::exp(-est.beta))
            << '\n';
  }
  return kOk;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& summary, std::ostream& err) {
  try {
    validate(cfg);
    const ReplicaRunner run = threaded_runner(thread_count_from_env());
    if (cfg.kind == "verify") {
      auto results = run_verify_suite(*cfg.seed, run);
      bool all = true;
      for (const auto& r : results) {
        summary << (r.passed ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : "  " + r.detail) << '\n';
        all = all && r.passed;
      }
      return all ? kOk : kVerifyFailed;
    }
    Sink sink(cfg.out);
    std::ostream& os = *sink.os;
    // With records on stdout the summary would interleave; send it to err.
    std::ostream& sum = (sink.os == &std::cout) ? err : summary;
    if (cfg.kind == "sample") return run_sample(cfg, os, sum);
    if (cfg.kind == "walk") return run_walk(cfg, os, sum, run);
    if (cfg.kind == "tv-exact") return run_tv(cfg, os, sum);
    if (cfg.kind == "couple") return run_couple(cfg, os, sum, run, true);
    if (cfg.kind == "contraction") return run_couple(cfg, os, sum, run, false);
    if (cfg.kind == "giant") return run_giant(cfg, os, sum, run);
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::length_error& e) {
    err << "error: infeasible at desk scale: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace matchmix::harness
