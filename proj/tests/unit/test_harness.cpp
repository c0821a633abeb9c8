#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "matchmix/harness.hpp"
#include "matchmix/random.hpp"
#include "matchmix/stats.hpp"

using namespace matchmix;
using namespace matchmix::harness;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("matchmix_test_" + name);
}

}  // namespace

TEST(Streams, DeterministicAndDistinct) {
  Rng a = derive_stream(5, 0), b = derive_stream(5, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 20; ++s)
    for (std::uint64_t r = 0; r < 20; ++r) firsts.insert(derive_stream(s, r)());
  EXPECT_EQ(firsts.size(), 400u);
}

TEST(Streams, SplitmixKnownValue) { EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL); }

TEST(Config, ParsesJson) {
  auto c = config_from_json(R"({"kind":"walk","n":50,"k":3,"t":[1,2],"t_factor":[0.5],"reps":4,"seed":7,
                                "coupled":true,"format":"jsonl"})");
  EXPECT_EQ(c.kind, "walk");
  EXPECT_EQ(c.n, 50);
  EXPECT_EQ(c.k, 3);
  EXPECT_EQ(c.times, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(c.t_factors, (std::vector<double>{0.5}));
  EXPECT_EQ(c.reps, 4u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_TRUE(c.coupled);
  EXPECT_EQ(c.format, "jsonl");
  auto scalar = config_from_json(R"({"kind":"giant","n":10,"beta":1.5,"seed":1})");
  EXPECT_EQ(scalar.betas, (std::vector<double>{1.5}));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json("{"), ConfigError);
  EXPECT_THROW(config_from_json("[1]"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"kind":"walk","colour":1})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"n":"ten"})"), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/matchmix.json"), ConfigError);
}

TEST(Config, LoadsFromFile) {
  auto p = temp_file("cfg.json");
  std::ofstream(p) << R"({"kind":"sample","n":5,"seed":2})";
  auto c = load_config_file(p.string());
  EXPECT_EQ(c.kind, "sample");
  EXPECT_EQ(c.n, 5);
  std::filesystem::remove(p);
}

TEST(Validate, UsageAndInfeasibility) {
  ExperimentConfig c;
  c.kind = "walk";
  c.n = 10;
  c.times = {1};
  EXPECT_THROW(validate(c), ConfigError);  // no seed
  c.seed = 1;
  EXPECT_NO_THROW(validate(c));
  c.k = 11;
  EXPECT_THROW(validate(c), ConfigError);
  c.k = 2;
  c.format = "xml";
  EXPECT_THROW(validate(c), ConfigError);
  c.format = "csv";
  c.times.clear();
  EXPECT_THROW(validate(c), ConfigError);
  c.kind = "frobnicate";
  EXPECT_THROW(validate(c), ConfigError);
  c.kind = "couple";
  c.betas = {1.0};
  c.delta = 1.0;
  EXPECT_THROW(validate(c), ConfigError);
  c.kind = "tv-exact";
  c.n = 41;
  EXPECT_THROW(validate(c), InfeasibleError);
  c.kind = "sample";
  c.n = 2'000'000'000;
  EXPECT_THROW(validate(c), InfeasibleError);
}

TEST(RecordWriter, CsvHeaderAndRows) {
  std::ostringstream os;
  RecordWriter w(os, "csv", "giant", {"beta", "rep"});
  w.row({"1.5", "0"});
  EXPECT_THROW(w.row({"1"}), std::logic_error);
  auto l = lines_of(os.str());
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "# schema_version=1 kind=giant");
  EXPECT_EQ(l[1], "beta,rep");
  EXPECT_EQ(l[2], "1.5,0");
}

TEST(RecordWriter, JsonlTypesAndTags) {
  std::ostringstream os;
  RecordWriter w(os, "jsonl", "sample", {"replica", "x", "partition"});
  w.row({"3", "0.25", "2+1"});
  auto l = lines_of(os.str());
  ASSERT_EQ(l.size(), 1u);
  auto j = nlohmann::json::parse(l[0]);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["kind"], "sample");
  EXPECT_TRUE(j["replica"].is_number_integer());
  EXPECT_DOUBLE_EQ(j["x"].get<double>(), 0.25);
  EXPECT_EQ(j["partition"], "2+1");
}

TEST(ThreadedRunner, CoversEveryIndexOnce) {
  auto run = threaded_runner(4);
  std::vector<int> hit(1000, 0);
  run(hit.size(), [&](std::size_t i) { ++hit[i]; });
  for (int h : hit) EXPECT_EQ(h, 1);
}

TEST(ThreadedRunner, EnvironmentOverride) {
  setenv("MATCHMIX_THREADS", "3", 1);
  EXPECT_EQ(thread_count_from_env(), 3u);
  unsetenv("MATCHMIX_THREADS");
  EXPECT_GE(thread_count_from_env(), 1u);
}

TEST(RunExperiment, ExitCodes) {
  std::ostringstream sum, err;
  ExperimentConfig c;
  c.kind = "sample";
  c.n = 5;
  EXPECT_EQ(run_experiment(c, sum, err), kUsage);
  EXPECT_NE(err.str().find("seed"), std::string::npos);
  c.kind = "tv-exact";
  c.n = 60;
  c.seed = 1;
  EXPECT_EQ(run_experiment(c, sum, err), kInfeasible);
}

TEST(RunExperiment, TvExactColumnsAgree) {
  auto p = temp_file("tv.csv");
  ExperimentConfig c;
  c.kind = "tv-exact";
  c.n = 4;
  c.k = 2;
  c.t_max = 30;
  c.seed = 1;
  c.out = p.string();
  std::ostringstream sum, err;
  ASSERT_EQ(run_experiment(c, sum, err), kOk) << err.str();
  auto l = lines_of(slurp(p));
  ASSERT_EQ(l.size(), 33u);
  EXPECT_EQ(l[0], "# schema_version=1 kind=tv-exact");
  EXPECT_EQ(l[1], "t,tv_full,tv_lumped");
  for (std::size_t i = 2; i < l.size(); ++i) {
    double t, a, b;
    ASSERT_EQ(std::sscanf(l[i].c_str(), "%lf,%lf,%lf", &t, &a, &b), 3);
    EXPECT_NEAR(a, b, 1e-9);
  }
  std::filesystem::remove(p);
}

TEST(RunExperiment, SampleAndGiantRecords) {
  auto p = temp_file("giant.jsonl");
  ExperimentConfig c;
  c.kind = "giant";
  c.n = 200;
  c.k = 2;
  c.betas = {0.5, 3.0};
  c.reps = 3;
  c.seed = 4;
  c.format = "jsonl";
  c.out = p.string();
  std::ostringstream sum, err;
  ASSERT_EQ(run_experiment(c, sum, err), kOk) << err.str();
  auto l = lines_of(slurp(p));
  ASSERT_EQ(l.size(), 6u);
  for (const auto& s : l) {
    auto j = nlohmann::json::parse(s);
    EXPECT_EQ(j["kind"], "giant");
    EXPECT_GE(j["giant_fraction"].get<double>(), 0.0);
    EXPECT_LE(j["giant_fraction"].get<double>(), 1.0);
  }
  EXPECT_FALSE(sum.str().empty());

  c.kind = "sample";
  c.format = "csv";
  c.reps = 5;
  c.out = p.string();
  ASSERT_EQ(run_experiment(c, sum, err), kOk) << err.str();
  auto s = lines_of(slurp(p));
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s[1], "replica,support,distance,fixed_points,partition");
  std::filesystem::remove(p);
}

TEST(RunExperiment, SameSeedSameOutput) {
  auto run = [](const std::string& name) {
    auto p = temp_file(name);
    ExperimentConfig c;
    c.kind = "walk";
    c.n = 60;
    c.k = 3;
    c.times = {0, 5, 50};
    c.reps = 4;
    c.seed = 12;
    c.coupled = true;
    c.out = p.string();
    std::ostringstream sum, err;
    EXPECT_EQ(run_experiment(c, sum, err), kOk) << err.str();
    auto text = slurp(p);
    std::filesystem::remove(p);
    return text;
  };
  EXPECT_EQ(run("w1.csv"), run("w2.csv"));
}

TEST(VerifySuite, AllChecksPass) {
  auto res = run_verify_suite(2024);
  EXPECT_EQ(res.size(), 13u);
  for (const auto& r : res) EXPECT_TRUE(r.passed) << r.name << " " << r.detail;
}

TEST(Stats, KolmogorovSmirnov) {
  std::vector<double> a, b, c;
  Rng rng = derive_stream(51, 0);
  for (int i = 0; i < 2000; ++i) {
    a.push_back(uniform01(rng));
    b.push_back(uniform01(rng));
    c.push_back(uniform01(rng) * 0.8);
  }
  EXPECT_GT(stats::ks_two_sample(a, b).p_value, 1e-3);
  EXPECT_LT(stats::ks_two_sample(a, c).p_value, 1e-6);
}

TEST(Stats, ChiSquarePoolsSmallCells) {
  std::vector<std::uint64_t> obs{50, 50, 0, 0};
  std::vector<double> p{0.5, 0.49, 0.005, 0.005};
  auto r = stats::chi_square(obs, p);
  EXPECT_GT(r.p_value, 0.05);
  auto m = stats::mean_se({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.sd, 1.0);
}
