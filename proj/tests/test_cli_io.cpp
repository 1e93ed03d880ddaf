#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "elbm/config.hpp"
#include "elbm/errors.hpp"
#include "elbm/experiments.hpp"
#include "elbm/snapshot.hpp"

using namespace elbm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("elbm_test_" + std::to_string(::getpid())) / name;
  fs::create_directories(p.parent_path());
  return p;
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<char> bytes_of(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

void write_bytes(const fs::path& p, const std::vector<char>& b) {
  std::ofstream os(p, std::ios::binary);
  os.write(b.data(), static_cast<std::streamsize>(b.size()));
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(ELBM_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, MinimalConfigGetsDefaults) {
  const auto c = parse_config("[grid]\nnx = 128\nny = 128\n[material]\nnu = 0.25\n");
  EXPECT_EQ(c.experiment, ExperimentKind::Simulate);
  EXPECT_DOUBLE_EQ(c.tau, 0.55);
  EXPECT_DOUBLE_EQ(c.source.sigma, 4.0);
  EXPECT_DOUBLE_EQ(c.source.period, 20.0);
  EXPECT_DOUBLE_EQ(c.source.center_x, 64.0);
  EXPECT_TRUE(c.boundary.periodic_x());
}

TEST(Config, EmptyTextIsValid) { EXPECT_NO_THROW(parse_config("")); }

TEST(Config, PoissonRatioLimitExplained) {
  const auto v = violations_of("[material]\nnu = 0.46\n");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(mentions(v, "5/11"));
}

TEST(Config, ReportsEveryViolationWithLocations) {
  const auto v = violations_of(
      "# comment\n"
      "[material]\n"
      "tau = 0.5\n"
      "tau = 0.6\n"
      "colour = red\n"
      "[nowhere]\n"
      "[grid]\n"
      "nx 12\n"
      "[boundary]\n"
      "top = absorbing\n"
      "bottom = absorbing\n"
      "thickness = 90\n");
  EXPECT_TRUE(mentions(v, "line 4, column 1: duplicate key 'material.tau'"));
  EXPECT_TRUE(mentions(v, "unknown key 'material.colour'"));
  EXPECT_TRUE(mentions(v, "line 6, column 2: unknown section [nowhere]"));
  EXPECT_TRUE(mentions(v, "line 8, column 1: expected 'key = value'"));
  EXPECT_TRUE(mentions(v, "tau must exceed 0.5"));
  EXPECT_TRUE(mentions(v, "thickness"));
  EXPECT_GE(v.size(), 6u);
}

TEST(Config, ExperimentDefaultsAndFallback) {
  const auto r = parse_config("[run]\nexperiment = rayleigh\n");
  EXPECT_EQ(r.nx, 300);
  EXPECT_EQ(r.ny, 100);
  EXPECT_EQ(r.boundary.top.kind, EdgeKind::FreeSurface);
  EXPECT_EQ(r.boundary.left.kind, EdgeKind::Absorbing);
  EXPECT_DOUBLE_EQ(r.source.center_y, 94.0);
  EXPECT_DOUBLE_EQ(r.source.dir_y, -1.0);
  EXPECT_EQ(parse_config("", ExperimentKind::StabilityMap).experiment, ExperimentKind::StabilityMap);
  EXPECT_EQ(parse_config("[run]\nexperiment = convergence\n", ExperimentKind::Rayleigh).experiment,
            ExperimentKind::Convergence);
}

TEST(Config, ListsAndStations) {
  const auto c = parse_config(
      "[run]\nsnapshots = 10, 70\nstations = 85:85, 1:2\n[source]\ndirection = 0, 1\n"
      "[convergence]\nsizes = 32, 64, 128\n");
  EXPECT_EQ(c.snapshots, (std::vector<long>{10, 70}));
  ASSERT_EQ(c.stations.size(), 2u);
  EXPECT_EQ(c.stations[0][0], 85);
  EXPECT_EQ(c.stations[1][1], 2);
  EXPECT_DOUBLE_EQ(c.source.dir_y, 1.0);
  EXPECT_EQ(c.convergence.sizes.size(), 3u);
  EXPECT_FALSE(violations_of("[run]\nstations = 500:1\n").empty());
}

TEST(Config, JsonEmbedsResolvedValues) {
  const auto j = to_json(parse_config("[material]\nnu = 0.1\n"));
  EXPECT_EQ(j["experiment"], "simulate");
  EXPECT_DOUBLE_EQ(j["material"]["nu"].get<double>(), 0.1);
  EXPECT_DOUBLE_EQ(j["material"]["tau"].get<double>(), 0.55);
  EXPECT_TRUE(j.contains("boundary"));
  EXPECT_TRUE(j.contains("source"));
}

TEST(Snapshot, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Snapshot s;
  s.nx = 7;
  s.ny = 5;
  for (const char* name : {"jx", "jy", "rho"}) {
    std::vector<double> v(35);
    for (double& x : v) x = g(rng) * 1e-3;
    s.fields.emplace_back(name, v);
  }
  const auto p = scratch("round.elbm");
  write_snapshot(p, s);
  const auto r = read_snapshot(p);
  EXPECT_EQ(r.nx, 7);
  EXPECT_EQ(r.ny, 5);
  ASSERT_EQ(r.fields.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.fields[i].first, s.fields[i].first);
    EXPECT_EQ(std::memcmp(r.fields[i].second.data(), s.fields[i].second.data(), 35 * sizeof(double)), 0);
  }
  EXPECT_EQ(r.field("rho"), s.field("rho"));

  // Header layout: magic, u16 version, u32 dims, u8 count.
  const auto b = bytes_of(p);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "ELBM");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 7);
  EXPECT_EQ(b[10], 5);
  EXPECT_EQ(b[14], 3);
  EXPECT_EQ(b.size(), 15u + (1 + 2) + (1 + 2) + (1 + 3) + 3 * 35 * 8);
}

TEST(Snapshot, CorruptFilesAreRejected) {
  Snapshot s;
  s.nx = 4;
  s.ny = 4;
  s.fields.emplace_back("jx", std::vector<double>(16, 0.5));
  const auto p = scratch("corrupt.elbm");
  write_snapshot(p, s);
  const auto good = bytes_of(p);

  auto message = [&](std::vector<char> b) {
    write_bytes(p, b);
    try {
      read_snapshot(p);
    } catch (const IoError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };

  auto truncated = good;
  truncated.resize(good.size() - 9);
  EXPECT_NE(message(truncated).find("truncated"), std::string::npos);
  auto bumped = good;
  bumped[4] = 2;
  EXPECT_NE(message(bumped).find("version"), std::string::npos);
  auto magic = good;
  magic[0] = 'X';
  EXPECT_NE(message(magic).find("magic"), std::string::npos);
  auto longer = good;
  longer.push_back(0);
  EXPECT_NE(message(longer).find("length"), std::string::npos);
  EXPECT_THROW(read_snapshot(scratch("missing.elbm")), IoError);

  s.fields[0].second[3] = std::nan("");
  EXPECT_THROW(write_snapshot(p, s), std::invalid_argument);
}

TEST(RunExperiment, BulkCompareSummary) {
  const auto cfg = parse_config("[run]\nexperiment = bulk-compare\n[material]\nnu = 0.25\n");
  const auto dir = scratch("bulk");
  const auto summary = run_experiment(cfg, dir, 4);
  const double p = summary["results"]["comparisons"][0]["misfit"].get<double>();
  EXPECT_LE(p, 0.1155 * 1.15);
  EXPECT_EQ(summary["config"], to_json(cfg));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "lbm_step70.elbm"));
  EXPECT_TRUE(fs::exists(dir / "oracle_step70.elbm"));
}

TEST(RunExperiment, StabilityMapSummary) {
  const auto cfg = parse_config("", ExperimentKind::StabilityMap);
  const auto dir = scratch("stab");
  const auto summary = run_experiment(cfg, dir, 4);
  EXPECT_EQ(summary["results"]["unstable_count"].get<int>(), 0);
  EXPECT_TRUE(fs::exists(dir / "stability.csv"));
}

TEST(RunExperiment, RayleighSpeedInSummary) {
  const auto cfg = parse_config("", ExperimentKind::Rayleigh);
  const auto summary = run_experiment(cfg, scratch("rayleigh"), 8);
  EXPECT_NEAR(summary["results"]["speed"].get<double>(), 0.5308, 0.01 * 0.5308);
}

TEST(RunExperiment, DeterministicReruns) {
  const std::string text =
      "[run]\nsteps = 40\nsnapshots = 40\nstations = 10:12\n[grid]\nnx = 48\nny = 40\n"
      "[boundary]\ntop = free\nbottom = wall\nleft = absorbing\nright = absorbing\nthickness = 8\n"
      "[source]\ndirection = 0, 1\n";
  const auto cfg = parse_config(text);
  const auto a = run_experiment(cfg, scratch("det_a"), 1);
  const auto b = run_experiment(cfg, scratch("det_b"), 1);
  const auto c = run_experiment(cfg, scratch("det_c"), 6);
  EXPECT_EQ(bytes_of(scratch("det_a") / "lbm_step40.elbm"), bytes_of(scratch("det_b") / "lbm_step40.elbm"));
  EXPECT_EQ(a["results"], b["results"]);
  EXPECT_NEAR(a["results"]["total_mass"].get<double>(), c["results"]["total_mass"].get<double>(), 1e-12);
  EXPECT_TRUE(fs::exists(scratch("det_a") / "station_10_12.csv"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(run_cli("stability --out " + (dir / "ok").string()), 0);
  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "[material]\nnu = 0.46\n";
  EXPECT_EQ(run_cli("simulate --config " + bad.string() + " --out " + (dir / "x").string()), 2);
  const auto wrong = dir / "wrong.cfg";
  std::ofstream(wrong) << "[run]\nexperiment = rayleigh\n";
  EXPECT_EQ(run_cli("stability --config " + wrong.string() + " --out " + (dir / "y").string()), 2);
  EXPECT_EQ(run_cli("simulate --out /proc/elbm_cannot_write"), 4);
  const auto blowup = dir / "blowup.cfg";
  std::ofstream(blowup) << "[run]\nsteps = 3000\n[grid]\nnx = 32\nny = 32\n[material]\nnu = 0.45\n"
                           "tau = 0.5001\n[source]\namplitude = 1\n";
  EXPECT_EQ(run_cli("simulate --config " + blowup.string() + " --out " + (dir / "z").string()), 3);
}
