//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "commands.h"
#include "hocd/pdb.h"
#include "hocd/report.h"
#include "synthetic.h"

namespace hocd::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path()
           / ("hocd_cli_" + std::to_string(::getpid()) + "_"
              + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string &name, const MdgpInstance &inst) {
    const fs::path p = dir_ / name;
    std::ofstream f(p);
    write_instance(inst, f);
    return p;
  }

  fs::path chain_instance(const std::string &name, std::uint64_t seed) {
    testing::ChainOptions o;
    o.atoms = 30;
    o.radius = 5;
    o.seed = seed;
    const auto pts = testing::compact_chain(o);
    Conformation x(3, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      x.atom(i) = pts[i];
    return write(name, testing::cutoff_instance(x, 6.0));
  }

  fs::path dir_;
};

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string &row) {
  std::vector<std::string> out;
  std::istringstream in(row);
  for (std::string f; std::getline(in, f, ',');)
    out.push_back(f);
  if (!row.empty() && row.back() == ',')
    out.emplace_back();
  return out;
}

// Drops init_seconds and wall_seconds.
std::string without_timing(const std::string &row) {
  auto f = fields(row);
  f[7].clear();
  f[8].clear();
  std::string s;
  for (const auto &x: f)
    s += x + ',';
  return s;
}

TEST_F(CliTest, IngestMissingFileExitsTwoNamingPath) {
  IngestOptions o;
  o.pdb = dir_ / "nope.pdb";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_ingest(o, out, err), kExitIo);
  EXPECT_NE(err.str().find("nope.pdb"), std::string::npos);
}

TEST_F(CliTest, IngestWritesInstanceAndPrintsCounts) {
  const fs::path pdb = dir_ / "tiny.pdb";
  {
    std::ofstream f(pdb);
    const double xyz[4][3] = {
      { 0, 0, 0 }, { 1.5, 0, 0 }, { 0, 1.5, 0 }, { 0, 0, 9 }
    };
    for (int i = 0; i < 4; ++i) {
      char line[100];
      std::snprintf(line, sizeof line,
                    "ATOM  %5d  CA  ALA A%4d    %8.3f%8.3f%8.3f  1.00  0.00"
                    "           C",
                    i + 1, i + 1, xyz[i][0], xyz[i][1], xyz[i][2]);
      f << line << '\n';
    }
    f << "END\n";
  }
  IngestOptions o;
  o.pdb = pdb;
  o.out = dir_ / "tiny.mdgp";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_ingest(o, out, err), kExitOk) << err.str();
  // Three pairs within 6 A among the first three atoms; the fourth is isolated.
  EXPECT_NE(out.str().find("n_p=4 |S|=6 (50.00%) disconnected"),
            std::string::npos)
      << out.str();
  const MdgpInstance back = read_instance_file(o.out);
  EXPECT_EQ(back.num_points(), 4u);
  EXPECT_EQ(back.s_ordered(), 6u);
  EXPECT_FALSE(back.connected());
}

TEST_F(CliTest, EmptyCompareIsHeaderOnly) {
  CompareCommand c;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compare(c, out, err), kExitOk);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST_F(CliTest, CompareTwoInstancesBothMethodsGivesFourRowsInOrder) {
  CompareCommand c;
  c.instances = { chain_instance("alpha.mdgp", 3),
                  chain_instance("beta.mdgp", 4) };
  c.jobs = 3;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_compare(c, out, err), kExitOk) << err.str();
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], kCsvHeader);
  const char *expect[4][2] = {
    { "cd", "alpha" }, { "spg", "alpha" }, { "cd", "beta" }, { "spg", "beta" }
  };
  for (int r = 0; r < 4; ++r) {
    const auto f = fields(l[r + 1]);
    ASSERT_EQ(f.size(), 13u) << l[r + 1];
    EXPECT_EQ(f[0], expect[r][0]);
    EXPECT_EQ(f[1], expect[r][1]);
    EXPECT_EQ(f[3], "30");
    EXPECT_EQ(f[12], "target_reached") << l[r + 1];
    EXPECT_LE(std::stod(f[9]), 1e-10);
    EXPECT_FALSE(f[11].empty());
  }
}

TEST_F(CliTest, CompareIsIndependentOfJobCount) {
  CompareCommand c;
  c.instances = { chain_instance("a.mdgp", 5), chain_instance("b.mdgp", 6) };
  std::ostringstream out1, out4, err;
  c.jobs = 1;
  ASSERT_EQ(cmd_compare(c, out1, err), kExitOk);
  c.jobs = 4;
  ASSERT_EQ(cmd_compare(c, out4, err), kExitOk);
  const auto a = lines(out1.str()), b = lines(out4.str());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 1; i < a.size(); ++i)
    EXPECT_EQ(without_timing(a[i]), without_timing(b[i]));
}

TEST_F(CliTest, DisconnectedInstanceGetsGuardRow) {
  const MdgpInstance inst(3, 4, { { 0, 1, 1.0 }, { 2, 3, 1.0 } });
  CompareCommand c;
  c.instances = { write("split.mdgp", inst) };
  c.methods = { Method::kCd };
  std::ostringstream out, err;
  ASSERT_EQ(cmd_compare(c, out, err), kExitOk);
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(fields(l[1])[12], "disconnected");
}

TEST_F(CliTest, BrokenInstanceRecordedAndRunContinues) {
  CompareCommand c;
  c.instances = { dir_ / "missing.mdgp", chain_instance("ok.mdgp", 8) };
  c.methods = { Method::kSpg };
  std::ostringstream out, err;
  ASSERT_EQ(cmd_compare(c, out, err), kExitOk);
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(fields(l[1])[12], "error");
  EXPECT_EQ(fields(l[2])[12], "target_reached");
  EXPECT_NE(err.str().find("missing.mdgp"), std::string::npos);
}

TEST_F(CliTest, RandomInitWithSeedIsDeterministic) {
  SolveCommand s;
  s.instance = chain_instance("det.mdgp", 9);
  s.opts.init = InitKind::kRandom;
  s.opts.seed = 7;
  s.opts.max_iter = 3000;
  std::ostringstream a, b, err;
  const int rc1 = cmd_solve(s, a, err);
  const int rc2 = cmd_solve(s, b, err);
  EXPECT_EQ(rc1, rc2);
  const auto la = lines(a.str()), lb = lines(b.str());
  ASSERT_EQ(la.size(), 2u);
  ASSERT_EQ(lb.size(), 2u);
  EXPECT_EQ(without_timing(la[1]), without_timing(lb[1]));

  s.opts.seed = 8;
  std::ostringstream c;
  cmd_solve(s, c, err);
  EXPECT_NE(without_timing(lines(c.str())[1]), without_timing(la[1]));
}

TEST_F(CliTest, SolveExitCodesFollowTarget) {
  SolveCommand s;
  s.instance = chain_instance("exit.mdgp", 10);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_solve(s, out, err), kExitOk) << err.str();

  s.opts.init = InitKind::kRandom;
  s.opts.max_iter = 5;
  std::ostringstream out2;
  EXPECT_EQ(cmd_solve(s, out2, err), kExitNotReached);
  EXPECT_EQ(fields(lines(out2.str())[1])[12], "iteration_cap");
}

TEST_F(CliTest, SolveMissingInstanceExitsTwo) {
  SolveCommand s;
  s.instance = dir_ / "absent.mdgp";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_solve(s, out, err), kExitIo);
  EXPECT_NE(err.str().find("absent.mdgp"), std::string::npos);
}

TEST_F(CliTest, InstanceFoundThroughDataDirVariable) {
  chain_instance("env.mdgp", 11);
  ::setenv("MDGP_DATA_DIR", dir_.c_str(), 1);
  EXPECT_EQ(resolve_instance_path("env.mdgp"), dir_ / "env.mdgp");
  ::unsetenv("MDGP_DATA_DIR");
  EXPECT_EQ(resolve_instance_path("env.mdgp"), fs::path("env.mdgp"));
}

TEST_F(CliTest, FileInitAndPerAtomErrors) {
  const fs::path inst_path = chain_instance("file.mdgp", 12);
  const MdgpInstance inst = read_instance_file(inst_path);
  const fs::path init = dir_ / "start.txt";
  {
    std::ofstream f(init);
    f.precision(17);
    const Conformation &t = *inst.ground_truth();
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0, 0.05);
    for (std::size_t i = 0; i < t.num_points(); ++i)
      f << t.atom(i)[0] + g(rng) << ' ' << t.atom(i)[1] + g(rng) << ' '
        << t.atom(i)[2] + g(rng) << '\n';
  }
  SolveCommand s;
  s.instance = inst_path;
  s.opts.init = InitKind::kFile;
  s.opts.init_file = init;
  s.opts.per_atom_errors = dir_ / "atoms.csv";
  s.out = dir_ / "row.csv";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_solve(s, out, err), kExitOk) << err.str();
  EXPECT_TRUE(out.str().empty());

  std::ifstream f(s.opts.per_atom_errors);
  std::stringstream buf;
  buf << f.rdbuf();
  const auto l = lines(buf.str());
  ASSERT_EQ(l.size(), 31u);
  EXPECT_EQ(l[0], "atom,error");
  EXPECT_EQ(l[1].substr(0, 2), "1,");

  std::ofstream(init) << "1 2 3\n";
  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_solve(s, out2, err2), kExitIo);
}

TEST_F(CliTest, PowellRejectsLargeEpsilon) {
  PowellCommand p;
  p.epsilon = 0.2;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_powell(p, out, err), kExitUsage);
  EXPECT_TRUE(out.str().empty());
}

TEST_F(CliTest, PowellReportsPatternAndK0) {
  PowellCommand p;
  p.max_iterations = 200;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_powell(p, out, err), kExitOk);
  const std::string s = out.str();
  EXPECT_NE(s.find("x^6 matches eps/64 pattern: PASS"), std::string::npos);
  EXPECT_NE(s.find("k0 bound"), std::string::npos);
  EXPECT_NE(s.find("k = 2: alpha/2^(p+1) = 1.250e-09 <= "), std::string::npos);
  EXPECT_NE(s.find("k = 3: alpha/2^(p+1) = 1.250e-09 >  "), std::string::npos);
}

}  // namespace
}  // namespace hocd::cli
