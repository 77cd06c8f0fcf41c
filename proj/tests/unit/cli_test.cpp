#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rumba/cli.hpp"
#include "rumba/matrix_io.hpp"
#include "rumba/run_io.hpp"

using namespace rumba;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rumba_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  CliResult rumba_cli(const std::string& args) {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string("RUMBA_LOG=quiet ") + RUMBA_CLI_PATH + " " + args +
                            " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

std::size_t dump_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_F(Cli, RunDs98WritesAllOutputs) {
  auto out = dir_ / "ds98";
  auto r = rumba_cli("run --family ds98 -J 100 -I 5 -T 5 --seed 1 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  const std::size_t unique = summary["unique_elements"];
  EXPECT_EQ(unique, dump_lines(out / "fiber.txt"));
  EXPECT_GE(unique, 800u);
  EXPECT_LE(unique, 4000u);
  EXPECT_EQ(summary["J"], 100);
  EXPECT_EQ(summary["I"], 5);
  EXPECT_EQ(summary["T"], 5);
  EXPECT_EQ(summary["K"], 9);
  EXPECT_NE(r.out.find("unique_elements " + std::to_string(unique)), std::string::npos);

  std::ifstream csv(out / "metrics.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, io::kMetricsHeader);
  std::size_t rows = 0;
  std::string line;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 25u);

  auto dump = io::read_fiber_dump(out / "fiber.txt");
  auto m = models::ds98_model();
  for (const auto& x : dump.elements) ASSERT_EQ(mat_vec(m.A, x), m.u);
}

TEST_F(Cli, SameSeedGivesByteIdenticalDumps) {
  const std::string args = "run --family ds98 -J 200 -I 3 -T 4 --seed 5 --out ";
  ASSERT_EQ(rumba_cli(args + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(rumba_cli(args + (dir_ / "b").string() + " --kernel serial").code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "fiber.txt"), slurp(dir_ / "b" / "fiber.txt"));
  ASSERT_EQ(rumba_cli("run --family ds98 -J 200 -I 3 -T 4 --seed 6 --out " +
                      (dir_ / "c").string()).code, 0);
  EXPECT_NE(slurp(dir_ / "a" / "fiber.txt"), slurp(dir_ / "c" / "fiber.txt"));
}

TEST_F(Cli, AkNeverExceedsFiberSize) {
  auto r = rumba_cli("run --family ak --k 10 -J 300 -I 3 -T 10 --replicates 2 --out " +
                     dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
  EXPECT_LE(summary["unique_elements"].get<std::size_t>(), 2048u);
  EXPECT_EQ(summary["seeds"], nlohmann::json::array({0, 1}));
  EXPECT_TRUE(fs::exists(dir_ / "metrics_r1.csv"));
}

TEST_F(Cli, MissingX0FileIsExitTwo) {
  ASSERT_EQ(rumba_cli("gen --family ds98 --out " + dir_.string()).code, 0);
  auto missing = dir_ / "no_such_x0.txt";
  auto r = rumba_cli("run --matrix " + (dir_ / "A.txt").string() + " --rhs " +
                     (dir_ / "u.txt").string() + " --x0 " + missing.string() + " --out " +
                     dir_.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(missing.string()), std::string::npos);
}

TEST_F(Cli, InvalidInputsAreExitTwo) {
  EXPECT_EQ(rumba_cli("run --family nope").code, 2);
  EXPECT_EQ(rumba_cli("run --family ds98 -T 0").code, 2);
  EXPECT_EQ(rumba_cli("run --family ds98 --pi sometimes").code, 2);
  EXPECT_EQ(rumba_cli("run --family ds98 --bogus-flag").code, 2);
  EXPECT_EQ(rumba_cli("").code, 2);
  // infeasible x0
  ASSERT_EQ(rumba_cli("gen --family ds98 --out " + dir_.string()).code, 0);
  {
    std::ofstream bad(dir_ / "bad_x0.txt");
    bad << "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1\n";
  }
  auto r = rumba_cli("run --matrix " + (dir_ / "A.txt").string() + " --rhs " +
                     (dir_ / "u.txt").string() + " --x0 " + (dir_ / "bad_x0.txt").string() +
                     " --out " + dir_.string());
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, EnumerateCounts) {
  auto r = rumba_cli("enumerate --family ak --k 4 --bound 1 --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("count 32"), std::string::npos);
  EXPECT_EQ(dump_lines(dir_ / "fiber.txt"), 32u);

  {
    std::ofstream t(dir_ / "table.txt");
    t << "2 2\n1 0\n0 1\n";
  }
  r = rumba_cli("enumerate --family independence --table " + (dir_ / "table.txt").string() +
                " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("count 2"), std::string::npos);
}

TEST_F(Cli, EnumerateLimitIsExitThree) {
  auto r = rumba_cli("enumerate --family ak --k 10 --bound 1 --limit 10 --out " + dir_.string());
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, OverflowIsExitFour) {
  {
    std::ofstream a(dir_ / "A.txt");
    a << "1 2\n1 1\n";
    std::ofstream u(dir_ / "u.txt");
    u << "9000000000000000000\n";
    std::ofstream x(dir_ / "x0.txt");
    x << "4500000000000000000 4500000000000000000\n";
    std::ofstream b(dir_ / "B.txt");
    b << "2 1\n4000000000000000000\n-4000000000000000000\n";
  }
  auto r = rumba_cli("run --matrix " + (dir_ / "A.txt").string() + " --rhs " +
                     (dir_ / "u.txt").string() + " --x0 " + (dir_ / "x0.txt").string() +
                     " --basis " + (dir_ / "B.txt").string() +
                     " --alpha0 5 -J 50 --out " + dir_.string());
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST_F(Cli, GenShapes) {
  ASSERT_EQ(rumba_cli("gen ak --k 3 --out " + dir_.string()).code, 0);
  std::ifstream a(dir_ / "A.txt");
  std::string header;
  std::getline(a, header);
  EXPECT_EQ(header, "7 14");
  EXPECT_TRUE(fs::exists(dir_ / "x1.txt"));

  auto q = dir_ / "q";
  ASSERT_EQ(rumba_cli("gen no3way --Q 5 --S 0.65 --seed 7 --out " + q.string()).code, 0);
  auto x0 = io::read_vector(q / "x0.txt");
  std::int64_t sum = 0;
  for (auto v : x0) sum += v;
  EXPECT_EQ(sum, 625);
  EXPECT_TRUE(fs::exists(q / "B.txt"));

  auto d = dir_ / "d";
  ASSERT_EQ(rumba_cli("gen ds98 --out " + d.string()).code, 0);
  EXPECT_EQ(mat_vec(io::read_matrix(d / "A.txt"), io::read_vector(d / "x0.txt")),
            (IntVector{220, 215, 93, 64, 108, 286, 71, 127}));
}

// Generated files feed back into a file-based run for every family.
TEST_F(Cli, GenRunRoundTrip) {
  const std::vector<std::string> families = {"ds98", "ak --k 2", "ak --k 6",
                                             "no3way --Q 3 --S 0.5 --seed 2",
                                             "no3way --Q 4 --S 1"};
  int n = 0;
  for (const auto& f : families) {
    auto g = dir_ / ("g" + std::to_string(n++));
    ASSERT_EQ(rumba_cli("gen " + f + " --out " + g.string()).code, 0) << f;
    std::string args = "run --matrix " + (g / "A.txt").string() + " --rhs " +
                       (g / "u.txt").string() + " --x0 " + (g / "x0.txt").string() +
                       " -J 50 -I 2 -T 2 --out " + g.string();
    if (fs::exists(g / "B.txt")) args += " --basis " + (g / "B.txt").string();
    auto r = rumba_cli(args);
    EXPECT_EQ(r.code, 0) << f << ": " << r.err;
  }
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  {
    std::ofstream c(dir_ / "cfg.json");
    c << R"({"T": 3, "I": 2, "J": 40, "seed": 9, "alpha0": 0.5})";
  }
  auto r = rumba_cli("run --family ds98 --config " + (dir_ / "cfg.json").string() +
                     " -T 2 --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
  EXPECT_EQ(summary["T"], 2);
  EXPECT_EQ(summary["I"], 2);
  EXPECT_EQ(summary["J"], 40);
  EXPECT_EQ(summary["seeds"], nlohmann::json::array({9}));
}

TEST_F(Cli, PerComponentPriorFile) {
  {
    std::ofstream a(dir_ / "alpha.txt");
    a << "0 0 0 0 0 0 0 0 0\n";
  }
  auto r = rumba_cli("run --family ds98 --alpha0 " + (dir_ / "alpha.txt").string() +
                     " -J 30 -I 2 -T 2 --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  // Zero rates: nothing moves.
  EXPECT_NE(r.out.find("unique_elements 1"), std::string::npos);
  {
    std::ofstream a(dir_ / "short.txt");
    a << "1 2\n";
  }
  EXPECT_EQ(rumba_cli("run --family ds98 --alpha0 " + (dir_ / "short.txt").string() +
                      " --out " + dir_.string()).code, 2);
}

TEST(CliLibrary, LoadInstanceStartsForAk) {
  cli::InstanceSpec spec;
  spec.family = "ak";
  spec.k = 3;
  spec.ak_start = "both";
  auto li = cli::load_instance(spec);
  ASSERT_EQ(li.starts.size(), 2u);
  EXPECT_EQ(li.starts[0], models::ak_x0(3));
  EXPECT_EQ(li.starts[1], models::ak_x1(3));
  spec.family = "no3way";
  spec.q = 3;
  auto nw = cli::load_instance(spec);
  EXPECT_EQ(nw.basis.source(), BasisSource::UserSupplied);
  EXPECT_EQ(nw.basis.matrix(), models::no3way_structured_basis(3));
}
