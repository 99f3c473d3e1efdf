#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "sparseca/cli.hpp"
#include "sparseca/io.hpp"
#include "support.hpp"

namespace sparseca {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "sparse-ca");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sparseca_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path random_table_csv(const fs::path& dir, std::uint64_t seed, int rows, int cols) {
  testing::Rng rng(seed);
  const auto path = dir / "table.csv";
  io::write_contingency_csv(testing::random_table(rng, rows, cols), path);
  return path;
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(Cli, CaOnTwoByTwo) {
  const auto dir = workdir("ca22");
  io::write_file(dir / "t.csv", ",x,y\nA,3,1\nB,1,3\n");
  const auto r = run({"ca", (dir / "t.csv").string(), "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto eig = io::read_file(dir / "out" / "eigenvalues.csv");
  EXPECT_EQ(line_count(eig), 2u);  // header and the single nontrivial eigenvalue
  EXPECT_TRUE(fs::exists(dir / "out" / "rows.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "scree.svg"));
  EXPECT_FALSE(fs::exists(dir / "out" / "map.svg"));
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"ca", "--bogus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"ca", "/nonexistent/table.csv"}).code, 2);
}

TEST(Cli, InvalidArgumentsExitWithTwo) {
  const auto dir = workdir("invalid");
  const auto table = random_table_csv(dir, 91, 6, 5).string();
  const auto out = (dir / "out").string();
  // no constraint, two constraint families, out-of-range bound, bad dims
  EXPECT_EQ(run({"sca", table, "--out", out}).code, 2);
  EXPECT_EQ(run({"sca", table, "--out", out, "--sumabs", "0.5", "--nnz", "3"}).code, 2);
  EXPECT_EQ(run({"sca", table, "--out", out, "--sumabs", "0.1"}).code, 2);
  EXPECT_EQ(run({"ca", table, "--out", out, "--dims", "9"}).code, 2);
  EXPECT_EQ(run({"tune", table, "--out", out, "--grid-1d", "--grid-2d"}).code, 2);
  EXPECT_EQ(run({"cluster", table, "--out", out}).code, 2);
}

TEST(Cli, EmptyColumnNeedsDropEmpty) {
  const auto dir = workdir("drop");
  io::write_file(dir / "t.csv", ",x,gap,y,z\nA,3,0,1,2\nB,1,0,3,1\nC,2,0,2,5\n");
  const auto out = (dir / "out").string();
  const auto refused = run({"ca", (dir / "t.csv").string(), "--out", out});
  EXPECT_EQ(refused.code, 2);
  EXPECT_NE(refused.err.find("gap"), std::string::npos);
  EXPECT_EQ(run({"ca", (dir / "t.csv").string(), "--out", out, "--drop-empty"}).code, 0);
}

TEST(Cli, SparseFitWritesTablesAndMap) {
  const auto dir = workdir("sca");
  const auto table = random_table_csv(dir, 92, 8, 7).string();
  const auto out = dir / "out";
  const auto r = run({"sca", table, "--out", out.string(), "--sumabs", "0.5,0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cols = io::parse_csv(io::read_file(out / "cols.csv"), "cols");
  EXPECT_EQ(cols[0][1], "weight_1");
  EXPECT_EQ(cols.size(), 8u);
  EXPECT_TRUE(fs::exists(out / "map.svg"));
}

TEST(Cli, CrossValidationIsReproducible) {
  const auto dir = workdir("cv");
  const auto table = random_table_csv(dir, 93, 8, 7).string();
  auto tune = [&](const std::string& name, const std::string& seed) {
    const auto out = dir / name;
    const auto r = run({"tune", table, "--out", out.string(), "--criterion", "cv", "--seed", seed,
                        "--step", "0.1", "--threads", "2"});
    EXPECT_EQ(r.code, 0) << r.err;
    return io::read_file(out / "tuning_grid.csv");
  };
  const auto a = tune("a", "5");
  EXPECT_EQ(tune("b", "5"), a);
  EXPECT_NE(tune("c", "6"), a);
}

TEST(Cli, ClusterAndPaths) {
  const auto dir = workdir("cluster");
  const auto table = random_table_csv(dir, 94, 9, 6).string();
  const auto out = dir / "out";
  ASSERT_EQ(run({"cluster", table, "--out", out.string(), "--k", "3"}).code, 0);
  const auto clusters = io::parse_csv(io::read_file(out / "clusters.csv"), "clusters");
  EXPECT_EQ(clusters.size(), 10u);
  EXPECT_TRUE(fs::exists(out / "dendrogram.svg"));
  ASSERT_EQ(run({"paths", table, "--out", out.string(), "--step", "0.1"}).code, 0);
  EXPECT_TRUE(fs::exists(out / "weight_paths.csv"));
}

TEST(Cli, DocumentTermTable) {
  const auto dir = workdir("dtm");
  io::write_file(dir / "tokens.csv",
                 "doc_id,token,count\nd1,war,3\nd1,the,9\nd2,war,1\nd2,tax,4\nd3,the,2\n");
  io::write_file(dir / "stop.txt", "the\n");
  const auto r = run({"dtm", "--tokens", (dir / "tokens.csv").string(), "--stoplist",
                      (dir / "stop.txt").string(), "--out", (dir / "dtm.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto raw = io::parse_contingency_csv(io::read_file(dir / "dtm.csv"), "dtm");
  EXPECT_EQ(raw.row_labels, (std::vector<std::string>{"d1", "d2"}));
  EXPECT_EQ(raw.col_labels, (std::vector<std::string>{"tax", "war"}));
}

TEST(Cli, UnwritableOutputExitsWithOne) {
  const auto dir = workdir("unwritable");
  const auto table = random_table_csv(dir, 95, 5, 4).string();
  io::write_file(dir / "blocker", "x");
  const auto r = run({"ca", table, "--out", (dir / "blocker" / "out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace sparseca
