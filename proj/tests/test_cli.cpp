#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "setrel/benchgen.hpp"
#include "setrel/cli.hpp"

namespace setrel {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / ("setrel_cli_" + name);
  std::ofstream(p) << text;
  return p.string();
}

const char* kUnsat =
    "(declare-const x Int)\n"
    "(declare-const s (Set Int))\n"
    "(assert (set.member x s))\n"
    "(assert (= s (as set.empty (Set Int))))\n"
    "(check-sat)\n";

TEST(Cli, UnsatIsExitZero) {
  auto r = run_cli({"solve", write_temp("unsat.smt2", kUnsat)});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "unsat\n");
}

TEST(Cli, SatWithModel) {
  auto path = write_temp("sat.smt2",
                         "(declare-const x Int)\n(declare-const s (Set Int))\n"
                         "(assert (set.member x s))\n(assert (> x 3))\n(check-sat)\n(get-model)\n");
  auto r = run_cli({"solve", "--check-model", path});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out.rfind("sat\n", 0), 0u);
  EXPECT_NE(r.out.find("define-fun s"), std::string::npos);
}

TEST(Cli, MalformedInputIsExitTwo) {
  auto r = run_cli({"solve", write_temp("bad.smt2", "(assert (set.member x")});
  EXPECT_EQ(r.code, cli::kInput);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({"solve", "/nonexistent/file.smt2"}).code, cli::kUsage);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run_cli({"solve", "--bogus", "x"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
}

TEST(Cli, FragmentCheckOnHilbertFile) {
  TermManager tm;
  std::string text = print_script(tm, gen_hilbert(tm, random_hilbert(2)));
  auto r = run_cli({"solve", "--fragment-check-only", write_temp("hilbert.smt2", text)});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("SetTermInFilterPredicate"), std::string::npos);
}

TEST(Cli, StatsListRules) {
  auto r = run_cli({"solve", "--stats", write_temp("unsat2.smt2", kUnsat)});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("; steps"), std::string::npos);
}

TEST(Cli, GenThenSolve) {
  std::string path = (fs::temp_directory_path() / "setrel_cli_gen.smt2").string();
  auto g = run_cli({"gen", "--family", "random", "--seed", "7", "--out", path});
  ASSERT_EQ(g.code, cli::kOk);
  auto r = run_cli({"solve", "--check-model", path});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.rfind("sat", 0) == 0 || r.out.rfind("unsat", 0) == 0);
  auto h = run_cli({"gen", "--family", "hilbert", "--seed", "1"});
  EXPECT_EQ(h.code, cli::kOk);
  EXPECT_NE(h.out.find("set.filter"), std::string::npos);
}

TEST(Cli, BinaryRuns) {
  std::string path = write_temp("unsat3.smt2", kUnsat);
  std::string cmd = std::string(SETREL_CLI_PATH) + " solve " + path + " > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}

}  // namespace
}  // namespace setrel
