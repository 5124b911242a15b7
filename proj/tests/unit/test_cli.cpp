#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "test_support.hpp"

namespace kmscli {
namespace {

using kms::testing::data_path;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kmscli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ValidateExampleScenario) {
  const auto r = run_cli({"validate", "--scenario", data_path("example_scenario.json")});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
}

TEST(Cli, ValidateNamesTheBrokenRelation) {
  const auto r = run_cli({"validate", "--scenario", data_path("bad_r_scenario.json")});
  EXPECT_EQ(r.code, kExitViolation);
  EXPECT_NE(r.out.find("relater"), std::string::npos) << r.out;
}

TEST(Cli, MalformedJsonIsAParseError) {
  const auto r = run_cli({"validate", "--scenario", data_path("malformed.json")});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
}

TEST(Cli, MissingFile) {
  const auto r = run_cli({"validate", "--scenario", data_path("does_not_exist.json")});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("FileNotFound"), std::string::npos) << r.err;
}

TEST(Cli, ValidateIncompatibleThread) {
  const auto r = run_cli({"validate", "--scenario", data_path("example_scenario.json"), "--thread",
                          data_path("incompatible_thread.json")});
  EXPECT_EQ(r.code, kExitViolation);
  EXPECT_NE(r.out.find("IncompatibleThread"), std::string::npos) << r.out;
}

TEST(Cli, StateOfIdentityIsOne) {
  const auto r = run_cli({"state", "V[0] U[0] V*[0] @ 1", "--scenario", data_path("example_scenario.json"),
                          "--format", "csv"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("state/closed_form,1,psi,1,0,1,0,0,"), std::string::npos) << r.out;
}

TEST(Cli, StateOffDiagonalIsZero) {
  const auto r = run_cli({"state", "V[2] U[1] V*[0] @ 2", "--scenario", data_path("example_scenario.json"),
                          "--format", "csv"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("state/closed_form,2,psi,0,0,"), std::string::npos) << r.out;
}

TEST(Cli, StateWithOracle) {
  const auto r = run_cli({"state", "V[1] U[3] V*[1] @ 1", "--scenario", data_path("example_scenario.json"),
                          "--thread", data_path("point_thread.json"), "--oracle"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("PASS  state/oracle"), std::string::npos) << r.out;
}

TEST(Cli, BadWordLiteral) {
  const auto r = run_cli({"state", "V[0] U[0", "--scenario", data_path("example_scenario.json")});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("WordParseError"), std::string::npos);
}

TEST(Cli, SuiteAllPassesOnExample) {
  const auto r = run_cli({"suite", "all", "--scenario", data_path("example_scenario.json"), "--oracle"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SuiteAllPassesOnTwoByTwo) {
  const auto r = run_cli({"suite", "all", "--scenario", data_path("scenario_2x2.json"), "--thread",
                          data_path("point_thread_2d.json"), "--samples", "40", "--s-samples", "20"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
}

TEST(Cli, CorruptedNuFailsWithWitness) {
  const auto r = run_cli({"suite", "subinv", "--scenario", data_path("example_scenario.json"), "--thread",
                          data_path("toplevel_thread.json"), "--corrupt-nu"});
  EXPECT_EQ(r.code, kExitViolation);
  EXPECT_NE(r.out.find("FAIL  subinv/L1/nu"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("witness"), std::string::npos);
}

TEST(Cli, ReconcileIsSkippedOutsideOneDimension) {
  const auto r = run_cli({"suite", "reconcile", "--scenario", data_path("scenario_2x2.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("requires d = k = 1"), std::string::npos) << r.out;
}

TEST(Cli, UnknownSuite) {
  const auto r = run_cli({"suite", "nope", "--scenario", data_path("example_scenario.json")});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("UnknownSuite"), std::string::npos);
}

TEST(Cli, ReportsAreDeterministic) {
  for (const char* format : {"json", "csv"}) {
    const std::vector<std::string> args{"report", "--scenario", data_path("scenario_2x2.json"), "--thread",
                                        data_path("point_thread_2d.json"), "--format", format, "--seed", "7",
                                        "--samples", "30", "--s-samples", "10"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, CsvHeader) {
  const auto r = run_cli({"suite", "consistency", "--scenario", data_path("example_scenario.json"), "--format", "csv"});
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), kCsvHeader);
}

TEST(Cli, TransformWithOracle) {
  const auto r = run_cli({"transform", "--scenario", data_path("example_scenario.json"), "--measure",
                          data_path("cos_moments.csv"), "--transform", "nu", "--moment-box", "1", "--oracle"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("transform/nu/n=(1)"), std::string::npos);
}

TEST(Cli, TransformOfMomentTableStaysInsideItsBox) {
  const auto r = run_cli({"transform", "--scenario", data_path("example_scenario.json"), "--measure",
                          data_path("cos_moments.csv"), "--transform", "nu"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("n=(1)"), std::string::npos);
  EXPECT_EQ(r.out.find("n=(2)"), std::string::npos);
}

TEST(Cli, LevelsOverride) {
  const auto r = run_cli({"validate", "--scenario", data_path("example_scenario.json"), "--levels", "2"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("depth=2"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace kmscli
