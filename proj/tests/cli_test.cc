#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "csv.h"
#include "gtest/gtest.h"
#include "qini/error.h"

namespace qini::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / "qini_cli_test" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string Write(const std::string& name, const std::string& body) const {
    std::ofstream(Path(name), std::ios::binary) << body;
    return Path(name);
  }

  static std::string Read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int Call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SingleRowFrameGivesOneEvent) {
  const auto input = Write("one.csv", "tau_1,cost_1,score_1\n2,1,2\n");
  ASSERT_EQ(Call({"path", "--input", input, "--out", Path("o"), "--b-max", "10"}),
            kExitOk)
      << err_.str();
  const CsvTable events = ReadCsv(Path("o/path_events.csv"));
  EXPECT_EQ(events.header, (std::vector<std::string>{"event_index", "unit_id",
                                                     "arm", "spend", "gain",
                                                     "is_upgrade"}));
  ASSERT_EQ(events.rows.size(), 1u);
  EXPECT_EQ(events.rows[0],
            (std::vector<std::string>{"0", "0", "1", "1", "2", "0"}));
  const CsvTable curve = ReadCsv(Path("o/curve.csv"));
  EXPECT_EQ(curve.header, (std::vector<std::string>{"spend", "gain"}));
  EXPECT_EQ(curve.rows.back(), (std::vector<std::string>{"10", "2"}));
  EXPECT_TRUE(fs::exists(Path("o/manifest.json")));
}

TEST_F(CliTest, MissingColumnIsMalformedCsv) {
  const auto input = Write("bad.csv", "cost_1,score_1\n1,2\n");
  EXPECT_EQ(Call({"path", "--input", input, "--out", Path("o")}),
            kExitMalformedCsv);
  EXPECT_NE(err_.str().find("tau_1"), std::string::npos) << err_.str();
}

TEST_F(CliTest, UnparsableCellNamesRowAndColumn) {
  const auto input =
      Write("bad.csv", "tau_1,cost_1,score_1\n1,1,1\n1,abc,1\n");
  EXPECT_EQ(Call({"path", "--input", input, "--out", Path("o")}),
            kExitMalformedCsv);
  EXPECT_NE(err_.str().find("cost_1"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("3"), std::string::npos) << err_.str();
}

TEST_F(CliTest, RaggedRowIsMalformedCsv) {
  const auto input = Write("bad.csv", "tau_1,cost_1,score_1\n1,1\n");
  EXPECT_EQ(Call({"path", "--input", input, "--out", Path("o")}),
            kExitMalformedCsv);
}

TEST_F(CliTest, NonPositiveCostIsConstraintViolation) {
  const auto input = Write("bad.csv", "tau_1,cost_1,score_1\n1,0,1\n");
  EXPECT_EQ(Call({"path", "--input", input, "--out", Path("o")}),
            kExitConstraint);
  EXPECT_NE(err_.str().find("cost"), std::string::npos) << err_.str();
}

TEST_F(CliTest, UnknownOptionIsUsageError) {
  EXPECT_EQ(Call({"path", "--bogus"}), kExitUsage);
  EXPECT_EQ(Call({}), kExitUsage);
}

TEST_F(CliTest, ArmMaskMatchesSingleArmFile) {
  const auto two = Write("two.csv",
                         "tau_1,cost_1,score_1,tau_2,cost_2,score_2\n"
                         "1.0,0.5,0.9,2.5,1.5,2.0\n"
                         "0.4,0.2,0.1,-0.3,0.6,0.2\n"
                         "2.0,1.0,2.4,2.2,1.2,1.0\n");
  const auto one = Write("one.csv",
                         "tau_1,cost_1,score_1\n"
                         "1.0,0.5,0.9\n"
                         "0.4,0.2,0.1\n"
                         "2.0,1.0,2.4\n");
  ASSERT_EQ(Call({"path", "--input", two, "--arms", "1", "--out", Path("a")}),
            kExitOk);
  ASSERT_EQ(Call({"path", "--input", one, "--out", Path("b")}), kExitOk);
  for (const char* f : {"path_events.csv", "curve.csv"}) {
    EXPECT_EQ(Read(Path(std::string("a/") + f)),
              Read(Path(std::string("b/") + f)))
        << f;
  }
}

TEST_F(CliTest, SimulateScoresBootstrapRoundTripIsReproducible) {
  ASSERT_EQ(Call({"simulate", "--n", "400", "--seed", "3", "--out", Path("s")}),
            kExitOk);
  const CsvTable sim = ReadCsv(Path("s/data.csv"));
  EXPECT_EQ(sim.rows.size(), 400u);
  ASSERT_TRUE(sim.Find("tau2_true"));
  ASSERT_EQ(Call({"scores", "--input", Path("s/data.csv"), "--ipw", "0.3333333333333333",
                  "0.3333333333333333", "0.3333333333333334", "--out", Path("s")}),
            kExitOk)
      << err_.str();
  const CsvTable scored = ReadCsv(Path("s/scores.csv"));
  ASSERT_TRUE(scored.Find("score_1"));
  ASSERT_TRUE(scored.Find("score_2"));
  ASSERT_TRUE(scored.Find("c1"));

  const std::vector<std::string> boot{
      "bootstrap", "--input", Path("s/scores.csv"), "--b-max", "0.5",
      "--grid", "10", "--replicates", "30", "--seed", "7"};
  auto with_out = [&](std::vector<std::string> args, const std::string& out) {
    args.push_back("--out");
    args.push_back(Path(out));
    return args;
  };
  ASSERT_EQ(Call(with_out(boot, "b1")), kExitOk) << err_.str();
  ASSERT_EQ(Call(with_out(boot, "b1again")), kExitOk);
  auto threaded = boot;
  threaded.insert(threaded.end(), {"--threads", "4"});
  ASSERT_EQ(Call(with_out(threaded, "b4")), kExitOk);
  ASSERT_EQ(Call(with_out(threaded, "b4again")), kExitOk);

  const std::string ci = Read(Path("b1/curve_ci.csv"));
  EXPECT_EQ(ci, Read(Path("b1again/curve_ci.csv")));
  EXPECT_EQ(ci, Read(Path("b4/curve_ci.csv")));
  EXPECT_EQ(Read(Path("b4/curve_ci.csv")), Read(Path("b4again/curve_ci.csv")));
  const CsvTable table = ReadCsv(Path("b1/curve_ci.csv"));
  EXPECT_EQ(table.header, (std::vector<std::string>{"spend", "gain", "std_err",
                                                    "ci_lo", "ci_hi"}));
  EXPECT_EQ(table.rows.size(), 10u);

  // Manifest records the input checksum and nothing run-dependent.
  const std::string manifest = Read(Path("b1/manifest.json"));
  EXPECT_NE(manifest.find("sha256"), std::string::npos);
  EXPECT_NE(manifest.find("\"bootstrap\""), std::string::npos);
}

TEST_F(CliTest, ReRunsAreByteIdentical) {
  ASSERT_EQ(Call({"simulate", "--n", "300", "--seed", "1", "--out", Path("s")}),
            kExitOk);
  ASSERT_EQ(Call({"scores", "--input", Path("s/data.csv"), "--ipw", "0.25",
                  "0.25", "0.5", "--out", Path("s")}),
            kExitOk);
  const std::vector<std::string> cmd{
      "diff", "--input", Path("s/scores.csv"), "--arms", "1,2", "--vs", "1",
      "--grid", "8", "--replicates", "20", "--threads", "3", "--out", Path("d")};
  ASSERT_EQ(Call(cmd), kExitOk) << err_.str();
  const std::string first = Read(Path("d/diff_ci.csv"));
  const std::string manifest = Read(Path("d/manifest.json"));
  ASSERT_EQ(Call(cmd), kExitOk);
  EXPECT_EQ(first, Read(Path("d/diff_ci.csv")));
  EXPECT_EQ(manifest, Read(Path("d/manifest.json")));
  ASSERT_EQ(Call({"path", "--input", Path("s/scores.csv"), "--out", Path("p")}),
            kExitOk);
  const std::string events = Read(Path("p/path_events.csv"));
  ASSERT_EQ(Call({"path", "--input", Path("s/scores.csv"), "--out", Path("p")}),
            kExitOk);
  EXPECT_EQ(events, Read(Path("p/path_events.csv")));
}

TEST_F(CliTest, IdenticalMasksWarnAndStillWriteZeroCurve) {
  ASSERT_EQ(Call({"simulate", "--n", "100", "--out", Path("s")}), kExitOk);
  ASSERT_EQ(Call({"scores", "--input", Path("s/data.csv"), "--ipw", "0.25",
                  "0.25", "0.5", "--out", Path("s")}),
            kExitOk);
  EXPECT_EQ(Call({"diff", "--input", Path("s/scores.csv"), "--arms", "1",
                  "--vs", "1", "--grid", "5", "--replicates", "10", "--out",
                  Path("d")}),
            kExitDegenerateComparison);
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
  const CsvTable diff = ReadCsv(Path("d/diff_ci.csv"));
  ASSERT_EQ(diff.rows.size(), 5u);
  for (const auto& row : diff.rows) {
    EXPECT_EQ(row[1], "0");
    EXPECT_EQ(row[2], "0");
  }
  // Against the baseline the same mask is a real comparison.
  EXPECT_EQ(Call({"diff", "--input", Path("s/scores.csv"), "--arms", "1",
                  "--baseline", "--grid", "5", "--replicates", "10", "--out",
                  Path("d")}),
            kExitOk);
}

TEST_F(CliTest, AipwScoresFromNuisanceFiles) {
  const auto data = Write("data.csv", "w,y\n0,1.0\n1,2.5\n1,-0.5\n0,0.3\n1,4.0\n");
  const auto mu = Write("mu.csv",
                        "mu_0,mu_1\n0.8,1.2\n1.1,2.0\n0.2,0.1\n0.5,0.9\n1.5,3.0\n");
  const auto e = Write("e.csv",
                       "e_0,e_1\n0.6,0.4\n0.5,0.5\n0.4,0.6\n0.7,0.3\n0.3,0.7\n");
  const auto folds = Write("folds.csv", "fold\n0\n1\n0\n1\n0\n");
  ASSERT_EQ(Call({"scores", "--input", data, "--aipw", mu, e, folds, "--out",
                  Path("o")}),
            kExitOk)
      << err_.str();
  const CsvTable s = ReadCsv(Path("o/scores.csv"));
  const auto col = s.Find("score_1");
  ASSERT_TRUE(col);
  const std::vector<double> expected{0.06666666666666665, 1.9, -1.1,
                                     0.6857142857142857, 2.928571428571429};
  const auto values = s.Numbers(*col);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(values[i], expected[i], 1e-12);
}

TEST_F(CliTest, ScoresNeedExactlyOneMethod) {
  const auto data = Write("data.csv", "w,y\n0,1.0\n1,2.5\n");
  EXPECT_NE(Call({"scores", "--input", data, "--out", Path("o")}), kExitOk);
  EXPECT_EQ(Call({"scores", "--input", data, "--ipw", "0.5", "0.6", "--out",
                  Path("o")}),
            kExitConstraint);
}

TEST(Csv, QuotesCrlfAndBlankLines) {
  const fs::path p = fs::temp_directory_path() / "qini_csv_quotes.csv";
  std::ofstream(p, std::ios::binary)
      << "a,\"b,c\"\r\n\r\n1,\"x \"\"y\"\"\"\r\n";
  const CsvTable t = ReadCsv(p.string());
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b,c"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "x \"y\"");
  fs::remove(p);
}

TEST(Csv, RejectsDuplicateHeaderAndEmptyFile) {
  const fs::path p = fs::temp_directory_path() / "qini_csv_dup.csv";
  std::ofstream(p, std::ios::binary) << "a,a\n1,2\n";
  EXPECT_THROW(ReadCsv(p.string()), CsvError);
  std::ofstream(p, std::ios::binary | std::ios::trunc) << "";
  EXPECT_THROW(ReadCsv(p.string()), CsvError);
  EXPECT_THROW(ReadCsv((fs::temp_directory_path() / "no_such.csv").string()),
               CsvError);
  fs::remove(p);
}

TEST(Csv, FormatDoubleRoundTrips) {
  EXPECT_EQ(FormatDouble(0.0), "0");
  EXPECT_EQ(FormatDouble(-0.0), "0");
  EXPECT_EQ(FormatDouble(2.0), "2");
  EXPECT_EQ(std::stod(FormatDouble(0.1)), 0.1);
  EXPECT_EQ(std::stod(FormatDouble(1.0 / 3)), 1.0 / 3);
}

}  // namespace
}  // namespace qini::cli
