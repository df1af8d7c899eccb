#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

#include "g2g/io.hpp"

namespace fs = std::filesystem;

namespace g2g {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "g2g");
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string config_path(const char* name) { return std::string(G2G_CONFIG_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("g2g_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

TEST_F(CliTest, ModelPrintsTheoreticalWidth) {
  const auto r = run({"model", "--f-cam", "50", "--f-dis", "60", "--t-proc", "19.1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("width ms  36.67"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("min ms    19.10"), std::string::npos) << r.out;
  const auto r25 = run({"model", "--f-cam", "25", "--f-dis", "60"});
  EXPECT_NE(r25.out.find("width ms  56.67"), std::string::npos) << r25.out;
}

TEST_F(CliTest, ModelJsonAndPdfTable) {
  const auto r = run({"model", "--t-proc", "19.1", "--json", "--pdf", path("pdf.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["width_ms"].get<double>(), 36.667, 1e-3);
  EXPECT_NEAR(j["min_ms"].get<double>(), 19.1, 1e-9);
  const auto rows = csv_rows(slurp(path("pdf.csv")));
  ASSERT_EQ(rows.size(), 1001u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t_ms", "pdf_per_s", "cdf"}));
  EXPECT_NEAR(std::stod(rows[1][0]), 19.1, 1e-6);
  EXPECT_EQ(std::stod(rows[1][2]), 0.0);
  EXPECT_NEAR(std::stod(rows[1000][0]), 55.7667, 1e-3);
  EXPECT_EQ(std::stod(rows[1000][2]), 1.0);
  EXPECT_NEAR(std::stod(rows[500][1]), 50.0, 1e-6);  // plateau
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const auto cfg = config_path("webcam_50hz.conf");
  for (const char* tag : {"a", "b"}) {
    const auto r = run({"simulate", "-c", cfg, "--seed", "17", "--records",
                        path(std::string(tag) + ".csv"), "--report",
                        path(std::string(tag) + ".json")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
  }
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  run({"simulate", "-c", cfg, "--seed", "18", "--records", path("c.csv")});
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(CliTest, BenchCampaignNarrowerThanTheory) {
  const auto r = run({"simulate", "-c", config_path("webcam_50hz.conf"), "--report", "-"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n"].get<int>(), 250);
  EXPECT_LT(j["width_ms"].get<double>(), 36.7);
  EXPECT_NEAR(j["theory"]["width_ms"].get<double>(), 36.68, 0.01);
  EXPECT_GT(j["shrinkage_ms"].get<double>(), 0.0);
  EXPECT_GE(j["min_ms"].get<double>(), 19.1 - 1e-9);
  ASSERT_EQ(j["ci95_ms"].size(), 2u);
}

TEST_F(CliTest, AnalyzeReproducesSimulateReport) {
  const auto cfg = config_path("webcam_50hz.conf");
  ASSERT_EQ(run({"simulate", "-c", cfg, "--records", path("r.csv"), "--report", path("r.json")}).code,
            cli::kOk);
  const auto a = run({"analyze", path("r.csv"), "-c", cfg, "--report", path("a.json")});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(slurp(path("a.json")), slurp(path("r.json")));
  // Same via stdin.
  const auto b = run({"analyze", "-", "-c", cfg}, slurp(path("r.csv")));
  EXPECT_EQ(b.out, slurp(path("r.json")));
}

TEST_F(CliTest, AnalyzeFitsModelFromRates) {
  ASSERT_EQ(run({"simulate", "-c", config_path("webcam_50hz.conf"), "--records", path("r.csv")}).code,
            cli::kOk);
  const auto r = run({"analyze", path("r.csv"), "--f-cam", "50", "--f-dis", "59.94"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["theory"]["min_ms"], j["min_ms"]);
  EXPECT_NEAR(j["theory"]["width_ms"].get<double>(), 36.68, 0.01);
  EXPECT_EQ(run({"analyze", path("r.csv"), "--f-cam", "50"}).code, cli::kBadInput);
  const auto none = run({"analyze", path("r.csv")});
  EXPECT_TRUE(nlohmann::json::parse(none.out)["theory"].is_null());
}

TEST_F(CliTest, SingleMeasurement) {
  const auto r = run({"simulate", "-c", config_path("webcam_50hz.conf"), "-n", "1", "--records",
                      "-"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "led_on_ms");
  const auto records = read_records_csv(r.out);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_TRUE(records[0].detected());
  const auto rep = run({"analyze", "-"}, r.out);
  const auto j = nlohmann::json::parse(rep.out);
  EXPECT_EQ(j["n"].get<int>(), 1);
  EXPECT_TRUE(j["mean_ms"].is_null());
}

TEST_F(CliTest, SweepIsMonotoneInFrameRate) {
  const auto r = run({"sweep", "-c", config_path("frame_rate_sweep.conf"), "--table", "-"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "f_cam_hz");
  EXPECT_EQ(rows[1][0], "25");
  EXPECT_EQ(rows[2][0], "50");
  EXPECT_EQ(rows[3][0], "300");
  // min, mean, ci lo, ci hi, max, std, width, theory width
  for (std::size_t col = 2; col < rows[0].size(); ++col) {
    for (std::size_t i = 2; i < rows.size(); ++i) {
      EXPECT_LE(std::stod(rows[i][col]), std::stod(rows[i - 1][col])) << rows[0][col];
    }
  }
  // Per-rate minimum stays inside the model support.
  EXPECT_GE(std::stod(rows[1][2]), 24.8);
  EXPECT_GE(std::stod(rows[2][2]), 19.1);
  EXPECT_GE(std::stod(rows[3][2]), 8.1);
}

TEST_F(CliTest, SweepParallelMatchesSerial) {
  const auto cfg = config_path("frame_rate_sweep.conf");
  const auto serial = run({"sweep", "-c", cfg, "-n", "50", "--table", "-"});
  const auto parallel = run({"sweep", "-c", cfg, "-n", "50", "-j", "3", "--table", "-"});
  ASSERT_EQ(serial.code, cli::kOk);
  EXPECT_EQ(serial.out, parallel.out);
  const auto text = run({"sweep", "-c", cfg, "-n", "50"});
  EXPECT_NE(text.out.find("meanCI_ms"), std::string::npos);
}

TEST_F(CliTest, SingleRateSweepMatchesSimulate) {
  const auto cfg = config_path("webcam_50hz.conf");
  const auto sweep = run({"sweep", "-c", cfg, "--set", "f_cam_list=50", "--table", "-"});
  ASSERT_EQ(sweep.code, cli::kOk) << sweep.err;
  const auto sim = nlohmann::json::parse(run({"simulate", "-c", cfg, "--report", "-"}).out);
  const auto row = csv_rows(sweep.out)[1];
  EXPECT_NEAR(std::stod(row[2]), sim["min_ms"].get<double>(), 5e-4);
  EXPECT_NEAR(std::stod(row[3]), sim["mean_ms"].get<double>(), 5e-4);
  EXPECT_NEAR(std::stod(row[6]), sim["max_ms"].get<double>(), 5e-4);
  EXPECT_NEAR(std::stod(row[7]), sim["std_ms"].get<double>(), 5e-4);
}

TEST_F(CliTest, SweepRejectsEmptyRateList) {
  const auto cfg = write("s.conf", "f_cam_list =\n");
  EXPECT_EQ(run({"sweep", "-c", cfg}).code, cli::kBadInput);
  const auto none = write("n.conf", "f_cam = 50\n");
  EXPECT_EQ(run({"sweep", "-c", none}).code, cli::kBadInput);
}

TEST_F(CliTest, IngestReproducesSimulatedDelays) {
  const auto cfg = config_path("webcam_50hz.conf");
  ASSERT_EQ(run({"simulate", "-c", cfg, "-n", "100", "--records", path("sim.csv"),
                 "--device-stream", path("cap.txt")})
                .code,
            cli::kOk);
  const auto r = run({"ingest", path("cap.txt"), "--records", path("ing.csv"), "--report",
                      path("ing.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto sim = read_records_csv(slurp(path("sim.csv")));
  const auto ing = read_records_csv(slurp(path("ing.csv")));
  ASSERT_EQ(sim.size(), ing.size());
  for (std::size_t i = 0; i < sim.size(); ++i) {
    ASSERT_TRUE(ing[i].detected());
    EXPECT_FALSE(ing[i].true_delay_s);
    EXPECT_LE(std::abs(*ing[i].measured_delay_s - *sim[i].true_delay_s), 0.75e-3);
  }
  EXPECT_EQ(nlohmann::json::parse(slurp(path("ing.json")))["n"].get<int>(), 100);
  // Stdin input, default stdout records.
  const auto piped = run({"ingest"}, slurp(path("cap.txt")));
  EXPECT_EQ(piped.out, slurp(path("ing.csv")));
}

TEST_F(CliTest, BadInputExitsTwo) {
  EXPECT_EQ(run({}).code, cli::kBadInput);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kBadInput);
  EXPECT_EQ(run({"simulate"}).code, cli::kBadInput);
  const auto unknown = run({"simulate", "-c", write("u.conf", "f_camera = 50\n")});
  EXPECT_EQ(unknown.code, cli::kBadInput);
  EXPECT_NE(unknown.err.find("f_camera"), std::string::npos);
  EXPECT_EQ(run({"simulate", "-c", write("o.conf", "interval_base_s = 100\ninterval_mode = constant\n")}).code,
            cli::kBadInput);
  EXPECT_EQ(run({"model", "--f-cam", "0"}).code, cli::kBadInput);
  EXPECT_EQ(run({"model", "--t-proc", "-1"}).code, cli::kBadInput);
  const auto bad = run({"ingest"}, "S,0,1\n");
  EXPECT_EQ(bad.code, cli::kBadInput);
  EXPECT_NE(bad.err.find("no header"), std::string::npos);
  EXPECT_EQ(run({"analyze", write("bad.csv", "a,b,c\n")}).code, cli::kBadInput);
  EXPECT_EQ(run({"ingest", "-k", "-3"}, "H,2000,10\n").code, cli::kBadInput);
  EXPECT_EQ(run({"ingest", "--slope-window", "0"}, "H,2000,10\n").code, cli::kBadInput);
}

TEST_F(CliTest, IoFailuresExitThree) {
  EXPECT_EQ(run({"simulate", "-c", path("missing.conf")}).code, cli::kIoError);
  EXPECT_EQ(run({"analyze", path("missing.csv")}).code, cli::kIoError);
  EXPECT_EQ(run({"ingest", path("missing.txt")}).code, cli::kIoError);
  const auto unwritable = path("no/such/dir/out.csv");
  EXPECT_EQ(run({"simulate", "-c", config_path("webcam_50hz.conf"), "-n", "2", "--records",
                 unwritable})
                .code,
            cli::kIoError);
  EXPECT_EQ(run({"model", "--pdf", unwritable}).code, cli::kIoError);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

}  // namespace
}  // namespace g2g
