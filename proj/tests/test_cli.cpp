#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "app.hpp"
#include "config.hpp"
#include "table.hpp"

using namespace lambda_pt;
using namespace lambda_pt::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lambda_pt_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kEpV = "--set=v=" + format_double(0.05 / std::numbers::sqrt2);

}  // namespace

TEST(Config, Defaults) {
  const RunConfig cfg = load_config(std::nullopt, {});
  EXPECT_FALSE(cfg.pt_only);
  EXPECT_DOUBLE_EQ(cfg.pt().gamma_pt(), 0.0005);
  EXPECT_DOUBLE_EQ(cfg.pt().v(), 0.025);
  EXPECT_EQ(cfg.b0[0], Complex(1.0, 0.0));
}

TEST(Config, FileAndOverrides) {
  const RunConfig cfg = load_config(R"({"gamma_pt": 0.01, "v": 0.2, "t_end": 10})", {"t_end=20", "format=\"json\""});
  EXPECT_TRUE(cfg.pt_only);
  EXPECT_DOUBLE_EQ(cfg.t_end, 20.0);
  EXPECT_EQ(cfg.format, OutputFormat::Json);
  const RunConfig bare = load_config(std::nullopt, {"method=rk4"});
  EXPECT_EQ(bare.method, "rk4");
}

TEST(Config, CustomInitialState) {
  const RunConfig cfg = load_config(R"({"b0": [[0, 0], [0.5, -0.5], [0, 1]]})", {});
  EXPECT_EQ(cfg.initial, "custom");
  EXPECT_EQ(cfg.b0[1], Complex(0.5, -0.5));
  EXPECT_THROW(load_config(R"({"initial": "custom"})", {}), ConfigError);
  EXPECT_THROW(load_config(R"({"b0": [[1, 0], [0, 0]]})", {}), ConfigError);
}

TEST(Config, Errors) {
  EXPECT_THROW(load_config(R"({"gamma_pt": 0.1,)", {}), ConfigError);
  EXPECT_THROW(load_config(R"([1, 2])", {}), ConfigError);
  EXPECT_THROW(load_config(R"({"colour": 1})", {}), ConfigError);
  EXPECT_THROW(load_config(R"({"t_end": "long"})", {}), ConfigError);
  EXPECT_THROW(load_config(R"({"gamma_pt": 0.1, "gamma1": 0.2})", {}), ConfigError);
  EXPECT_THROW(load_config(R"({"gamma1": -1})", {}), ConfigError);
  EXPECT_THROW(load_config(std::nullopt, {"samples=1"}), ConfigError);
  EXPECT_THROW(load_config(std::nullopt, {"sweep_min=1", "sweep_max=0"}), ConfigError);
  EXPECT_THROW(load_config(std::nullopt, {"noequals"}), ConfigError);
  try {
    load_config(R"({"t_end": "long"})", {});
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t_end"), std::string::npos);
  }
}

TEST(Cli, ParseAndConfigErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, kExitConfigError);
  EXPECT_EQ(invoke({"plot"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"spectrum", "--format", "xml"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"spectrum", "--config", "/nonexistent/cfg.json"}).code, kExitConfigError);
  const Result r = invoke({"spectrum", "--set", "colour=1"});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  // gamma2 must be the mean of gamma1 and gamma3.
  EXPECT_EQ(invoke({"evolve", "--set", "gamma2=0.5"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"spectrum", "--set", "gamma_pt=0.1", "--set", "v=0"}).code, kExitConfigError);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, kExitOk); }

TEST(Cli, ConfigFile) {
  const auto dir = scratch_dir("config");
  std::ofstream(dir / "cfg.json") << R"({"gamma_pt": 0.05, "v": 0.01})";
  const Result r = invoke({"spectrum", "--config", (dir / "cfg.json").string(), "--set", "metric=false"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("Broken"), std::string::npos);
}

TEST(Spectrum, Fig2a) {
  const Result r = invoke({"spectrum"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const auto& h = rows[0];
  EXPECT_EQ(rows[1][column(h, "regime")], "Unbroken");
  EXPECT_NEAR(std::stod(rows[1][column(h, "re_e_plus")]), 0.035351803348627073, 1e-15);
  EXPECT_EQ(std::stod(rows[1][column(h, "im_e_plus")]), 0.0);
  EXPECT_LE(std::stod(rows[1][column(h, "orthonormality_deviation")]), 1e-10);
  EXPECT_EQ(rows[1][column(h, "eta_positive_definite")], "true");
  EXPECT_EQ(h.size(), rows[1].size());
}

TEST(Spectrum, BrokenRegime) {
  const Result r = invoke({"spectrum", "--set", "gamma_pt=0.05", "--set", "v=0.01"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[1][column(rows[0], "regime")], "Broken");
  EXPECT_EQ(std::stod(rows[1][column(rows[0], "re_e_plus")]), 0.0);
  EXPECT_NEAR(std::stod(rows[1][column(rows[0], "im_e_plus")]), 0.04795831523312719, 1e-15);
}

TEST(Spectrum, ExceptionalPointExitsThree) {
  const Result r = invoke({"spectrum", "--set", "gamma_pt=0.05", kEpV});
  EXPECT_EQ(r.code, kExitExceptionalPoint);
  EXPECT_NE(r.err.find("exceptional point"), std::string::npos);
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[1][column(rows[0], "regime")], "ExceptionalPoint");
  EXPECT_EQ(r.out.find("eta11"), std::string::npos);
  // Without the metric the exceptional point is an ordinary result.
  EXPECT_EQ(invoke({"spectrum", "--set", "gamma_pt=0.05", kEpV, "--set", "metric=false"}).code, kExitOk);
}

TEST(Evolve, GroundStartRows) {
  const Result r = invoke({"evolve", "--set", "samples=11", "--set", "t_end=100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  const std::vector<std::string> expected = {"t",     "re_b1", "im_b1", "re_b2", "im_b2", "re_b3",
                                             "im_b3", "pop1",  "pop2",  "pop3",  "frame"};
  EXPECT_EQ(rows[0], expected);
  ASSERT_EQ(rows.size(), 23u);  // header + 11 effective + 11 lab
  for (std::size_t k : {1u, 12u}) {
    EXPECT_EQ(rows[k][0], "0");
    EXPECT_EQ(rows[k][7], "1");
    EXPECT_EQ(rows[k][8], "0");
    EXPECT_EQ(rows[k][9], "0");
  }
  EXPECT_EQ(rows[1][10], "effective");
  EXPECT_EQ(rows[12][10], "lab");
  // Lab populations carry the e^{-2 gamma2 t} envelope.
  const double ratio = std::stod(rows[22][7]) / std::stod(rows[11][7]);
  EXPECT_NEAR(ratio, std::exp(-2.0 * 0.0015 * 100.0), 1e-12);
}

TEST(Evolve, PtOnlyHasNoLabRows) {
  const Result r = invoke({"evolve", "--set", "gamma_pt=0.0005", "--set", "v=0.025", "--set", "samples=5"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(parse_csv(r.out).size(), 6u);
  EXPECT_EQ(r.out.find(",lab"), std::string::npos);
}

TEST(Evolve, Rk4MatchesAnalytic) {
  const std::vector<std::string> base = {"evolve", "--set", "gamma_pt=0.0005", "--set", "v=0.025",
                                         "--set",  "t_end=50"};
  auto rk = base;
  rk.insert(rk.end(), {"--set", "method=rk4", "--set", "dt=0.05", "--set", "record_stride=100"});
  const auto rows = parse_csv(invoke(rk).out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows.back()[0], "50");
  const CVec3 b = propagator(PtParams(0.0005, 0.025), 50.0) * CVec3::unit(0);
  EXPECT_NEAR(std::stod(rows.back()[1]), b[0].real(), 1e-10);
  EXPECT_NEAR(std::stod(rows.back()[4]), b[1].imag(), 1e-10);
}

TEST(Evolve, OverflowExitsFour) {
  const std::vector<std::string> broken = {"evolve", "--set", "gamma_pt=0.05", "--set", "v=0.01",
                                           "--set",  "t_end=1000"};
  EXPECT_EQ(invoke(broken).code, kExitOverflow);
  auto rk = broken;
  rk.insert(rk.end(), {"--set", "method=rk4"});
  const Result r = invoke(rk);
  EXPECT_EQ(r.code, kExitOverflow);
  EXPECT_FALSE(r.err.empty());
}

TEST(Sweep, ThresholdAndZeroCoupling) {
  const Result r = invoke({"sweep", "--set", "gamma_pt=0.01", "--set", "v=0.01", "--set", "sweep_max=0.02",
                           "--set", "sweep_points=201"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 202u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"v", "re_e_plus", "im_e_plus", "regime"}));
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[1][1], "0");
  EXPECT_EQ(std::stod(rows[1][2]), 0.01);

  const double threshold = 0.01 / std::numbers::sqrt2;
  double first_real = -1.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double v = std::stod(rows[k][0]);
    const double im = std::stod(rows[k][2]);
    if (v > threshold) EXPECT_EQ(im, 0.0) << v;
    if (v < threshold) EXPECT_GT(im, 0.0) << v;
    if (first_real < 0.0 && rows[k][3] == "Unbroken") first_real = v;
  }
  EXPECT_GT(first_real, threshold);
  EXPECT_LE(first_real - threshold, 0.02 / 200.0);
}

TEST(Sweep, GammaAxisAndThreadCap) {
  setenv("LAMBDA_PT_THREADS", "1", 1);
  EXPECT_EQ(sweep_thread_count(), 1u);
  const Result one = invoke({"sweep", "--set", "sweep_param=\"gamma_pt\"", "--set", "sweep_max=0.1"});
  setenv("LAMBDA_PT_THREADS", "0", 1);
  EXPECT_GE(sweep_thread_count(), 1u);
  const Result all = invoke({"sweep", "--set", "sweep_param=\"gamma_pt\"", "--set", "sweep_max=0.1"});
  unsetenv("LAMBDA_PT_THREADS");
  ASSERT_EQ(one.code, kExitOk);
  EXPECT_EQ(one.out, all.out);
  EXPECT_EQ(parse_csv(one.out)[0][0], "gamma_pt");
}

TEST(Validate, DefaultPasses) {
  const Result r = invoke({"validate"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("SKIP  metric_orthonormality [exceptional_point]  skipped: exceptional point"),
            std::string::npos);
}

TEST(Validate, InjectedFaultFails) {
  const Result r = invoke({"validate", "--set", "inject_fault=metric_scale"});
  EXPECT_EQ(r.code, kExitValidationFailure);
  EXPECT_NE(r.out.find("FAIL  metric_orthonormality [fig2a]"), std::string::npos);
}

TEST(Fig2, WritesBothFiles) {
  const auto dir = scratch_dir("fig2");
  const Result r = invoke({"fig2", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* name : {"fig2a.csv", "fig2b.csv"}) {
    const auto rows = parse_csv(slurp(dir / name));
    ASSERT_EQ(rows.size(), 4097u) << name;
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "pop1", "pop2", "pop3"}));
    EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "1", "0", "0"}));
    double prev = 1.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const double total = std::stod(rows[k][1]) + std::stod(rows[k][2]) + std::stod(rows[k][3]);
      EXPECT_LE(total, prev * (1.0 + 1e-15));
      prev = total;
    }
  }
  EXPECT_EQ(std::stod(parse_csv(slurp(dir / "fig2a.csv")).back()[0]), 1500.0);
  EXPECT_EQ(std::stod(parse_csv(slurp(dir / "fig2b.csv")).back()[0]), 150.0);
}

TEST(Output, DeterministicCsvToFile) {
  const auto dir = scratch_dir("determinism");
  const std::vector<std::string> args = {"evolve", "--set", "samples=257", "--out"};
  auto a = args, b = args;
  a.push_back((dir / "a.csv").string());
  b.push_back((dir / "b.csv").string());
  const Result ra = invoke(a);
  ASSERT_EQ(ra.code, kExitOk);
  EXPECT_TRUE(ra.out.empty());
  ASSERT_EQ(invoke(b).code, kExitOk);
  const std::string text = slurp(dir / "a.csv");
  EXPECT_EQ(text, slurp(dir / "b.csv"));
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text, invoke({"evolve", "--set", "samples=257"}).out);
}

TEST(Output, JsonMatchesCsvKeys) {
  const Result csv = invoke({"spectrum"});
  const Result js = invoke({"spectrum", "--format", "json"});
  ASSERT_EQ(js.code, kExitOk);
  const auto doc = nlohmann::ordered_json::parse(js.out);
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 1u);
  const auto header = parse_csv(csv.out)[0];
  ASSERT_EQ(doc[0].size(), header.size());
  std::size_t i = 0;
  for (const auto& [key, value] : doc[0].items()) EXPECT_EQ(key, header[i++]);
  EXPECT_EQ(doc[0]["regime"], "Unbroken");
  EXPECT_EQ(doc[0]["eta_positive_definite"], true);
}

TEST(Table, Formatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(1500.0), "1500");
  Table t;
  t.columns = {"a", "b"};
  EXPECT_THROW(t.add_row({1.0}), std::logic_error);
}
