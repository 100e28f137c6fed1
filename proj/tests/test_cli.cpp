#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "curvcert/cli.hpp"

namespace fs = std::filesystem;
using curvcert::cli::main_entry;
using nlohmann::json;

namespace {

const std::string kData = CURVCERT_TEST_DATA;

struct Invocation {
  int code = 0;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = main_entry(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return kData + "/" + name; }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("curvcert_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

}  // namespace

TEST(Cli, MetricValidate) {
  const Invocation ok = run({"metric", "validate", "--in", data("c4.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.doc()["n"], 4);
  const Invocation bad = run({"metric", "validate", "--in", data("bad.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("TriangleViolation"), std::string::npos);
}

TEST(Cli, SubembedDefectOfTheFourCycle) {
  const Invocation r = run({"subembed", "defect", "--metric", data("c4.json"), "--order", "a,b,c,d"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.doc();
  EXPECT_NEAR(j["C"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(j["ordering"], json({"a", "b", "c", "d"}));
  EXPECT_EQ(j["points"].size(), 4u);
  EXPECT_TRUE(j["slacks"].contains("cond2"));
  EXPECT_TRUE(j["slacks"].contains("cond3"));
  EXPECT_EQ(run({"subembed", "defect", "--metric", data("c4.json"), "--order", "a,b,c,d", "--C", "1"}).code, 1);
  EXPECT_EQ(run({"subembed", "defect", "--metric", data("c4.json"), "--order", "a,b,x"}).code, 2);
}

TEST(Cli, SubembedSetLevel) {
  const Invocation r = run({"subembed", "defect", "--metric", data("c4.json"), "--order", "a,c,b,d", "--set"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.doc()["C"].get<double>(), 2.0, 1e-9);
}

TEST(Cli, CertificateRoundTrip) {
  TempDir tmp;
  const std::string cert = tmp.file("cert.json");
  for (const std::string order : {"a,b,c,d", "a,b,d,c"}) {
    ASSERT_EQ(run({"subembed", "defect", "--metric", data("c4.json"), "--order", order, "--out", cert}).code, 0);
    const Invocation check = run({"subembed", "check", "--metric", data("c4.json"), "--cert", cert});
    EXPECT_EQ(check.code, 0) << order << ": " << check.err;
    EXPECT_EQ(check.doc()["pass"], true);
  }
  EXPECT_EQ(run({"subembed", "check", "--metric", data("c4.json"), "--cert", cert, "--C", "-0.5"}).code, 1);
  const std::string broken = tmp.write(
      "broken.json", R"({"ordering": ["a","b","c","d"], "C": 0, "points": [[0,0],[1.5,0],[2,0],[1,0]]})");
  EXPECT_EQ(run({"subembed", "check", "--metric", data("c4.json"), "--cert", broken}).code, 1);
}

TEST(Cli, Npoint) {
  const Invocation r = run({"npoint", "--metric", data("star.json"), "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.doc()["C"].get<double>(), 1e-6);
  EXPECT_EQ(run({"npoint", "--metric", data("c4.json"), "--n", "4", "--C", "1"}).code, 1);
}

TEST(Cli, RcatDefect) {
  const Invocation r = run({"rcat", "defect", "--space", data("star.json"), "--budget", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.doc()["defect"].get<double>(), 1e-9);
  EXPECT_EQ(run({"rcat", "defect", "--space", data("star.json"), "--budget", "0"}).code, 2);
}

TEST(Cli, GlueDistance) {
  const Invocation r = run({"glue", "dist", "--gluing", data("squares.json"), "--a", "-0.5,0.5", "--b", "0.5,0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.doc()["distance"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(run({"glue", "dist", "--gluing", data("squares.json"), "--a", "-3,0.5", "--b", "0.5,0.5"}).code, 2);
  EXPECT_EQ(run({"glue", "dist", "--gluing", data("squares.json"), "--a", "x", "--b", "0.5,0.5"}).code, 2);
}

TEST(Cli, GlueBuildAndConvexify) {
  const Invocation b = run({"glue", "build", "--polygon", data("pentagon.json")});
  ASSERT_EQ(b.code, 0) << b.err;
  const json j = b.doc();
  EXPECT_EQ(j["q"].size(), 5u);
  EXPECT_TRUE(j.contains("certificate"));
  EXPECT_EQ(j["an_report"]["pass"], true);
  const Invocation c = run({"glue", "convexify", "--gluing", data("square_triangle.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.doc()["already_convex"], false);
  EXPECT_EQ(run({"glue", "convexify", "--gluing", data("squares.json")}).doc()["already_convex"], true);
}

TEST(Cli, LimitTrendWritesCsv) {
  TempDir tmp;
  const std::string csv = tmp.file("trend.csv");
  const Invocation r = run({"limit", "trend", "--config", data("net_trend.json"), "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["strictly_decreasing"], true);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "m,defect5,rcat_defect,bound");
}

TEST(Cli, InputErrors) {
  TempDir tmp;
  EXPECT_EQ(run({"metric", "validate", "--in", tmp.file("missing.json")}).code, 2);
  const Invocation malformed = run({"metric", "validate", "--in", tmp.write("m.json", "{\n  \"dist\": [1,\n")});
  EXPECT_EQ(malformed.code, 2);
  EXPECT_NE(malformed.err.find("m.json:"), std::string::npos);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ToleranceFromEnvironment) {
  TempDir tmp;
  const std::string near = tmp.write("near.json", R"({"dist": [[0,1,2.000001],[1,0,1],[2.000001,1,0]]})");
  ::unsetenv("CURVCERT_TOL");
  EXPECT_EQ(run({"metric", "validate", "--in", near}).code, 2);
  ::setenv("CURVCERT_TOL", "1e-5", 1);
  EXPECT_EQ(run({"metric", "validate", "--in", near}).code, 0);
  ::unsetenv("CURVCERT_TOL");
  EXPECT_EQ(run({"metric", "validate", "--in", near, "--tol", "1e-5"}).code, 0);
}

TEST(Cli, DeterministicBytes) {
  const std::vector<std::string> args = {"npoint", "--metric", data("c4.json"), "--n", "4", "--seed", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> trend = {"limit", "trend", "--config", data("net_trend.json")};
  EXPECT_EQ(run(trend).out, run(trend).out);
}
