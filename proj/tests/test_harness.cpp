#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "l1cert/error.hpp"
#include "l1cert/harness.hpp"

using namespace l1cert;
using nlohmann::json;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an l1cert::Error";
  return ErrorKind::SolverFailure;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("l1cert_test_" + name);
  std::ofstream(path) << body;
  return path;
}

ResultRecord record_with(json output) {
  ResultRecord r;
  r.output = std::move(output);
  return r;
}

}  // namespace

TEST(Generator, Parsing) {
  const auto g = parse_generator("gaussian:3,7");
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->ensemble, "gaussian");
  EXPECT_EQ(g->m, 3);
  EXPECT_EQ(g->n, 7);
  EXPECT_EQ(parse_generator("rademacher:1,2")->ensemble, "rademacher");
  EXPECT_FALSE(parse_generator("matrix.txt").has_value());
  EXPECT_EQ(kind_of([] { parse_generator("gaussian:3"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_generator("gaussian:0,4"); }), ErrorKind::ConfigError);
}

TEST(Generator, SeedDeterminism) {
  EXPECT_EQ(resolve_matrix("gaussian:4,9", 11), resolve_matrix("gaussian:4,9", 11));
  EXPECT_NE(resolve_matrix("gaussian:4,9", 11), resolve_matrix("gaussian:4,9", 12));
}

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.command = Command::Sweep;
  c.seed = 123456789012345ULL;
  c.exact = true;
  c.codim = 3;
  c.constants.c2 = 0.25;
  c.grid.m = {4, 8};
  c.grid.n = {8, 16};
  c.grid.zip = true;
  const json j = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(j)), j);
  EXPECT_EQ(config_from_json(j).seed, c.seed);
}

TEST(Config, RejectsUnknownFieldsAndTypes) {
  json j = config_to_json(ExperimentConfig{});
  j["colour"] = "blue";
  EXPECT_EQ(kind_of([&] { config_from_json(j); }), ErrorKind::ConfigError);
  json k = config_to_json(ExperimentConfig{});
  k["trials"] = "many";
  try {
    config_from_json(k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("trials"), std::string::npos);
  }
}

TEST(Config, ValidateNamesField) {
  ExperimentConfig c;
  c.matrix = "gaussian:2,4";
  c.sdp_tol = -1.0;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    EXPECT_NE(std::string(e.what()).find("sdp_tol"), std::string::npos);
  }
}

TEST(Config, MalformedFileReportsLine) {
  const auto path = temp_file("bad.json", "{\n  \"command\": \"certify\",\n  \"seed\": ,\n}\n");
  try {
    load_config_file(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    EXPECT_NE(std::string(e.what()).find(path.string() + ":3:"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}

TEST(Constants, Overrides) {
  const GeometryConstants g = parse_constants("c=2,c3=0.5");
  EXPECT_EQ(g.c, 2.0);
  EXPECT_EQ(g.c1, 1.0);
  EXPECT_EQ(g.c3, 0.5);
  EXPECT_EQ(kind_of([] { parse_constants("q=1"); }), ErrorKind::ConfigError);
}

TEST(PlotData, EmptyAndSingle) {
  EXPECT_EQ(emit_plot_data({}, "n", "sdp"), "n,sdp\n");
  EXPECT_EQ(emit_plot_data({record_with({{"n", 8}, {"sdp", 0.25}})}, "n", "sdp"), "n,sdp\n8,0.25\n");
}

TEST(PlotData, SortedWithStableTies) {
  const std::vector<ResultRecord> records{
      record_with({{"n", 16}, {"y", 1}}),
      record_with({{"n", 8}, {"y", 2}}),
      record_with({{"n", 16}, {"y", 3}}),
      record_with({{"task", "certify"},
                   {"points", json::array({json{{"n", 4}, {"y", 4}, {"status", "ok"}},
                                           json{{"n", 2}, {"status", "error"}}})}}),
  };
  EXPECT_EQ(emit_plot_data(records, "n", "y"), "n,y\n4,4\n8,2\n16,1\n16,3\n");
}

TEST(PlotData, MissingField) {
  EXPECT_EQ(kind_of([] { emit_plot_data({record_with({{"n", 8}})}, "n", "sdp"); }), ErrorKind::FieldMissing);
}

TEST(Run, CertifyIsDeterministic) {
  ExperimentConfig c;
  c.command = Command::Certify;
  c.matrix = "gaussian:3,6";
  c.seed = 5;
  c.workers = 1;
  const ResultRecord a = run(c);
  c.workers = 2;
  const ResultRecord b = run(c);
  EXPECT_EQ(a.output.dump(), b.output.dump());
  EXPECT_FALSE(a.failed);
  EXPECT_TRUE(a.output.contains("s_upper"));
}

TEST(Run, RecordRoundTrip) {
  ExperimentConfig c;
  c.command = Command::Certify;
  c.matrix = "gaussian:2,4";
  const ResultRecord r = run(c);
  const ResultRecord back = ResultRecord::from_json(r.to_json());
  EXPECT_EQ(back.output, r.output);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.version, r.version);
}

TEST(Run, SweepRecordsFailingPoint) {
  ExperimentConfig c;
  c.command = Command::Sweep;
  c.exact = true;
  c.lp_bound = false;
  c.grid.m = {2, 3};
  c.grid.n = {6, 16};
  c.grid.zip = true;
  const ResultRecord r = run(c);
  EXPECT_TRUE(r.failed);
  const json& points = r.output["points"];
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0]["status"], "ok");
  EXPECT_EQ(points[1]["status"], "error");
  EXPECT_NE(r.text.find("TooLarge"), std::string::npos) << r.text;
}
