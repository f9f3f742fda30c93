#include "twinarm/cli.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "twinarm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = twinarm::run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Cli, DesignSweepTable) {
    const CliRun r = run({"design", "sweep", "--min", "0", "--max", "42", "--step", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("      20      22      27.91704      12.57624  yes"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("      10      32      27.27704      19.12064  no"), std::string::npos);
    EXPECT_NE(r.out.find("NOT reproduced"), std::string::npos);
}

TEST(Cli, DesignSweepCsvAndJson) {
    CliRun r = run({"design", "sweep", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("L1,T1,T2,feasible\n", 0), 0u);
    EXPECT_EQ(count_lines(r.out), 44);
    r = run({"design", "sweep", "--format", "plot"});
    EXPECT_NE(r.out.find("\n10,-10,-10\n"), std::string::npos);
    r = run({"--json", "design", "sweep"});
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc.at("table").at("rows").size(), 43u);
    EXPECT_EQ(doc.at("schema_version"), 1);
}

TEST(Cli, DesignSelect) {
    CliRun r = run({"design", "select"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("L1 = 20 cm, L2 = 22 cm"), std::string::npos) << r.out;
    r = run({"--json", "design", "select", "--policy", "interval_midpoint"});
    EXPECT_DOUBLE_EQ(json::parse(r.out).at("L1").get<double>(), 19.5);
}

TEST(Cli, ForwardKinematics) {
    CliRun r = run({"fk", "--arm", "right", "--joints", "0,0,0,0,0,0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("position (0, 0, 50)"), std::string::npos) << r.out;
    r = run({"--json", "--degrees", "fk", "--arm", "head", "--joints", "90,0"});
    ASSERT_EQ(r.code, 0);
    const auto p = json::parse(r.out).at("pose").at("position");
    EXPECT_NEAR(p[0].get<double>(), 0, 1e-12);
    EXPECT_NEAR(p[1].get<double>(), 3.4, 1e-12);
}

TEST(Cli, InverseKinematicsJson) {
    const CliRun r = run({"ik", "--target", "0,30,20", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_TRUE(doc.at("converged").get<bool>());
    const auto j = doc.at("joints").get<std::vector<double>>();
    const double b = 20 * std::sin(j[1]) + 30 * std::sin(j[1] + j[2]);
    const double z = 20 * std::cos(j[1]) + 30 * std::cos(j[1] + j[2]);
    EXPECT_NEAR(b * std::sin(j[0]), 0, 1e-6);
    EXPECT_NEAR(b * std::cos(j[0]), 30, 1e-6);
    EXPECT_NEAR(z, 20, 1e-6);
}

TEST(Cli, InverseKinematicsUnreachableIsDomainError) {
    const CliRun r = run({"ik", "--target", "0,0,80"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("did not converge"), std::string::npos);
}

TEST(Cli, Localize) {
    CliRun r = run({"localize", "--pixel", "0,0", "--depth", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("(3.4, -100, 5)"), std::string::npos) << r.out;
    r = run({"localize", "--strip-example"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("strip width 20 cm, height 5 cm"), std::string::npos) << r.out;
    r = run({"--json", "localize", "--strip-example", "--noise", "0.5", "--trials", "50"});
    ASSERT_EQ(r.code, 0);
    EXPECT_GT(json::parse(r.out).at("noise").at("mean_corner_error").get<double>(), 0);
    r = run({"localize"});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, LocalizeDetectionFiles) {
    const std::string dir = ::testing::TempDir();
    const std::string det = dir + "twinarm_det.json", depth = dir + "twinarm_depth.txt";
    std::ofstream(det) << R"([{"class_label": "cup", "bbox": [-1, -1, 1, 1], "confidence": 0.9},
                             {"class_label": "ball", "bbox": [0, 0, 2, 2], "confidence": 0.8}])";
    std::ofstream(depth) << "2 2\n100 0\n0 0\n";
    const CliRun r = run({"localize", "--detections", det, "--depth-image", depth});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("cup: (3.4, -100, 5)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("ball: no depth"), std::string::npos);
    std::remove(det.c_str());
    std::remove(depth.c_str());
}

TEST(Cli, Plan) {
    CliRun r = run({"plan", "--object", "20,60,-46", "--goal", "20,-60,-46"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("handover plan, 8 actions"), std::string::npos);
    r = run({"--json", "plan", "--object", "20,-50,-46", "--goal", "25,-30,-46"});
    ASSERT_EQ(r.code, 0);
    EXPECT_FALSE(json::parse(r.out).at("plan").at("handover").get<bool>());
    r = run({"plan", "--object", "0,0,200", "--goal", "20,-60,-46"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("unreachable_task"), std::string::npos);
}

TEST(Cli, PlayRepromptsAndExitsAtEof) {
    const CliRun r = run({"play"}, "0\n0\nfoo\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("robot plays 4"), std::string::npos);
    EXPECT_NE(r.out.find("illegal move"), std::string::npos);
    EXPECT_NE(r.out.find("please enter a single cell index"), std::string::npos);
    EXPECT_NE(r.out.find("end of input"), std::string::npos);
}

TEST(Cli, PlayOptimalHumanDraws) {
    // O 0, X 4, O 8, X 1, O 7, X 6, O 2, X 5, O 3
    const CliRun r = run({"play"}, "0\n8\n7\n2\n3\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("robot plays 4"), std::string::npos);
    EXPECT_NE(r.out.find("\ndraw\n"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
    CliRun r = run({});
    EXPECT_EQ(r.code, 2);
    r = run({"fk", "--arm", "right", "--joints", "0,0,0,0,0,0", "--bogus"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--joints"), std::string::npos);
    r = run({"design", "sweep", "--format", "xml"});
    EXPECT_EQ(r.code, 2);
    r = run({"fk", "--joints", "0,0"});
    EXPECT_EQ(r.code, 1);
    r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("Subcommands"), std::string::npos);
}

TEST(Cli, ConfigFile) {
    const std::string path = ::testing::TempDir() + "twinarm_cli_cfg.json";
    std::ofstream(path) << R"({"arm": {"L1": 18, "L2": 24}})";
    CliRun r = run({"--config", path, "fk", "--joints", "0,0,0,0,0,0"});
    EXPECT_EQ(r.code, 0);
    std::ofstream(path) << R"({"arm": {"L7": 1}})";
    r = run({"--config", path, "fk", "--joints", "0,0,0,0,0,0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("config_error"), std::string::npos);
    std::remove(path.c_str());
}
