#include <gtest/gtest.h>

#include <bit>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "moebius/cli.hpp"
#include "oracles.hpp"

using namespace moebius;
using moebius::cli::json;

namespace {

const std::string kSamples = MOEBIUS_SAMPLES_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "moebius");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return kSamples + "/" + name + ".json"; }

std::string write_temp(const std::string& name, const json& doc) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << doc.dump();
    return path;
}

json two_spheres(double r, double big_r, double d) {
    return {{"ambient_n", 2},
            {"spheres",
             {{{"kind", "sphere"}, {"center", {0, 0}}, {"radius", r}},
              {{"kind", "sphere"}, {"center", {d, 0}}, {"radius", big_r}}}}};
}

} // namespace

TEST(CliInvariants, ConcentricReport) {
    const auto r = run({"invariants", sample("concentric_1_2")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["eigenvalues"][0].get<double>(), 1.5625, 1e-9);
    EXPECT_EQ(j["case"]["tag"], 1);
    EXPECT_EQ(j["case"]["name"], "separated");
    EXPECT_EQ(j["m"], 1);
    EXPECT_EQ(j["l"], 1);
    EXPECT_EQ(j["angles"][0]["kind"], "hyperbolic");
    EXPECT_TRUE(j["reduction"].is_null());
    EXPECT_EQ(j["input"]["spheres"][1]["radius"], 2);
    EXPECT_DOUBLE_EQ(j["tolerances"]["rank"].get<double>(), 1e-9);
    EXPECT_FALSE(j.contains("frames"));
}

TEST(CliInvariants, TangentReportHasParabolicAngle) {
    const auto r = run({"invariants", sample("tangent")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["case"]["tag"], 4);
    EXPECT_EQ(j["angles"][0]["kind"], "parabolic");
    EXPECT_NEAR(j["intersection"]["tangency_point"][0].get<double>(), 1.0, 1e-9);
}

TEST(CliInvariants, FramesOnRequest) {
    const auto r = run({"invariants", "--frames", sample("hopf_link")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    ASSERT_TRUE(j.contains("frames"));
    EXPECT_EQ(j["case"]["tag"], 3);
    EXPECT_LT(j["frames"]["gram_residual"].get<double>(), 1e-10);
    EXPECT_LT(j["frames"]["case_residual"].get<double>(), 1e-9);
    EXPECT_EQ(j["frames"]["b"].size(), 5u);
}

TEST(CliInvariants, ReportRoundTripsBitIdentically) {
    const auto r = run({"invariants", "--frames", sample("hopf_link")});
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    const cli::Request req = cli::parse_request(cli::read_json_file(sample("hopf_link")));
    const auto a = invariants(req.spheres[0], req.spheres[1], req.tol, true);
    for (Eigen::Index i = 0; i < a.eigenvalues.size(); ++i) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(j["eigenvalues"][static_cast<std::size_t>(i)].get<double>()),
                  std::bit_cast<std::uint64_t>(a.eigenvalues(i)));
    }
    const Matrix b = cli::matrix_from_json(j["frames"]["b"], "b");
    EXPECT_EQ(b, a.frames->b);
    EXPECT_EQ(json::parse(j.dump()), j);
}

TEST(CliInvariants, PrettyTable) {
    const auto r = run({"invariants", "--pretty", sample("concentric_1_2")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("case 1: separated"), std::string::npos);
    EXPECT_NE(r.out.find("hyperbolic"), std::string::npos);
}

TEST(CliInvariants, Deterministic) {
    EXPECT_EQ(run({"invariants", "--frames", sample("hopf_link")}).out,
              run({"invariants", "--frames", sample("hopf_link")}).out);
}

TEST(CliInvariants, GoldenValuesFromGeneratedInputs) {
    const auto inter = json::parse(run({"invariants", write_temp("inter.json", two_spheres(1, 1, 1))}).out);
    EXPECT_NEAR(inter["eigenvalues"][0].get<double>(), 0.25, 1e-9);
    EXPECT_NEAR(inter["angles"][0]["beta"].get<double>(), std::acos(oracle::sphere_sphere(1, 1, 1)), 1e-9);
    EXPECT_EQ(inter["case"]["tag"], 2);
    const auto tan = json::parse(run({"invariants", write_temp("tan.json", two_spheres(1, 1, 2))}).out);
    EXPECT_NEAR(tan["eigenvalues"][0].get<double>(), 1.0, 1e-9);
    EXPECT_EQ(tan["case"]["tag"], 4);
}

TEST(CliErrors, BadRadiusNamesTheField) {
    const auto r = run({"invariants", sample("bad_radius")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("spheres[0].radius"), std::string::npos) << r.err;
}

TEST(CliErrors, InputValidation) {
    auto code_and_err = [](const json& doc) {
        const auto r = run({"invariants", write_temp("bad.json", doc)});
        return std::make_pair(r.code, r.err);
    };
    json d = two_spheres(1, 2, 0);
    d["spheres"][1]["center"] = {0, 0, 0};
    auto [c1, e1] = code_and_err(d);
    EXPECT_EQ(c1, 2);
    EXPECT_NE(e1.find("spheres[1].center"), std::string::npos) << e1;

    d = two_spheres(1, 2, 0);
    d["spheres"][0] = {{"kind", "plane"}, {"normal", {0, 0}}, {"offset", 1}};
    auto [c2, e2] = code_and_err(d);
    EXPECT_EQ(c2, 2);
    EXPECT_NE(e2.find("spheres[0].normal"), std::string::npos) << e2;

    d = two_spheres(1, 2, 0);
    d["spheres"][0] = {{"kind", "points"}, {"dim", 1}, {"points", {{0, 1}, {1, 0}}}};
    auto [c3, e3] = code_and_err(d);
    EXPECT_EQ(c3, 2);
    EXPECT_NE(e3.find("spheres[0].points"), std::string::npos) << e3;

    d = two_spheres(1, 2, 0);
    d["spheres"][0] = {{"kind", "points"}, {"dim", 1}, {"points", {{0, 0}, {0, 0}, {1, 1}}}};
    EXPECT_EQ(code_and_err(d).first, 2);

    d = two_spheres(1, 2, 0);
    d["spheres"][0] = {{"kind", "subspace"}, {"basis", {{1, 0, 0, 0}, {0, 1, 0, 0}}}};
    auto [c5, e5] = code_and_err(d);
    EXPECT_EQ(c5, 2);
    EXPECT_NE(e5.find("spheres[0]"), std::string::npos) << e5;

    d = two_spheres(1, 2, 0);
    d["spheres"][0]["kind"] = "cube";
    EXPECT_EQ(code_and_err(d).first, 2);

    d = two_spheres(1, 2, 0);
    d["spheres"].erase(1);
    EXPECT_EQ(code_and_err(d).first, 2);

    d = two_spheres(1, 2, 0);
    d["tolerances"] = {{"rank", -1}};
    auto [c8, e8] = code_and_err(d);
    EXPECT_EQ(c8, 2);
    EXPECT_NE(e8.find("tolerances.rank"), std::string::npos);

    const std::string broken = ::testing::TempDir() + "broken.json";
    std::ofstream(broken) << "{\"ambient_n\": 2, ";
    EXPECT_EQ(run({"invariants", broken}).code, 2);
    EXPECT_EQ(run({"invariants", "/nonexistent/file.json"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(CliErrors, EqualSpheresExitThree) {
    const auto r = run({"invariants", write_temp("eq.json", two_spheres(1, 1, 0))});
    EXPECT_EQ(r.code, 3);
}

TEST(CliErrors, ExitCodeMapping) {
    EXPECT_EQ(cli::exit_code(ErrorCode::InvalidInput), 2);
    EXPECT_EQ(cli::exit_code(ErrorCode::IncomparablePairs), 2);
    EXPECT_EQ(cli::exit_code(ErrorCode::EqualSpheres), 3);
    EXPECT_EQ(cli::exit_code(ErrorCode::InconsistentClassification), 4);
    EXPECT_EQ(cli::exit_code(ErrorCode::WitnessFailed), 4);
}

TEST(CliTolerances, FlagsFileAndEnvironment) {
    json d = two_spheres(1, 2, 0);
    d["tolerances"] = {{"rank", 1e-10}};
    const std::string f = write_temp("tol.json", d);
    auto j = json::parse(run({"invariants", f}).out);
    EXPECT_DOUBLE_EQ(j["tolerances"]["rank"].get<double>(), 1e-10);
    j = json::parse(run({"invariants", f, "--tolerance-rank", "1e-11", "--tolerance-case", "1e-7"}).out);
    EXPECT_DOUBLE_EQ(j["tolerances"]["rank"].get<double>(), 1e-11);
    EXPECT_DOUBLE_EQ(j["tolerances"]["case_band"].get<double>(), 1e-7);

    ::setenv(cli::kEnvCase, "2e-8", 1);
    j = json::parse(run({"invariants", f}).out);
    EXPECT_DOUBLE_EQ(j["tolerances"]["case_band"].get<double>(), 2e-8);
    ::setenv(cli::kEnvCase, "nonsense", 1);
    EXPECT_EQ(run({"invariants", f}).code, 2);
    ::unsetenv(cli::kEnvCase);
    EXPECT_EQ(run({"invariants", f, "--tolerance-rank", "0"}).code, 2);
}

TEST(CliClassify, CaseTags) {
    EXPECT_EQ(json::parse(run({"classify", sample("concentric_1_2")}).out)["case"]["tag"], 1);
    EXPECT_EQ(json::parse(run({"classify", sample("hopf_link")}).out)["case"]["tag"], 3);
    EXPECT_EQ(json::parse(run({"classify", sample("circle_and_line")}).out)["case"]["tag"], 3);
    EXPECT_EQ(json::parse(run({"classify", sample("tangent")}).out)["case"]["tag"], 4);
    EXPECT_EQ(run({"classify", "--pretty", sample("tangent")}).out, "case 4: tangent\n");
}

TEST(CliFrames, ResidualsWithinBounds) {
    const auto r = run({"frames", sample("concentric_1_2")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LT(j["gram_residual"].get<double>(), 1e-10);
    EXPECT_LT(j["case_residual"].get<double>(), 1e-9);
}

TEST(CliEquivalent, ExitCodes) {
    EXPECT_EQ(run({"equivalent", sample("concentric_1_2"), sample("concentric_2_4")}).code, 0);
    const auto r = run({"equivalent", sample("concentric_1_2"), sample("concentric_1_4")});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(json::parse(r.out)["equivalent"].get<bool>());
    EXPECT_EQ(run({"equivalent", sample("concentric_1_2"), sample("tangent")}).code, 2);
}

TEST(CliWitness, EmitThenVerify) {
    const std::string w = ::testing::TempDir() + "witness.json";
    const auto r = run({"witness", sample("concentric_1_2"), sample("concentric_2_4"), "--output", w});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["matrix"].size(), 4u);
    EXPECT_LT(j["residual"].get<double>(), 1e-8);
    const auto v = run({"witness", sample("concentric_1_2"), sample("concentric_2_4"), "--verify", w});
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_LT(json::parse(v.out)["residual"].get<double>(), 1e-8);

    // the same matrix does not carry the pair onto an inequivalent one
    const auto bad = run({"witness", sample("concentric_1_2"), sample("concentric_1_4"), "--verify", w});
    EXPECT_EQ(bad.code, 4);
    EXPECT_EQ(run({"witness", sample("concentric_1_2"), sample("concentric_1_4")}).code, 1);
}

TEST(CliStereographic, ProjectAndLift) {
    EXPECT_EQ(run({"project", "0", "0", "-1", "1"}).out, "0 0\n");
    EXPECT_EQ(run({"project", "0", "0", "1", "1"}).out, "inf\n");
    EXPECT_EQ(run({"lift", "0", "0"}).out, "0 0 -1 1\n");
    EXPECT_EQ(run({"lift", "inf", "--n", "2"}).out, "0 0 1 1\n");
    EXPECT_EQ(run({"lift", "inf"}).code, 2);
    EXPECT_EQ(run({"project", "0", "x", "1"}).code, 2);

    const auto l = run({"lift", "0.5", "-2"});
    std::vector<std::string> args{"project"};
    std::istringstream in(l.out);
    for (std::string s; in >> s;) args.push_back(s);
    const auto back = run(args);
    std::istringstream coords(back.out);
    double x = 0, y = 0;
    coords >> x >> y;
    EXPECT_NEAR(x, 0.5, 1e-15);
    EXPECT_NEAR(y, -2.0, 1e-15);
}

TEST(CliRandomPair, ReproducibleAndParsable) {
    const auto a = run({"random-pair", "--seed", "7", "--n", "4", "--m", "2", "--l", "1"});
    const auto b = run({"random-pair", "--seed", "7", "--n", "4", "--m", "2", "--l", "1"});
    const auto c = run({"random-pair", "--seed", "8", "--n", "4", "--m", "2", "--l", "1"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    const auto inv = run({"invariants", write_temp("rand.json", json::parse(a.out))});
    ASSERT_EQ(inv.code, 0) << inv.err;
    const json j = json::parse(inv.out);
    EXPECT_EQ(j["m"], 2);
    EXPECT_EQ(j["l"], 1);
    EXPECT_EQ(run({"random-pair", "--n", "2", "--m", "2"}).code, 2);
}
