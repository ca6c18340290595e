#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ubmot/cli.hpp"

using namespace ubmot::cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "ubmot");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& s) {
    std::vector<std::string> r;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') r.push_back(line);
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("range syntax") {
    CHECK(parse_int_range("1..4") == std::vector<long>{1, 2, 3, 4});
    CHECK(parse_int_range("3,9") == std::vector<long>{3, 9});
    CHECK(parse_int_range("-2") == std::vector<long>{-2});
    CHECK_THROWS(parse_int_range("4..1"));
    CHECK_THROWS(parse_int_range("1..x"));
    CHECK(parse_real_grid("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
    CHECK(parse_real_grid("0.5,2") == std::vector<double>{0.5, 2});
    CHECK(parse_real_grid("-3.5") == std::vector<double>{-3.5});
    CHECK_THROWS(parse_real_grid("0:1"));
}

TEST_CASE("thread resolution") {
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("moments sweep") {
    Run r = run_args({"moments", "--N", "30", "--t", "3.6", "--k", "1..30", "--form", "a8b", "--no-meta"});
    REQUIRE(r.code == 0);
    auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 31);
    CHECK(lines[0] == "N,t,k,value,method,err_estimate");
    const double m1 = std::stod(lines[1].substr(lines[1].find(',', lines[1].find(',') + 1) + 3));
    CHECK(std::abs(m1 - std::exp(-1.8)) < 1e-14);
}

TEST_CASE("sff first row") {
    Run r = run_args({"sff", "--N", "20", "--t", "2", "--k", "1..40", "--format", "json", "--no-meta"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == 40);
    CHECK(std::abs(j["rows"][0]["value"].get<double>() - (1 - std::exp(-2.0))) < 1e-12);
    CHECK(j["rows"][0]["method"].is_string());
}

TEST_CASE("output is byte-identical across runs and thread counts") {
    Run a = run_args({"sff", "--N", "12", "--t", "0.5:3:4", "--k", "1..15", "--threads", "1", "--no-meta"});
    Run b = run_args({"sff", "--N", "12", "--t", "0.5:3:4", "--k", "1..15", "--threads", "4", "--no-meta"});
    REQUIRE(a.code == 0);
    // the command line is part of the metadata; compare the data only
    CHECK(data_lines(a.out) == data_lines(b.out));
    Run c = run_args({"sff", "--N", "12", "--t", "0.5:3:4", "--k", "1..15", "--threads", "1", "--no-meta"});
    CHECK(a.out == c.out);
}

TEST_CASE("simulate writes the trajectory file") {
    const std::string path = "cli_test_traj.csv";
    Run r = run_args({"simulate", "--N", "30", "--sqrt-dt", "0.02", "--steps", "300", "--trajectories", "1",
                      "--seed", "7", "--out", path, "--no-meta"});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    auto lines = data_lines(ss.str());
    CHECK(lines[0] == "step,t,angle_index,angle");
    CHECK(lines.size() == 1 + 301 * 30);
    CHECK(lines.back().rfind("300,3.6,29,", 0) == 0);
    std::remove(path.c_str());
    CHECK(run_args({"simulate", "--N", "3", "--steps", "5", "--trajectories", "2"}).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run_args({}).code == 1);
    CHECK(run_args({"moments", "--N", "3", "--t", "1", "--k", "1", "--bogus"}).code == 1);
    CHECK(run_args({"frobnicate"}).code == 1);
    CHECK(run_args({"moments", "--N", "3", "--t", "1", "--k", "1..x"}).code == 1);
    CHECK(run_args({"moments", "--N", "0", "--t", "1", "--k", "1"}).code == 2);
    CHECK(run_args({"density", "--t", "2", "--method", "fourier"}).code == 2);
    CHECK(run_args({"sff", "--N", "4", "--t", "1", "--k", "1", "--tol", "1e-30"}).code == 3);
    CHECK(run_args({"--help"}).code == 0);
}

TEST_CASE("other subcommands produce tables") {
    for (std::vector<std::string> a : {
             std::vector<std::string>{"sff-scaled", "--t", "2", "--mu", "0.1:2:5"},
             {"sff", "--t", "1", "--k", "1..3", "--regime", "limit"},
             {"sff", "--N", "6", "--t", "1", "--k", "1..3", "--regime", "integral"},
             {"density", "--t", "6", "--x", "-3:3:7", "--method", "fourier"},
             {"density", "--t", "2", "--N", "5", "--x", "0,1"},
             {"edges", "--t", "2,4,6"},
             {"drp-curve", "--model", "dbm", "--N", "20", "--t", "4", "--mu", "0.05:2:20"},
             {"drp-curve", "--model", "gue", "--N", "40", "--tau", "0.05:1.5:60"},
         }) {
        CAPTURE(a[0]);
        Run r = run_args(a);
        CHECK(r.code == 0);
        CHECK(data_lines(r.out).size() > 1);
    }
}

TEST_CASE("validate runs a suite and reports JSON") {
    Run r = run_args({"validate", "--suite", "closed-forms", "--format", "json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["criteria"].size() == 2);
    CHECK(run_args({"validate", "--suite", "nonsense"}).code == 2);
}

}
