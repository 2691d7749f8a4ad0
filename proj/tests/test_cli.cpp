#include <doctest.h>

#include "cpseg/cli.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace cpseg;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = CPSEG_FIXTURES;
const std::string kStep = kFixtures + "/step_scores.jsonl";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "cpseg_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

// Runs the installed binary through the shell and returns its exit status.
int shell(const std::string &args) {
    const int status = std::system(("'" + std::string(CPSEG_CLI) + "' " + args).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("segment on the noiseless fixture") {
    // The fixture's maximal statistic is sqrt(1.5), below the default
    // threshold sqrt(log 6), so the step needs r = 0.5 as in the engine example.
    const auto r = run({"segment", "--scores", kStep, "--seed", "3", "--r", "0.5"});
    REQUIRE(r.code == exit_code::ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["change_points"] == nlohmann::json::parse("[2]"));
    CHECK(j["labels"] == nlohmann::json::parse(R"(["human","LLM"])"));
    CHECK(j["segment_scores"] == nlohmann::json::parse("[0.0, 1.0]"));
    CHECK(j["N"] == 6);
    const auto &echo = j["config_echo"];
    CHECK(echo["method"] == "wcp");
    CHECK(echo["seed"] == 3);
    CHECK(echo["seed_source"] == "flag");
    CHECK(echo["M"] == 200);
    CHECK(echo["r"] == 0.5);

    // Constant variances normalize to unit weights, so wcp and vcp agree at
    // the default threshold too: nothing is found.
    for (const char *method : {"vcp", "wcp"}) {
        const auto d = run({"segment", "--scores", kStep, "--method", method});
        REQUIRE(d.code == exit_code::ok);
        const auto dj = nlohmann::json::parse(d.out);
        CHECK(dj["change_points"].empty());
        CHECK(dj["single_class"] == true);
        CHECK(dj["config_echo"]["r"].get<double>() == doctest::Approx(std::sqrt(std::log(6.0))));
    }
    for (const char *method : {"vcp", "wcp", "gcp"}) {
        const auto m = run({"segment", "--scores", kStep, "--method", method, "--r", "0.5"});
        REQUIRE(m.code == exit_code::ok);
        CHECK(nlohmann::json::parse(m.out)["change_points"] == nlohmann::json::parse("[2]"));
    }
}

TEST_CASE("segment with an external scorer") {
    const std::string cmd = std::string("'") + CPSEG_FAKE_SCORER + "' '" + kStep + "'";
    const auto ok = run({"segment", "--scores", kStep, "--method", "gcp", "--r", "0.5", "--scorer-cmd", cmd});
    REQUIRE(ok.code == exit_code::ok);
    CHECK(nlohmann::json::parse(ok.out)["change_points"] == nlohmann::json::parse("[2]"));

    const auto crash = run({"segment", "--scores", kStep, "--method", "gcp", "--scorer-cmd", cmd + " --crash-after 3"});
    CHECK(crash.code == exit_code::scorer_failure);
    CHECK(crash.out.empty());

    const auto error = run({"segment", "--scores", kStep, "--method", "gcp", "--scorer-cmd", cmd + " --error-after 0"});
    CHECK(error.code == exit_code::scorer_failure);

    CHECK(run({"segment", "--scores", kStep, "--method", "wcp", "--scorer-cmd", cmd}).code == exit_code::input_error);
}

TEST_CASE("input errors exit with 2") {
    const auto bad_flag = run({"segment", "--scores", kStep, "--bogus"});
    CHECK(bad_flag.code == exit_code::input_error);
    CHECK(bad_flag.err.find("Usage") != std::string::npos);

    CHECK(run({"segment"}).code == exit_code::input_error);
    CHECK(run({"segment", "--scores", kFixtures + "/does_not_exist.jsonl"}).code == exit_code::input_error);
    CHECK(run({"segment", "--scores", kStep, "--method", "xyz"}).code == exit_code::input_error);
    CHECK(run({"segment", "--scores", kStep, "--method", "vcp", "--weights", "invvar"}).code == exit_code::input_error);
    CHECK(run({"segment", "--scores", kStep, "--r", "-1"}).code == exit_code::input_error);
    CHECK(run({}).code == exit_code::input_error);

    const auto bad_scores = scratch("bad.jsonl");
    std::ofstream(bad_scores) << "{\"idx\":0,\"score\":0,\"n_tokens\":1}\n{\"idx\":1,\"score\":0,\"n_tokens\":1,\"var\":-0.1}\n";
    const auto schema = run({"segment", "--scores", bad_scores.string()});
    CHECK(schema.code == exit_code::input_error);
    CHECK(schema.err.find("line 2") != std::string::npos);

    CHECK(run({"--help"}).code == exit_code::ok);
}

TEST_CASE("eval on fixtures") {
    const auto same = run({"eval", "--truth", kFixtures + "/step_truth.json", "--pred", kFixtures + "/step_truth.json"});
    REQUIRE(same.code == exit_code::ok);
    auto j = nlohmann::json::parse(same.out);
    CHECK(j["wd"] == 0.0);
    CHECK(j["ce"] == 0);

    const auto shifted = run({"eval", "--truth", kFixtures + "/wd_truth.json", "--pred", kFixtures + "/wd_pred.json"});
    REQUIRE(shifted.code == exit_code::ok);
    j = nlohmann::json::parse(shifted.out);
    CHECK(j["wd"] == 0.5);
    CHECK(j["window_k"] == 2);

    const auto k1 = run({"eval", "--truth", kFixtures + "/wd_truth.json", "--pred", kFixtures + "/wd_pred.json",
                         "--window-k", "1"});
    CHECK(nlohmann::json::parse(k1.out)["window_k"] == 1);

    CHECK(run({"eval", "--truth", kFixtures + "/wd_truth.json", "--pred", kFixtures + "/wd_pred_n7.json"}).code ==
          exit_code::input_error);
}

TEST_CASE("binary: segment then eval is byte-identical across runs") {
    const auto seg = scratch("seg.json"), ev = scratch("eval.json");
    const std::string truth = kFixtures + "/step_truth.json";
    auto pipeline = [&] {
        REQUIRE(shell("segment --scores '" + kStep + "' --seed 11 --r 0.5 --out '" + seg.string() + "'") == 0);
        REQUIRE(shell("eval --truth '" + truth + "' --pred '" + seg.string() + "' --out '" + ev.string() + "'") == 0);
        return std::make_pair(slurp(seg), slurp(ev));
    };
    const auto first = pipeline();
    const auto second = pipeline();
    CHECK(first.first == second.first);
    CHECK(first.second == second.second);
    const auto report = nlohmann::json::parse(first.second);
    CHECK(report["wd"] == 0.0);
    CHECK(report["ce"] == 0);

    CHECK(shell("segment --scores '" + kStep + "' --nope 2>/dev/null") == exit_code::input_error);
}

TEST_CASE("seed precedence: flag over environment over default") {
    ::setenv("CPSEG_SEED", "77", 1);
    auto j = nlohmann::json::parse(run({"segment", "--scores", kStep}).out);
    CHECK(j["config_echo"]["seed"] == 77);
    CHECK(j["config_echo"]["seed_source"] == "env");
    j = nlohmann::json::parse(run({"segment", "--scores", kStep, "--seed", "5"}).out);
    CHECK(j["config_echo"]["seed"] == 5);
    ::unsetenv("CPSEG_SEED");
    j = nlohmann::json::parse(run({"segment", "--scores", kStep}).out);
    CHECK(j["config_echo"]["seed"] == 0);
    CHECK(j["config_echo"]["seed_source"] == "default");
}

TEST_CASE("simulate smoke run is fast and reproducible") {
    for (const char *suite : {"thm1", "thm2", "equivalence", "minimax"}) {
        const auto start = std::chrono::steady_clock::now();
        const auto a = run({"simulate", "--suite", suite, "--seeds", "10", "--rate-seeds", "10", "--seed", "4"});
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        REQUIRE(a.code == exit_code::ok);
        CHECK(seconds < 60.0);
        const auto b = run({"simulate", "--suite", suite, "--seeds", "10", "--rate-seeds", "10", "--seed", "4"});
        CHECK(a.out == b.out);
        const auto j = nlohmann::json::parse(a.out);
        CHECK(j["suite"] == suite);
        CHECK(j.contains("result"));
        CHECK(j.contains("config"));
    }
    const auto csv = scratch("minimax.csv");
    REQUIRE(run({"simulate", "--suite", "minimax", "--seeds", "10", "--out", csv.string()}).code == exit_code::ok);
    CHECK(slurp(csv).rfind("key,value\n", 0) == 0);
}
