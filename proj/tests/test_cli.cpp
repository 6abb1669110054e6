// Drives the installed CLI binary end to end: exit codes, report shapes,
// config/seed resolution and byte-level determinism.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct cli_result {
    int exit_code;
    std::string output;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("meanscope_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

cli_result run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const std::string cmd = std::string(MEANSCOPE_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " +
                            (scratch_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    cli_result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("classify exit codes and report shape") {
    const auto ok = run_cli(
        "classify --family uab --a 1 --b 0.5 --props gcv,pmi --format json");
    REQUIRE(ok.exit_code == 0);
    const json j = json::parse(ok.output);
    CHECK(j.at("command") == "classify");
    CHECK(j.at("function") == "uab(1,0.5)");
    REQUIRE(j.at("reports").size() == 2);
    for (const auto& rep : j.at("reports")) {
        CHECK(rep.at("verdict") == "holds_on_grid");
        CHECK(rep.at("grid").at("n_points") == 241);
    }
    CHECK(j.at("config").at("seed") == 7);

    const auto bad = run_cli(
        "classify --family section5 --props pmi_r --r 2 --format json");
    REQUIRE(bad.exit_code == 1);
    const json jb = json::parse(bad.output);
    const auto& rep = jb.at("reports").at(0);
    CHECK(rep.at("verdict") == "violated");
    CHECK(rep.at("witness").at("t").get<double>() < 1e-2);

    const auto all = run_cli(
        "classify --family power --alpha 0.5 --props gcv,gcc,pmi,pmd");
    CHECK(all.exit_code == 0);

    CHECK(run_cli("classify --family nope --props gcv").exit_code == 2);
    CHECK(run_cli("classify --family power --props wat").exit_code == 2);
    CHECK(run_cli("classify --family uab --a 0.5 --b 1 --props gcv").exit_code ==
          2);  // outside Gamma
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("hansen subcommand") {
    const fs::path density = scratch_dir() / "density.json";
    {
        std::ofstream out(density);
        out << R"([{"from":"-inf","to":-2.0,"value":1.0}])";
    }

    const auto eval = run_cli("hansen --density " + density.string() +
                              " --criterion eval --t 4 --format json");
    REQUIRE(eval.exit_code == 0);
    const json j = json::parse(eval.output);
    REQUIRE(j.at("rows").size() == 1);
    CHECK(std::abs(j.at("rows").at(0).at("value").get<double>() - 2.0) < 1e-12);

    const auto gcv = run_cli(
        "hansen --density theorem --criterion gcv --t 0.001 --format json");
    REQUIRE(gcv.exit_code == 0);
    const double v =
        json::parse(gcv.output).at("rows").at(0).at("value").get<double>();
    CHECK(v < -0.03);

    const auto pmi = run_cli(
        "hansen --density theorem --criterion pmi --t 0.5,2 --r 1 --format json");
    REQUIRE(pmi.exit_code == 0);
    for (const auto& row : json::parse(pmi.output).at("rows")) {
        CHECK(row.at("value").get<double>() == 0.0);
    }

    // CSV column order is pinned.
    const auto csv = run_cli("hansen --density theorem --criterion pmi --t 2 "
                             "--r 2 --format csv");
    CHECK(csv.output.rfind("t,r,value,method\n", 0) == 0);

    const fs::path broken = scratch_dir() / "broken.json";
    {
        std::ofstream out(broken);
        out << "{not json";
    }
    CHECK(run_cli("hansen --density " + broken.string() + " --criterion eval")
              .exit_code == 2);
    const fs::path invalid = scratch_dir() / "invalid.json";
    {
        std::ofstream out(invalid);
        out << R"([{"from":-1.0,"to":0.0,"value":2.0}])";
    }
    CHECK(run_cli("hansen --density " + invalid.string() + " --criterion eval")
              .exit_code == 2);
}

TEST_CASE("fuzz subcommand") {
    const auto clean = run_cli(
        "fuzz --family power --alpha 0.5 --p 2 --trials 300 --seed 7 "
        "--format json");
    REQUIRE(clean.exit_code == 0);
    CHECK(json::parse(clean.output).at("witness").is_null());

    const auto hit = run_cli(
        "fuzz --family section5 --p 2 --seed 7 --format json");
    REQUIRE(hit.exit_code == 1);
    const json jw = json::parse(hit.output).at("witness");
    CHECK(jw.at("phase") == "scalar_probe");
    CHECK(jw.at("A").at("dim") == 1);

    // The raw uab formula outside Gamma is allowed here (falsifier use).
    const auto raw = run_cli(
        "fuzz --family uab --a 0.5 --b 1 --p 3 --seed 7 --format json");
    REQUIRE(raw.exit_code == 1);
    const json jr = json::parse(raw.output);
    CHECK(jr.at("gamma_member") == false);
    CHECK_FALSE(jr.at("witness").is_null());
}

TEST_CASE("fuzz reports are byte-identical for a fixed seed") {
    const fs::path a = scratch_dir() / "fuzz_a.json";
    const fs::path b = scratch_dir() / "fuzz_b.json";
    const std::string base =
        "fuzz --family binomial --bp -1 --p 2 --trials 100 --seed 42 "
        "--format json --out ";
    REQUIRE(run_cli(base + a.string()).exit_code == 1);
    REQUIRE(run_cli(base + b.string()).exit_code == 1);
    const std::string ca = slurp(a), cb = slurp(b);
    REQUIRE(!ca.empty());
    CHECK(ca == cb);
}

TEST_CASE("scan subcommand") {
    const auto csv = run_cli("scan --family stolarsky --property gcv --step 0.5");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.output.rfind("a,b,predicted,observed\n", 0) == 0);

    const auto js =
        run_cli("scan --family binomial --property gcv --step 0.5 --format json");
    REQUIRE(js.exit_code == 0);
    CHECK(json::parse(js.output).at("result").at("interior_mismatches") == 0);

    CHECK(run_cli("scan --family nope --property gcv").exit_code == 2);
    CHECK(run_cli("scan --family uab --property nope").exit_code == 2);
}

TEST_CASE("reproduce subcommand") {
    const auto rep =
        run_cli("reproduce --name section5_separation --format json");
    REQUIRE(rep.exit_code == 0);
    const json j = json::parse(rep.output);
    CHECK(j.at("pass") == true);
    CHECK(j.at("checks").size() >= 4);

    CHECK(run_cli("reproduce --name nope").exit_code == 2);
}

TEST_CASE("config file and environment seed") {
    const fs::path cfg = scratch_dir() / "config.json";
    {
        std::ofstream out(cfg);
        out << R"({"grid":{"t_min":1e-2,"t_max":1e2,"n_points":61},"seed":5})";
    }
    const auto r = run_cli("classify --family power --alpha 0.5 --props gcv "
                           "--config " +
                           cfg.string() + " --format json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("config").at("grid").at("n_points") == 61);
    CHECK(j.at("config").at("seed") == 5);

    // Explicit flags override the config file.
    const auto r2 = run_cli("classify --family power --alpha 0.5 --props gcv "
                            "--config " +
                            cfg.string() + " --points 81 --format json");
    CHECK(json::parse(r2.output).at("config").at("grid").at("n_points") == 81);

    // MEANSCOPE_SEED fills in when --seed is absent.
    ::setenv("MEANSCOPE_SEED", "99", 1);
    const auto env_run = run_cli(
        "fuzz --family power --alpha 1 --p 2 --trials 5 --format json");
    CHECK(json::parse(env_run.output).at("seed") == 99);
    const auto flag_run = run_cli(
        "fuzz --family power --alpha 1 --p 2 --trials 5 --seed 3 --format json");
    CHECK(json::parse(flag_run.output).at("seed") == 3);
    ::unsetenv("MEANSCOPE_SEED");
}
