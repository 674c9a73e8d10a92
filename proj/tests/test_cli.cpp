// End-to-end checks of the command-line binary: exit-code contract,
// config validation, deterministic summary/CSV artifacts, and output
// directory resolution.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Fresh scratch directory per test case, removed afterwards.
struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("flab-cli-" + std::to_string(counter++));
        std::error_code ec;
        fs::remove_all(path, ec);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + "\"" + FLAB_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

void write_config(const fs::path& p, const json& j) { write_file(p, j.dump(2)); }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("") == 1);                      // a subcommand is required
    CHECK(run_cli("no-such-subcommand") == 1);
    CHECK(run_cli("norm-check") == 1);            // --config is required
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("a clean euclidean norm check passes with a full summary") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    const fs::path out = tmp.path / "out";
    write_config(cfg, {{"norm", {{"kind", "euclidean"}, {"dim", 3}}}, {"samples", 200}});
    CHECK(run_cli("norm-check --config " + q(cfg) + " --out " + q(out)) == 0);

    const json summary = json::parse(read_file(out / "summary.json"));
    CHECK(summary.at("schema") == "finsler-lab/1");
    CHECK(summary.at("subcommand") == "norm-check");
    CHECK(summary.at("pass") == true);
    const std::string hash = summary.at("config_hash");
    CHECK(hash.size() == 16);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(summary.at("results").at("properties").is_array());
    CHECK(fs::exists(out / "norm_properties.csv"));
}

TEST_CASE("a broken structural identity exits with code 2") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    const fs::path out = tmp.path / "out";
    write_config(cfg, {{"norm", {{"kind", "perturbed"}, {"eps", 0.05}, {"harmonic", 4}}},
                       {"samples", 200}});
    CHECK(run_cli("norm-check --config " + q(cfg) + " --out " + q(out)) == 2);
    const json summary = json::parse(read_file(out / "summary.json"));
    CHECK(summary.at("pass") == false);
}

TEST_CASE("config problems exit with code 1") {
    TempDir tmp;
    const fs::path out = tmp.path / "out";

    CHECK(run_cli("norm-check --config " + q(tmp.path / "absent.json") + " --out " +
                  q(out)) == 1);

    const fs::path bad_json = tmp.path / "bad.json";
    write_file(bad_json, "{ not json");
    CHECK(run_cli("norm-check --config " + q(bad_json) + " --out " + q(out)) == 1);

    const fs::path unknown_key = tmp.path / "unknown.json";
    write_config(unknown_key,
                 {{"norm", {{"kind", "euclidean"}, {"dim", 2}}}, {"bogus", 1}});
    CHECK(run_cli("norm-check --config " + q(unknown_key) + " --out " + q(out)) == 1);

    const fs::path bad_kind = tmp.path / "kind.json";
    write_config(bad_kind, {{"norm", {{"kind", "taxicab"}}}});
    CHECK(run_cli("norm-check --config " + q(bad_kind) + " --out " + q(out)) == 1);

    const fs::path bad_domain = tmp.path / "domain.json";
    write_config(bad_domain, {{"norm", {{"kind", "perturbed"}, {"eps", 0.5}}}});
    CHECK(run_cli("norm-check --config " + q(bad_domain) + " --out " + q(out)) == 1);
}

TEST_CASE("reruns produce byte-identical artifacts") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    write_config(cfg, {{"norm", {{"kind", "ellipsoidal"}, {"diag", {4.0, 1.0}}}},
                       {"samples", 150},
                       {"seed", 7}});
    const fs::path out1 = tmp.path / "a";
    const fs::path out2 = tmp.path / "b";
    CHECK(run_cli("norm-check --config " + q(cfg) + " --out " + q(out1)) == 0);
    CHECK(run_cli("norm-check --config " + q(cfg) + " --out " + q(out2)) == 0);
    CHECK(read_file(out1 / "summary.json") == read_file(out2 / "summary.json"));
    CHECK(read_file(out1 / "norm_properties.csv") == read_file(out2 / "norm_properties.csv"));

    // A different seed changes the empirical sweep but not the verdict.
    const fs::path out3 = tmp.path / "c";
    CHECK(run_cli("norm-check --config " + q(cfg) + " --seed 8 --out " + q(out3)) == 0);
    CHECK(read_file(out1 / "summary.json") != read_file(out3 / "summary.json"));
}

TEST_CASE("radial solve subcommand verifies explicit solutions end to end") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    const fs::path out = tmp.path / "out";
    write_config(cfg, {{"profile", {{"family", "liouville"}, {"lambda", 2.0}}},
                       {"nonlinearity", {{"kind", "exponential"}}}});
    CHECK(run_cli("solve-radial --config " + q(cfg) + " --out " + q(out)) == 0);
    const json summary = json::parse(read_file(out / "summary.json"));
    CHECK(summary.at("pass") == true);

    // Mismatched nonlinearity: the residual check fails, exit code 2.
    const fs::path wrong = tmp.path / "wrong.json";
    write_config(wrong, {{"profile", {{"family", "liouville"}, {"lambda", 2.0}}},
                         {"nonlinearity", {{"kind", "power"}, {"p", 3.0}}}});
    CHECK(run_cli("solve-radial --config " + q(wrong) + " --out " + q(out)) == 2);
}

TEST_CASE("output directory: flag beats environment beats default") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    write_config(cfg, {{"norm", {{"kind", "euclidean"}, {"dim", 2}}}, {"samples", 50}});

    const fs::path env_dir = tmp.path / "from-env";
    const std::string env = "FINSLER_LAB_OUT=" + env_dir.string() + " ";
    CHECK(run_cli("norm-check --config " + q(cfg), env) == 0);
    CHECK(fs::exists(env_dir / "summary.json"));

    const fs::path flag_dir = tmp.path / "from-flag";
    CHECK(run_cli("norm-check --config " + q(cfg) + " --out " + q(flag_dir), env) == 0);
    CHECK(fs::exists(flag_dir / "summary.json"));
}
