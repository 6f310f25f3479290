#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ocskit/cli.hpp"
#include "ocskit/frlp.hpp"

namespace {

int run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"ocskit"};
    argv.insert(argv.end(), args.begin(), args.end());
    return ocskit::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() / "ocskit_cli_test";
        std::filesystem::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("bounds emits a CSV with embedded config, byte-identical across runs") {
    TempDir tmp;
    const std::string out = tmp.path("bounds.csv");
    CHECK(run({"bounds", "--max-k", "6", "--out", out.c_str()}) == 0);
    const std::string first = slurp(out);
    CHECK(first.find("# config subcommand=bounds") == 0);
    CHECK(first.find("# params gamma_a=") != std::string::npos);
    CHECK(first.find("k,eta_sum,eta_closed,eta_pow_bound,zeta_product,zeta_unweighted") != std::string::npos);
    // 0..6 inclusive = 7 data rows.
    int rows = 0;
    std::istringstream in(first);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'k') ++rows;
    CHECK(rows == 7);

    CHECK(run({"bounds", "--max-k", "6", "--out", out.c_str()}) == 0);
    CHECK(slurp(out) == first);
}

TEST_CASE("verify checks family bounds exactly and with monte carlo") {
    CHECK(run({"verify", "--family", "all-same", "--triples", "2"}) == 0);
    TempDir tmp;
    const std::string out = tmp.path("verify.csv");
    CHECK(run({"verify", "--family", "chained", "--pairs", "4", "--trials", "20000", "--seed", "5", "--out",
               out.c_str()}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("input,spec,exact_or_estimate,bound,pass") != std::string::npos);
    CHECK(text.find("mc:") != std::string::npos);
    CHECK(text.find(",0\n") == std::string::npos);   // no failing rows
}

TEST_CASE("lp solves, exports, and the export parses back") {
    TempDir tmp;
    const std::string out = tmp.path("lp.csv");
    const std::string model_path = tmp.path("model.lp");
    CHECK(run({"lp", "--variant", "unweighted", "--kmax", "6", "--ellmax", "0", "--out", out.c_str(),
               "--export", model_path.c_str()}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("# Gamma = 0.50") != std::string::npos);
    CHECK(text.find("k,ell,a,b") != std::string::npos);
    const ocskit::LpModel parsed = ocskit::parse_lp_text(slurp(model_path));
    CHECK(parsed.rows.size() > 20);
    const auto sol = ocskit::simplex_solve(parsed);
    CHECK(sol.status == ocskit::LpStatus::Optimal);
}

TEST_CASE("simulate runs a seeded experiment with audits") {
    TempDir tmp;
    const std::string out = tmp.path("sim.csv");
    CHECK(run({"simulate", "--variant", "unweighted", "--kind", "upper-triangular-adversarial", "--n", "10",
               "--trials", "25", "--seed", "3", "--mode", "consistent", "--out", out.c_str()}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("seed,alg,opt,ratio,audit_pass") != std::string::npos);
    CHECK(text.find("# mean_ratio =") != std::string::npos);

    // Identical config and seed produce identical bytes.
    const std::string out2 = tmp.path("sim2.csv");
    CHECK(run({"simulate", "--variant", "unweighted", "--kind", "upper-triangular-adversarial", "--n", "10",
               "--trials", "25", "--seed", "3", "--mode", "consistent", "--out", out2.c_str()}) == 0);
    CHECK(slurp(out) == slurp(out2));
}

TEST_CASE("enumerate replays input files and dumps traces") {
    TempDir tmp;
    const std::string replay = tmp.path("input.txt");
    {
        std::ofstream f(replay);
        f << "P 0 1\nP 0 1\n";
    }
    const std::string out = tmp.path("enum.csv");
    const std::string trace = tmp.path("trace.jsonl");
    CHECK(run({"enumerate", "--input", replay.c_str(), "--windows", "0-1", "--out", out.c_str(),
               "--dump-trace", trace.c_str(), "--seed", "9"}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("spec,favorable,total,probability") != std::string::npos);
    CHECK(text.find("[0-1],14,64,0.21875") != std::string::npos);
    const std::string trace_text = slurp(trace);
    CHECK(trace_text.find("\"role\":") != std::string::npos);
    CHECK(trace_text.find("\"output\":") != std::string::npos);
}

TEST_CASE("the seed falls back to the environment variable") {
    TempDir tmp;
    const std::string out = tmp.path("env.csv");
    setenv("OCSKIT_SEED", "12345", 1);
    CHECK(run({"bounds", "--max-k", "2", "--out", out.c_str()}) == 0);
    unsetenv("OCSKIT_SEED");
    CHECK(slurp(out).find("seed=12345") != std::string::npos);
}

TEST_CASE("bad flags and bad config files exit with code 2") {
    CHECK(run({"bounds", "--no-such-flag"}) == 2);
    CHECK(run({"nonsense"}) == 2);
    TempDir tmp;
    const std::string cfg = tmp.path("bad.cfg");
    {
        std::ofstream f(cfg);
        f << "unknown-key=3\n";
    }
    CHECK(run({"bounds", "--config", cfg.c_str()}) == 2);
}
