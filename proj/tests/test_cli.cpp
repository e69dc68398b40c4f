#include "chirpsense/commands.hpp"
#include "chirpsense/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace chirpsense;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("chirpsense_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int counter() {
        static int c = 0;
        return ++c;
    }
};

int cli(std::initializer_list<std::string> args) {
    return run_cli(std::vector<std::string>(args));
}

} // namespace

TEST_CASE("alpha parsing") {
    CHECK(parse_alpha("golden") == QuadraticIrrational::golden());
    CHECK(parse_alpha("golden-1") == QuadraticIrrational(-1, 1, 2, 5));
    CHECK(parse_alpha("1/1/2/5") == QuadraticIrrational::golden());
    CHECK_THROWS_AS(parse_alpha("nonsense"), std::domain_error);
    CHECK_THROWS_AS(parse_alpha("0/1/1/8"), std::domain_error);  // 8 = 2^2 * 2 not squarefree
    CHECK_THROWS_AS(parse_alpha("0/1/1/4"), std::domain_error);  // perfect square
}

TEST_CASE("gen writes reproducible outputs") {
    TempDir dir;
    std::string out1 = dir.file("a");
    std::string out2 = dir.file("b");
    CHECK(cli({"gen", "--kind", "hoc3", "--alpha", "golden", "--length", "256", "--out",
               out1}) == 0);
    CHECK(cli({"gen", "--kind", "hoc3", "--alpha", "golden", "--length", "256", "--out",
               out2}) == 0);
    CHECK(fs::exists(out1 + ".csv"));
    CHECK(fs::exists(out1 + ".bin"));
    CHECK(fs::exists(out1 + ".manifest.json"));
    CHECK(sha256_file(out1 + ".csv") == sha256_file(out2 + ".csv"));
    CHECK(sha256_file(out1 + ".bin") == sha256_file(out2 + ".bin"));

    // manifest digests agree with the files on disk
    nlohmann::json manifest = load_json(out1 + ".manifest.json");
    for (const auto& rec : manifest.at("outputs"))
        CHECK(sha256_file(rec.at("path").get<std::string>()) ==
              rec.at("sha256").get<std::string>());
}

TEST_CASE("gen usage errors exit with code 1") {
    TempDir dir;
    CHECK(cli({"gen", "--kind", "hoc3", "--alpha", "golden", "--length", "0", "--out",
               dir.file("x")}) == 1);
    CHECK(cli({"gen", "--kind", "hoc3", "--alpha", "unknown_preset", "--length", "8",
               "--out", dir.file("x")}) == 1);
    CHECK(cli({"gen", "--kind", "hoc3", "--alpha", "0/1/1/12", "--length", "8", "--out",
               dir.file("x")}) == 1); // 12 = 4*3 not squarefree
    CHECK(cli({"gen", "--kind", "prbs", "--degree", "4", "--taps", "4", "--length", "8",
               "--out", dir.file("x")}) == 1); // x^4 + x^2 + 1 not primitive
    CHECK(cli({"unknown-subcommand"}) == 1);
    CHECK(cli({"gen"}) == 1); // missing required --length
}

TEST_CASE("acf combined table") {
    TempDir dir;
    std::string out = dir.file("curves");
    CHECK(cli({"acf", "--spec", "hoc3:golden", "--spec", "sine:golden", "--spec", "prbs:15",
               "--lengths", "64,128,256", "--out", out}) == 0);
    std::ifstream f(out + "_combined.csv");
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "n,hoc3_golden,sine_golden,prbs_15");
    int rows = 0;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    CHECK(fs::exists(out + "_0.csv"));
    CHECK(fs::exists(out + "_2.csv"));
    CHECK(fs::exists(out + ".json"));

    CHECK(cli({"acf", "--spec", "warbler:golden", "--lengths", "64", "--out",
               dir.file("bad")}) == 1);
    // single length: one row, no fit
    CHECK(cli({"acf", "--spec", "hoc3:golden", "--lengths", "64", "--out",
               dir.file("one")}) == 0);
}

TEST_CASE("rip report command") {
    TempDir dir;
    std::string out = dir.file("rip");
    CHECK(cli({"rip", "--spec", "hoc3:golden", "--kind", "fat", "--n", "128", "--p", "128",
               "--subsets", "4", "--seed", "5", "--out", out}) == 0);
    nlohmann::json j = load_json(out + ".json");
    CHECK(j.at("q_certified").get<std::size_t>() >= 1);
    CHECK(j.at("sampled").size() == 4);

    // constant spec gives q = 1; --subsets 0 is a bound-only run
    CHECK(cli({"rip", "--spec", "constant", "--kind", "fat", "--n", "64", "--p", "32",
               "--subsets", "0", "--out", dir.file("ones")}) == 0);
    nlohmann::json ones = load_json(dir.file("ones") + ".json");
    CHECK(ones.at("q_certified").get<std::size_t>() == 1);
    CHECK(ones.at("sampled").empty());
}

TEST_CASE("cond command with config file and replay") {
    TempDir dir;
    std::string cfg = dir.file("exp.cfg");
    {
        std::ofstream f(cfg);
        f << "# desk-scale smoke config\n";
        f << "n_values = 20,40\n";
        f << "p_rule = 2n\n";
        f << "q_rule = n/5\n";
        f << "trials = 6\n";
        f << "seed = 99\n";
        f << "spec = hoc3:golden\n";
        f << "mode = real\n";
    }
    std::string out = dir.file("cond");
    CHECK(cli({"cond", "--config", cfg, "--out", out}) == 0);
    REQUIRE(fs::exists(out + ".csv"));
    REQUIRE(fs::exists(out + "_summary.json"));
    nlohmann::json summary = load_json(out + "_summary.json");
    CHECK(summary.at("per_n").size() == 2);

    // identical rerun is byte-identical
    std::string out2 = dir.file("cond2");
    CHECK(cli({"cond", "--config", cfg, "--out", out2}) == 0);
    CHECK(sha256_file(out + ".csv") == sha256_file(out2 + ".csv"));

    // replay from the manifest reproduces bytes
    CHECK(cli({"replay", out + ".manifest.json", "--out", dir.file("cond_replay")}) == 0);

    // trials = 0 is a config error
    CHECK(cli({"cond", "--n-values", "20", "--trials", "0", "--out", dir.file("zero")}) == 1);
}

TEST_CASE("numtheory subcommands") {
    TempDir dir;
    std::string out = dir.file("nt");
    CHECK(cli({"numtheory", "convergents", "--alpha", "golden", "--k", "10", "--out", out}) ==
          0);
    nlohmann::json j = load_json(out + ".json");
    REQUIRE(j.at("convergents").size() == 11);
    // Fibonacci denominators
    std::vector<std::string> fib{"1", "1", "2", "3", "5", "8", "13", "21", "34", "55", "89"};
    for (std::size_t k = 0; k <= 10; ++k)
        CHECK(j.at("convergents")[k].at("B").get<std::string>() == fib[k]);

    CHECK(cli({"numtheory", "ostrowski", "--m", "10", "--beta", "golden-1", "--out",
               dir.file("ost")}) == 0);
    nlohmann::json ost = load_json(dir.file("ost") + ".json");
    CHECK(ost.at("terms").size() == 2); // 10 = 8 + 2

    CHECK(cli({"numtheory", "types", "--n", "1000", "--beta", "golden-1", "--out",
               dir.file("types")}) == 0);
    CHECK(fs::exists(dir.file("types") + "_histogram.csv"));

    CHECK(cli({"numtheory", "khinchin", "--alpha", "golden", "--n", "100", "--out",
               dir.file("kh")}) == 0);
    nlohmann::json kh = load_json(dir.file("kh") + ".json");
    CHECK(kh.at("c_min").get<double>() == doctest::Approx(0.38196601).epsilon(1e-6));

    CHECK(cli({"numtheory", "phi", "--alpha", "golden", "--n", "128", "--tau-from", "1",
               "--tau-to", "8", "--out", dir.file("phi")}) == 0);
    CHECK(fs::exists(dir.file("phi") + "_phi.csv"));
}

TEST_CASE("identify command") {
    TempDir dir;
    std::string out = dir.file("idf");
    CHECK(cli({"identify", "--n", "100", "--p", "200", "--k", "4", "--sigma", "0",
               "--trials", "5", "--seed", "11", "--out", out}) == 0);
    nlohmann::json j = load_json(out + ".json");
    CHECK(j.at("exact_support_fraction").get<double>() == 1.0);
    CHECK(j.at("median_rel_coef_error").get<double>() <= 1e-8);

    // heavy noise: must run to completion and report a (large) error
    CHECK(cli({"identify", "--n", "64", "--p", "128", "--k", "3", "--sigma", "50",
               "--trials", "3", "--seed", "11", "--out", dir.file("noisy")}) == 0);

    // k > n is a usage error
    CHECK(cli({"identify", "--n", "16", "--p", "32", "--k", "17", "--out",
               dir.file("bad")}) == 1);

    // rank-deficient design surfaces as a numerical failure (exit 2): with
    // noise the residual stays nonzero, so OMP reaches a second identical
    // column and the active-set solve meets a zero pivot
    CHECK(cli({"identify", "--n", "20", "--p", "8", "--k", "2", "--spec", "constant",
               "--sigma", "0.1", "--trials", "1", "--out", dir.file("ill")}) == 2);
}

TEST_CASE("gen replay reproduces byte-identical outputs") {
    TempDir dir;
    std::string out = dir.file("orig");
    REQUIRE(cli({"gen", "--kind", "sine", "--alpha", "sqrt2", "--length", "128", "--out",
                 out}) == 0);
    CHECK(cli({"replay", out + ".manifest.json", "--out", dir.file("redo")}) == 0);
    CHECK(sha256_file(out + ".csv") == sha256_file(dir.file("redo") + ".csv"));
    CHECK(sha256_file(out + ".bin") == sha256_file(dir.file("redo") + ".bin"));
}
