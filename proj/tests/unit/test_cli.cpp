#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path scratch_root{TWOSPEC_SCRATCH};

// Fresh scratch directory per test case.
fs::path fresh(const std::string& name) {
    const fs::path dir = scratch_root / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const fs::path& dir, const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" TWOSPEC_CLI "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("spectrum on the zero pair lists n^4 pi^4") {
    const auto dir = fresh("spectrum");
    write(dir / "c.json", R"({"boundary": "dirichlet", "n_max": 5})");
    REQUIRE(run(dir, "spectrum --config c.json --out out") == 0);
    const std::string csv = read(dir / "out/spectrum.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "kind,n,eigenvalue,residual");
    const double pi4 = std::pow(std::numbers::pi, 4);
    for (int n = 1; n <= 5; ++n) {
        REQUIRE(std::getline(lines, line));
        char expected[64];
        std::snprintf(expected, sizeof expected, "dirichlet,%d,%.12g,", n, std::pow(n, 4) * pi4);
        CHECK(line.rfind(expected, 0) == 0);
    }
    CHECK(read(dir / "stdout.txt").find("spectrum:") == 0);
}

TEST_CASE("spectrum with both kinds reports degeneracy and eigenfunctions") {
    const auto dir = fresh("spectrum_both");
    write(dir / "c.json", R"({"p": -49.34802200544679, "n_max": 4, "eigenfunctions": true})");
    REQUIRE(run(dir, "spectrum --config c.json --out out") == 0);
    const std::string json = read(dir / "out/spectrum.json");
    CHECK(json.find("\"in_W\": false") != std::string::npos);
    CHECK(fs::exists(dir / "out/eigenfunctions_dirichlet.csv"));
    CHECK(read(dir / "out/eigenfunctions_dirichlet_neumann.csv").rfind("n,x,value,derivative\n", 0) == 0);
}

TEST_CASE("malformed JSON exits 2 and writes nothing") {
    const auto dir = fresh("malformed");
    write(dir / "bad.json", "{\"n_max\": ");
    CHECK(run(dir, "spectrum --config bad.json --out out") == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
    CHECK(run(dir, "spectrum --config missing.json --out out") == 2);
    write(dir / "extra.json", R"({"n_max": 3, "colour": "red"})");
    CHECK(run(dir, "spectrum --config extra.json --out out") == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("usage errors exit 1") {
    const auto dir = fresh("usage");
    CHECK(run(dir, "") == 1);
    CHECK(run(dir, "frobnicate") == 1);
    CHECK(run(dir, "verify") == 1);
    CHECK(run(dir, "verify --estimate zz") == 1);
    CHECK(run(dir, "spectrum --threads zero") == 1);
    CHECK(run(dir, "--help") == 0);
}

TEST_CASE("outputs are never overwritten without --force") {
    const auto dir = fresh("overwrite");
    REQUIRE(run(dir, "spectrum --out out") == 0);
    const auto before = read(dir / "out/spectrum.json");
    write(dir / "c.json", R"({"n_max": 3})");
    CHECK(run(dir, "spectrum --config c.json --out out") == 1);
    CHECK(read(dir / "out/spectrum.json") == before);
    CHECK(run(dir, "spectrum --config c.json --out out --force") == 0);
    CHECK(read(dir / "out/spectrum.json") != before);
}

TEST_CASE("degenerate-scan flags both exceptional constants") {
    const auto dir = fresh("scan");
    REQUIRE(run(dir, "degenerate-scan --a1-range -9 0 --steps 10 --pi2 --out out") == 0);
    const std::string out = read(dir / "stdout.txt");
    CHECK(out.find("-8.5 pi^2 (dirichlet_neumann)") != std::string::npos);
    CHECK(out.find("-5 pi^2 (dirichlet)") != std::string::npos);
    const std::string json = read(dir / "out/scan.json");
    CHECK(json.find("\"source\": \"exceptional-line\"") != std::string::npos);
    CHECK(run(dir, "degenerate-scan --a1-range 1 0 --steps 4 --out out2") == 2);
}

TEST_CASE("inverse from a synthetic problem, inline targets and a targets CSV") {
    const auto dir = fresh("inverse");
    write(dir / "syn.json", R"({"known_slot": "p", "synthetic": {"epsilon": 0.05, "n_spec": 16}})");
    REQUIRE(run(dir, "inverse --config syn.json --seed 4 --out a") == 0);
    CHECK(read(dir / "a/inverse.json").find("\"converged\": true") != std::string::npos);
    CHECK(read(dir / "a/inverse_coefficient.csv").rfind("x,estimate,truth\n", 0) == 0);

    // constant targets of (0, 0.3) at n = 1..6
    const double pi = std::numbers::pi;
    std::string lam = "[", mu = "[", csv = "n,lambda,mu\n";
    for (int n = 1; n <= 6; ++n) {
        const double l = std::pow(n * pi, 4) + 0.3, m = std::pow((n + 0.5) * pi, 4) + 0.3;
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s%.17g", n > 1 ? ", " : "", l);
        lam += buf;
        std::snprintf(buf, sizeof buf, "%s%.17g", n > 1 ? ", " : "", m);
        mu += buf;
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", n, l, m);
        csv += buf;
    }
    write(dir / "inline.json", R"({"known_slot": "p", "known": 0, "solver": {"basis_modes": 2},
        "targets": {"lambda": )" + lam + "], \"mu\": " + mu + "]}}");
    REQUIRE(run(dir, "inverse --config inline.json --out b") == 0);
    const std::string report = read(dir / "b/inverse.json");
    const auto at = report.find("\"constant\": ", report.find("\"estimate\""));
    REQUIRE(at != std::string::npos);
    CHECK(std::abs(std::strtod(report.c_str() + at + 12, nullptr) - 0.3) <= 1e-10);

    fs::create_directories(dir / "data");
    write(dir / "data/targets.csv", csv);
    write(dir / "data/fromcsv.json", R"({"solver": {"basis_modes": 2}, "targets": {"csv": "targets.csv"}})");
    REQUIRE(run(dir, "inverse --config data/fromcsv.json --out c") == 0);
    CHECK(read(dir / "c/inverse_coefficient.csv") == read(dir / "b/inverse_coefficient.csv"));
}

TEST_CASE("inverse exit codes: non-convergence 5, degeneracy 4, numeric 3") {
    const auto dir = fresh("inverse_codes");
    write(dir / "stall.json", R"({"synthetic": {"epsilon": 0.05}, "solver": {"max_iter": 0}})");
    CHECK(run(dir, "inverse --config stall.json --seed 1 --out a") == 5);
    CHECK(read(dir / "a/inverse.json").find("\"converged\": false") != std::string::npos);

    write(dir / "degenerate.json", R"({"anchor": [-49.34802200544679, 0], "synthetic": {"epsilon": 0.01}})");
    CHECK(run(dir, "inverse --config degenerate.json --out b") == 4);
    CHECK_FALSE(fs::exists(dir / "b"));

    write(dir / "huge.json", R"({"p": 1e308, "n_max": 3})");
    CHECK(run(dir, "spectrum --config huge.json --out c") == 3);
    CHECK_FALSE(fs::exists(dir / "c"));
}

TEST_CASE("verify writes one report per estimate") {
    const auto dir = fresh("verify");
    for (const char* id : {"a1", "a2", "b1", "b2", "eq1", "eq2", "sup", "loc", "form"}) {
        REQUIRE(run(dir, std::string("verify --estimate ") + id + " --out out") == 0);
        CHECK(fs::exists(dir / "out" / (std::string("verify_") + id + ".json")));
        CHECK(fs::exists(dir / "out" / (std::string("verify_") + id + ".csv")));
    }
    CHECK(read(dir / "out/verify_a1.json").rfind("[\n", 0) == 0);
    CHECK(read(dir / "out/verify_a1.csv").rfind("n,lhs,ratio\n", 0) == 0);
    write(dir / "three.json", R"({"pairs": [{}, {}, {}]})");
    CHECK(run(dir, "verify --estimate a1 --config three.json --out bad") == 2);
}

TEST_CASE("riesz-check and probe") {
    const auto dir = fresh("riesz_probe");
    write(dir / "r.json", R"({"draw": {"radius": 0.01, "modes": 2}, "n_max": 16})");
    REQUIRE(run(dir, "riesz-check --config r.json --seed 2 --out r") == 0);
    CHECK(read(dir / "r/riesz.json").find("\"passes_criterion\": true") != std::string::npos);
    CHECK(read(dir / "r/riesz_terms.csv").rfind("m,value_distance2,derivative_distance2\n", 0) == 0);
    REQUIRE(run(dir, "probe --trials 4 --seed 9 --out p") == 0);
    CHECK(read(dir / "p/probe.json").find("\"consistent\": true") != std::string::npos);
}

TEST_CASE("same config and seed give byte-identical reports at any thread count") {
    const auto dir = fresh("determinism");
    write(dir / "inv.json", R"({"known_slot": "q", "synthetic": {"epsilon": 0.05, "n_spec": 16}})");
    write(dir / "r.json", R"({"draw": {"radius": 0.01, "modes": 3}, "n_max": 24})");
    const std::pair<const char*, const char*> runs[] = {
        {"inverse --config inv.json --seed 17", "inverse.json"},
        {"riesz-check --config r.json --seed 17", "riesz.json"},
        {"probe --trials 6 --seed 17", "probe.json"},
        {"verify --estimate eq1", "verify_eq1.json"},
    };
    for (const auto& [args, file] : runs) {
        REQUIRE(run(dir, std::string(args) + " --threads 1 --out one") == 0);
        REQUIRE(run(dir, std::string(args) + " --threads 4 --out four") == 0);
        REQUIRE(run(dir, std::string(args) + " --out again") == 0);
        const auto a = read(dir / "one" / file);
        CHECK(!a.empty());
        CHECK(a == read(dir / "four" / file));
        CHECK(a == read(dir / "again" / file));
    }
}
