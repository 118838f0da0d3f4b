#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wavelag/io.hpp"
#include "wavelag/simulate.hpp"

using namespace wavelag;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("wavelag_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run cli(const TempDir& tmp, const std::string& args) {
    const auto out = tmp.path / "stdout.txt", err = tmp.path / "stderr.txt";
    const std::string cmd = std::string(WAVELAG_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string p(const fs::path& path) { return "\"" + path.string() + "\""; }

void write_phi0_kernel(const fs::path& path, std::size_t n, double T) {
    Series s{TimeGrid(n, T).points(), {}};
    for (double t : s.t) s.values.push_back(std::exp(-t / 2.0));
    write_series(path, s);
}

}  // namespace

TEST_CASE("simulate writes cubes, kernel and manifest") {
    TempDir tmp;
    const auto r = cli(tmp, "simulate --function f2 --snr 1e9 --seed 4 --out " + p(tmp.path / "a"));
    REQUIRE(r.code == 0);
    for (const char* f : {"f.json", "f.bin", "q.json", "q.bin", "Y.json", "Y.bin", "g.csv", "manifest.json"})
        CHECK(fs::exists(tmp.path / "a" / f));
    const auto q = read_cube(tmp.path / "a" / "q.json");
    const auto Y = read_cube(tmp.path / "a" / "Y.json");
    CHECK(q.n() == 32);
    CHECK(q.n1() == 32);
    CHECK(relative_error(Y, q) < 1e-6);
    const auto m = nlohmann::json::parse(slurp(tmp.path / "a" / "manifest.json"));
    CHECK(m["function"] == "f2");
    CHECK(m["seed"] == 4);
    CHECK(m["T"] == 5.0);
}

TEST_CASE("simulate is deterministic under a seed") {
    TempDir tmp;
    REQUIRE(cli(tmp, "simulate --function f3 --snr 3 --seed 9 --out " + p(tmp.path / "a")).code == 0);
    REQUIRE(cli(tmp, "simulate --function f3 --snr 3 --seed 9 --out " + p(tmp.path / "b")).code == 0);
    REQUIRE(cli(tmp, "simulate --function f3 --snr 3 --seed 10 --out " + p(tmp.path / "c")).code == 0);
    for (const char* f : {"Y.bin", "q.bin", "f.bin", "manifest.json", "g.csv"})
        CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
    CHECK(slurp(tmp.path / "a" / "Y.bin") != slurp(tmp.path / "c" / "Y.bin"));
}

TEST_CASE("usage errors exit with 1") {
    TempDir tmp;
    const auto r = cli(tmp, "simulate --function f9 --out " + p(tmp.path / "x"));
    CHECK(r.code == 1);
    CHECK(r.err.find("f9") != std::string::npos);
    CHECK(cli(tmp, "simulate --function f1").code == 1);
    CHECK(cli(tmp, "frobnicate").code == 1);
    CHECK(cli(tmp, "").code == 1);
    CHECK(cli(tmp, "simulate --function f1 --snr -3 --out " + p(tmp.path / "x")).code == 1);
    CHECK(cli(tmp, "deconvolve --bogus").code == 1);
    CHECK(cli(tmp, "--help").code == 0);
}

TEST_CASE("deconvolve recovers noiseless long-grid data") {
    TempDir tmp;
    REQUIRE(cli(tmp, "simulate --function f2 --snr inf --n 1024 --T 40 --out " + p(tmp.path / "s")).code == 0);
    const auto r = cli(tmp, "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel " +
                                p(tmp.path / "s" / "g.csv") + " --M 8 --no-threshold --out " + p(tmp.path / "fhat.json"));
    REQUIRE(r.code == 0);
    const auto fhat = read_cube(tmp.path / "fhat.json");
    const auto f = read_cube(tmp.path / "s" / "f.json");
    CHECK(relative_error(fhat, f) < 1e-3);
    const auto d = nlohmann::json::parse(slurp(tmp.path / "fhat.diagnostics.json"));
    CHECK(d["M"] == 8);
    CHECK(d["keep_counts"].size() == 8);
    for (const char* key : {"eps_hat", "sigma_hat", "J1", "J2"}) CHECK(d.contains(key));
}

TEST_CASE("deconvolve with eps = 1 warns about zero thresholds and proceeds") {
    TempDir tmp;
    REQUIRE(cli(tmp, "simulate --function f1 --snr 5 --out " + p(tmp.path / "s")).code == 0);
    const auto r = cli(tmp, "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel " +
                                p(tmp.path / "s" / "g.csv") + " --M 8 --eps 1.0 --out " + p(tmp.path / "e.json") +
                                " --diagnostics " + p(tmp.path / "diag.json"));
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    const auto d = nlohmann::json::parse(slurp(tmp.path / "diag.json"));
    for (const auto& v : d["thresholds"]) CHECK(v.get<double>() == 0.0);
    CHECK(d["warnings"].size() == 1);
}

TEST_CASE("deconvolve options") {
    TempDir tmp;
    REQUIRE(cli(tmp, "simulate --function f4 --snr 5 --out " + p(tmp.path / "s")).code == 0);
    const std::string base = "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel " + p(tmp.path / "s" / "g.csv");
    CHECK(cli(tmp, base + " --out " + p(tmp.path / "a.json")).code == 0);
    CHECK(cli(tmp, base + " --M 6 --J1 3 --J2 auto --wavelet db4 --sigma-method sd --nu 2 --smooth-kernel 12 --out " +
                       p(tmp.path / "b.json"))
              .code == 0);
    const auto d = nlohmann::json::parse(slurp(tmp.path / "b.diagnostics.json"));
    CHECK(d["M"] == 6);
    CHECK(d["J1"] == 3);
    CHECK(cli(tmp, base + " --wavelet sym4 --out " + p(tmp.path / "c.json")).code == 1);
    CHECK(cli(tmp, base + " --M many --out " + p(tmp.path / "c.json")).code == 1);
    CHECK(cli(tmp, base + " --J1 9 --M 8 --out " + p(tmp.path / "c.json")).code == 1);
    CHECK(cli(tmp, "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --out " + p(tmp.path / "c.json")).code == 1);

    // Kernel on another grid.
    write_phi0_kernel(tmp.path / "k64.csv", 64, 5.0);
    CHECK(cli(tmp, "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel " + p(tmp.path / "k64.csv") +
                       " --out " + p(tmp.path / "c.json"))
              .code == 1);
}

TEST_CASE("deconvolve symmetrizes non-dyadic input") {
    TempDir tmp;
    REQUIRE(cli(tmp, "simulate --function f2 --snr 7 --n1 24 --n2 24 --out " + p(tmp.path / "s")).code == 0);
    const std::string base = "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel " +
                             p(tmp.path / "s" / "g.csv") + " --M 8 --out " + p(tmp.path / "o.json");
    CHECK(cli(tmp, base).code == 1);
    REQUIRE(cli(tmp, base + " --symmetrize").code == 0);
    const auto o = read_cube(tmp.path / "o.json");
    CHECK(o.n1() == 24);
    CHECK(o.n2() == 24);
    const auto d = nlohmann::json::parse(slurp(tmp.path / "o.diagnostics.json"));
    CHECK(d["work_n1"] == 32);
    CHECK(d["work_n2"] == 32);
}

TEST_CASE("file errors exit with 2") {
    TempDir tmp;
    write_phi0_kernel(tmp.path / "g.csv", 32, 5.0);
    CHECK(cli(tmp, "deconvolve --input " + p(tmp.path / "none.json") + " --kernel " + p(tmp.path / "g.csv") +
                       " --out " + p(tmp.path / "o.json"))
              .code == 2);
    REQUIRE(cli(tmp, "simulate --function f1 --out " + p(tmp.path / "s")).code == 0);
    fs::resize_file(tmp.path / "s" / "Y.bin", 100);
    const auto r = cli(tmp, "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel " + p(tmp.path / "g.csv") +
                                " --out " + p(tmp.path / "o.json"));
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(tmp.path / "o.json"));
    CHECK(cli(tmp, "norms --kernel " + p(tmp.path / "missing.csv")).code == 2);
}

TEST_CASE("norms") {
    TempDir tmp;
    std::ofstream(tmp.path / "phi0.csv") << "l,value\n0,1\n";
    const auto r = cli(tmp, "norms --kernel-coeffs " + p(tmp.path / "phi0.csv") + " --max-m 256 --out " +
                                p(tmp.path / "n.csv"));
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("slope");
    REQUIRE(pos != std::string::npos);
    const double slope = std::stod(r.out.substr(r.out.find(':', pos) + 1));
    CHECK(std::abs(slope - 2.0) <= 0.3);
    std::istringstream rows(slurp(tmp.path / "n.csv"));
    std::string line;
    int count = 0;
    while (std::getline(rows, line)) ++count;
    CHECK(count == 257);

    const auto one = cli(tmp, "norms --kernel-coeffs " + p(tmp.path / "phi0.csv") + " --max-m 1");
    REQUIRE(one.code == 0);
    CHECK(one.out == "m,spectral,frobenius\n1,1,1\n");

    std::ofstream(tmp.path / "sing.csv") << "l,value\n0,0\n1,0.5\n";
    CHECK(cli(tmp, "norms --kernel-coeffs " + p(tmp.path / "sing.csv") + " --max-m 4").code == 3);

    write_phi0_kernel(tmp.path / "g.csv", 512, 40.0);
    const auto s = cli(tmp, "norms --kernel " + p(tmp.path / "g.csv") + " --max-m 16");
    CHECK(s.code == 0);
    CHECK(s.err.find("slope") != std::string::npos);
}

TEST_CASE("singular kernel in deconvolve exits with 3") {
    TempDir tmp;
    REQUIRE(cli(tmp, "simulate --function f1 --out " + p(tmp.path / "s")).code == 0);
    std::ofstream(tmp.path / "sing.csv") << "l,value\n0,0\n1,1\n2,0\n3,0\n4,0\n5,0\n6,0\n7,0\n";
    CHECK(cli(tmp, "deconvolve --input " + p(tmp.path / "s" / "Y.json") + " --kernel-coeffs " + p(tmp.path / "sing.csv") +
                       " --M 8 --out " + p(tmp.path / "o.json"))
              .code == 3);
}

TEST_CASE("smooth") {
    TempDir tmp;
    Series s{TimeGrid(400, 30.0).points(), {}};
    for (double t : s.t) s.values.push_back(std::exp(-t / 2.0) * (1.0 - t) + 0.05 * std::sin(13.0 * t));
    write_series(tmp.path / "in.csv", s);
    REQUIRE(cli(tmp, "smooth --kernel " + p(tmp.path / "in.csv") + " --M 4 --out " + p(tmp.path / "out.csv") +
                     " --coeffs-out " + p(tmp.path / "c.csv"))
                .code == 0);
    const auto sm = read_series(tmp.path / "out.csv");
    CHECK(sm.t == s.t);
    const auto c = read_coeffs(tmp.path / "c.csv");
    CHECK(c.size() == 4);
    // exp(-t/2)(1 - t) = phi_1.
    CHECK(std::abs(c[1] - 1.0) < 0.02);
    CHECK(std::abs(c[0]) < 0.02);
}

TEST_CASE("bench-table1") {
    TempDir tmp;
    const auto r = cli(tmp, "bench-table1 --runs 2 --seed 3 --out " + p(tmp.path / "t.csv"));
    REQUIRE(r.code == 0);
    std::istringstream rows(slurp(tmp.path / "t.csv"));
    std::string header, line;
    std::getline(rows, header);
    CHECK(header == "function,snr,mean_delta,stderr,runs,seed,published_mean,published_stderr,ratio");
    int count = 0;
    while (std::getline(rows, line)) {
        ++count;
        CHECK(line.find(",2,3,0.") != std::string::npos);
    }
    CHECK(count == 12);
    CHECK(r.out.find("published") != std::string::npos);

    const auto again = cli(tmp, "bench-table1 --runs 2 --seed 3");
    CHECK(again.code == 0);
    CHECK(again.out == slurp(tmp.path / "t.csv"));
}

TEST_CASE("bench-table1 means are stable across seeds") {
    SimConfig sim;
    sim.runs = 20;
    auto est = table1_estimator_config(sim);
    sim.seed = 1;
    const auto a = run_table1(sim, est);
    sim.seed = 1000;
    const auto b = run_table1(sim, est);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double pooled = std::sqrt(a[i].stderr_ * a[i].stderr_ + b[i].stderr_ * b[i].stderr_);
        CHECK(std::abs(a[i].mean_delta - b[i].mean_delta) <= 3.0 * pooled);
    }
}
