#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tvpolar/cli.hpp"
#include "tvpolar/io.hpp"

using namespace tvpolar;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const std::atomic<bool>* cancel = nullptr) {
  std::ostringstream out, err;
  Run r;
  r.code = cli_dispatch(args, out, err, cancel);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("tvpolar_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("project prints the argmin face") {
    const Run r = run({"project", tvtest::fixture("hexagon.txt"), "2", "2"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "value 2; face: (1,1) (2,0); unique: false\n");
    CHECK(run({"project", tvtest::fixture("hexagon.txt"), "2"}).code == kExitBadInput);
  }

  TEST_CASE("check-uniqueness exit codes") {
    const Run hex = run({"check-uniqueness", tvtest::fixture("hexagon.txt")});
    CHECK(hex.code == kExitNotUnique);
    CHECK(hex.out.find("x1=(0.5,0.5) [x2,x3]=[(0.5,0.5),(0,1)]") != std::string::npos);
    CHECK(run({"check-uniqueness", tvtest::fixture("l1ball.txt")}).code == kExitOk);
    CHECK(run({"check-uniqueness", tvtest::fixture("square.txt")}).code == kExitOk);
  }

  TEST_CASE("witness") {
    const Run r = run({"witness", tvtest::fixture("hexagon.txt")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("x0 (2,2)\n") != std::string::npos);
    CHECK(r.out.find("unique: false") != std::string::npos);
    const Run e = run({"witness", tvtest::fixture("l1ball.txt")});
    CHECK(e.code == kExitOk);
    CHECK(e.out.find("W-set empty") != std::string::npos);
  }

  TEST_CASE("malformed input names the file and line") {
    const fs::path d = scratch_dir("bad");
    const fs::path bad = d / "bad.txt";
    std::ofstream(bad) << "2\n1 2\n3 x\n";
    const Run r = run({"decompose", bad.string()});
    CHECK(r.code == kExitBadInput);
    CHECK(r.err.find(bad.string() + ":3:") != std::string::npos);
    const Run missing = run({"project", (d / "none.txt").string(), "1", "1"});
    CHECK(missing.code == kExitBadInput);
    CHECK(missing.err.find("none.txt") != std::string::npos);
    CHECK(run({"no-such-command"}).code == kExitBadInput);
    CHECK(run({}).code == kExitBadInput);
  }

  TEST_CASE("decompose writes u and v with f = u + v") {
    const fs::path d = scratch_dir("decompose");
    const fs::path in = d / "f.txt";
    write_matrix_file(in, GridImage(2, {-3, -1, 1, 3}));
    const Run r = run({"decompose", in.string(), "--iters", "3000", "--u-out", (d / "u.txt").string(), "--v-out",
                       (d / "v.txt").string()});
    REQUIRE(r.code == kExitOk);
    const GridImage u = read_matrix_file(d / "u.txt");
    const GridImage v = read_matrix_file(d / "v.txt");
    CHECK(norm(u + v - GridImage(2, {-3, -1, 1, 3})) <= 1e-12);
    CHECK(has_zero_mean(v));
    const Run again = run({"decompose", in.string(), "--iters", "3000"});
    CHECK(again.code == kExitOk);
    CHECK(fs::exists(in.string() + ".u.txt"));
    CHECK(fs::exists(in.string() + ".v.txt"));
  }

  TEST_CASE("experiment CSV is reproducible") {
    const fs::path d = scratch_dir("experiment");
    const std::vector<std::string> base{"experiment", "--n", "3", "--starts", "3", "--iters", "200",
                                        "--experiments", "2", "--no-timing", "--out"};
    auto a = base;
    a.push_back((d / "a.csv").string());
    auto b = base;
    b.push_back((d / "b.csv").string());
    b.push_back("--threads");
    b.push_back("2");
    REQUIRE(run(a).code == kExitOk);
    REQUIRE(run(b).code == kExitOk);
    const std::string csv = slurp(d / "a.csv");
    CHECK(csv == slurp(d / "b.csv"));
    CHECK(csv.rfind("experiment,diameter,best_value,wall_ms\n", 0) == 0);
    CHECK(run({"experiment", "--starts", "1"}).code == kExitBadInput);
  }

  TEST_CASE("interrupted experiment") {
    const std::atomic<bool> cancel{true};
    const Run r = run({"experiment", "--n", "3", "--starts", "2", "--iters", "50", "--experiments", "3",
                       "--no-timing"},
                      &cancel);
    CHECK(r.code == kExitInterrupted);
    CHECK(r.out.rfind("experiment,diameter,best_value,wall_ms\n", 0) == 0);
  }

  TEST_CASE("oracle subcommands") {
    const Run p = run({"oracle", "project", tvtest::fixture("hexagon.txt"), "2", "2", "--points", "101"});
    CHECK(p.code == kExitOk);
    CHECK(p.out.find("exact value 2; face: (1,1) (2,0); unique: false") != std::string::npos);
    const Run dn = run({"oracle", "dual-norm", tvtest::fixture("f0_2x2.txt"), "--directions", "200"});
    CHECK(dn.code == kExitOk);
    CHECK(dn.out.rfind("dual norm in [", 0) == 0);
    const Run tvr = run({"oracle", "tv", tvtest::fixture("f0_2x2.txt"), "--points", "11", "--rounds", "0",
                         "--directions", "200"});
    CHECK(tvr.code == kExitOk);
    CHECK(tvr.out.rfind("oracle value ", 0) == 0);
  }

  TEST_CASE("help") {
    const Run r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("check-uniqueness") != std::string::npos);
  }
}
