#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Workdir {
 public:
  Workdir() : dir_(fs::temp_directory_path() / ("gaborlab_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  const fs::path& path() const { return dir_; }
  std::string operator/(const std::string& name) const { return (dir_ / name).string(); }

  Run run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(GABORLAB_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("build box then frame-check") {
  Workdir w;
  const auto b = w.run("build box --a 0 --b 1 --out " + w / "box");
  REQUIRE(b.code == 0);
  CHECK(fs::exists(w / "box/atom.json"));
  CHECK(fs::exists(w / "box/manifest.txt"));
  const auto f = w.run("frame-check --atom " + w / "box/atom.json" + " --alpha 1 --beta 1 --out " + w / "fc");
  CHECK(f.code == 0);
  CHECK(f.out.find("A=1 B=1 frame=true") != std::string::npos);
  CHECK(slurp(w / "fc/periodization.csv").rfind("x,", 0) == 0);
  const auto bad = w.run("frame-check --atom " + w / "box/atom.json" + " --alpha 1 --beta 2 --out " + w / "fc2");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("NotPainlessEligible") != std::string::npos);
}

TEST_CASE("triangle frame bounds") {
  Workdir w;
  REQUIRE(w.run("build triangle --out " + w / "t").code == 0);
  const auto f = w.run("frame-check --atom " + w / "t/atom.json" + " --alpha 1 --beta 0.5 --out " + w / "fc");
  CHECK(f.code == 0);
  CHECK(f.out.find("A=0.25 B=0.5") != std::string::npos);
}

TEST_CASE("norm command") {
  Workdir w;
  REQUIRE(w.run("build sr-block --n 3 --out " + w / "f3").code == 0);
  const auto n = w.run("norm --atom " + w / "f3/atom.json" + " --method box --p 2 --out " + w / "n");
  CHECK(n.code == 0);
  CHECK(std::stod(n.out) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(slurp(w / "n/norm.csv").rfind("atom_id,method,p,q,window,value\n", 0) == 0);
  const auto p1 = w.run("norm --atom " + w / "f3/atom.json" + " --method box --p 1 --out " + w / "n1");
  CHECK(p1.code == 2);
  CHECK(p1.err.find("ParameterDomain") != std::string::npos);

  REQUIRE(w.run("build gaussian --sigma 1 --out " + w / "g").code == 0);
  const auto s = w.run("norm --atom " + w / "g/atom.json" + " --method stft --p 2 --q 2 --out " + w / "ns");
  CHECK(s.code == 0);
  CHECK(std::abs(std::stod(s.out) - 1.0) < 1e-6);
}

TEST_CASE("gp build and divergence profile") {
  Workdir w;
  REQUIRE(w.run("build gp --p 1.5 --blocks 8 --out " + w / "gp").code == 0);
  const auto d = w.run("diverge --atom " + w / "gp/atom.json" + " --p 1.5 --q 2 --L 1 --blocks 8 --out " + w / "d");
  CHECK(d.code == 0);
  const auto csv = slurp(w / "d/profile.csv");
  CHECK(csv.rfind("block,partial_sum_p,partial_sum_q_power,tail_bound_q\n", 0) == 0);
  CHECK(csv.find("\n8,4,") != std::string::npos);
}

TEST_CASE("parseval build") {
  Workdir w;
  REQUIRE(w.run("build box --a 0 --b 1 --out " + w / "h").code == 0);
  const auto ok = w.run("build parseval --beta 0.5 --inner " + w / "h/atom.json" +
                        " --scale 0.5 --delta 0.1 --out " + w / "pa");
  CHECK(ok.code == 0);
  const auto fc = w.run("frame-check --atom " + w / "pa/atom.json" + " --alpha 1 --beta 0.5 --out " + w / "fc");
  CHECK(fc.out.find("A=1 B=1") != std::string::npos);
  const auto bad = w.run("build parseval --beta 0.5 --inner " + w / "h/atom.json" + " --delta 0.1 --out " + w / "pb");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("PreconditionFailed") != std::string::npos);
}

TEST_CASE("corrupted atom file") {
  Workdir w;
  {
    std::ofstream f(w / "broken.json");
    f << R"({"format":"gaborlab-atom","version":1,"pieces":[{"type":"trig","a":0)";
  }
  for (const char* cmd : {"frame-check", "norm", "diverge", "probe"}) {
    const auto r = w.run(std::string(cmd) + " --atom " + w / "broken.json" + " --out " + w / "o");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
  CHECK(w.run("frame-check --atom " + w / "missing.json").code == 2);
}

TEST_CASE("bad flags exit with validation code") {
  Workdir w;
  CHECK(w.run("build nonsense --out " + w / "x").code == 2);
  CHECK(w.run("frame-check").code == 2);
  CHECK(w.run("--help").code == 0);
}

TEST_CASE("manifest and config file") {
  Workdir w;
  {
    std::ofstream f(w / "run.cfg");
    f << "# gp defaults\np = 1.25\nblocks = 5\n";
  }
  REQUIRE(w.run("build gp --config " + w / "run.cfg" + " --blocks 4 --seed 17 --out " + w / "gp").code == 0);
  const auto manifest = slurp(w / "gp/manifest.txt");
  CHECK(manifest.find("command = build") != std::string::npos);
  CHECK(manifest.find("seed = 17") != std::string::npos);
  CHECK(manifest.find("p = 1.25") != std::string::npos);
  CHECK(manifest.find("blocks = 4") != std::string::npos);
  const auto atom = nlohmann::json::parse(slurp(w / "gp/atom.json"));
  CHECK(atom["pieces"][0]["terms"].size() == 15);
}

TEST_CASE("identical runs produce identical outputs") {
  Workdir w;
  REQUIRE(w.run("build triangle --out " + w / "t").code == 0);
  const std::string args = "probe --atom " + w / "t/atom.json" + " --alpha 1 --beta 0.5 --trials 8 --seed 3 --out ";
  REQUIRE(w.run(args + w / "p1").code == 0);
  REQUIRE(w.run(args + w / "p2").code == 0);
  CHECK(slurp(w / "p1/probe.csv") == slurp(w / "p2/probe.csv"));
  CHECK(slurp(w / "p1/probe.csv").rfind("trial,permutation_seed,", 0) == 0);
}

TEST_CASE("accept with a module filter") {
  Workdir w;
  const auto r = w.run("accept --filter srlab --out " + w / "acc");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(w / "acc/accept.json"));
  CHECK(doc["passed"] == 5);
  CHECK(doc["failed"] == 0);
  for (const auto& c : doc["criteria"]) CHECK(c["module"] == "srlab");
  CHECK(w.run("accept --filter nothing --out " + w / "acc2").code != 0);
}

TEST_SUITE_END();
