#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "henon/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = henon::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("henon_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

// keys appear in the given order
bool ordered_keys(const std::string& json, const std::vector<std::string>& keys) {
  std::size_t pos = 0;
  for (const auto& k : keys) {
    const std::size_t at = json.find("\"" + k + "\"", pos);
    if (at == std::string::npos) return false;
    pos = at;
  }
  return true;
}

}  // namespace

TEST_CASE("radial subcommand") {
  const fs::path d = fresh_dir("radial");
  const Run r = run({"radial", "--N", "3", "--alpha", "0", "--p", "3", "--out", d.string()});
  CHECK(r.code == 0);
  CHECK(first_line(d / "radial.csv") == "r,u,du");
  const std::string j = slurp(d / "radial.json");
  CHECK(ordered_keys(j, {"N", "alpha", "p", "N_alpha", "R0", "central_value", "residual_sup"}));
  CHECK(j.find("6.89684861") != std::string::npos);
}

TEST_CASE("exit codes") {
  SUBCASE("supercritical is an invalid configuration") {
    const Run r = run({"radial", "--N", "3", "--alpha", "1", "--p", "7", "--out", fresh_dir("sup").string()});
    CHECK(r.code == 4);
    CHECK(r.err.find("supercritical") != std::string::npos);
  }
  SUBCASE("unknown flag") {
    CHECK(run({"radial", "--bogus", "1"}).code == 4);
  }
  SUBCASE("missing subcommand") {
    CHECK(run({}).code == 4);
  }
  SUBCASE("unwritable output") {
    CHECK(run({"radial", "--out", "/proc/henon_no_such_dir/x"}).code == 4);
  }
  SUBCASE("degenerate exponent") {
    const Run r = run({"perturbed", "--N", "3", "--alpha", "2.05", "--p", "5.0890664639", "--map",
                       "bump(0,0,1)", "--kmax", "8", "--rnodes", "256", "--out",
                       fresh_dir("degenerate").string()});
    CHECK(r.code == 2);
  }
  SUBCASE("no convergence") {
    const Run r = run({"perturbed", "--t", "1e-2", "--maxiter", "2", "--kmax", "8", "--rnodes", "128",
                       "--out", fresh_dir("noconv").string()});
    CHECK(r.code == 3);
  }
  SUBCASE("fast decay below the Sobolev exponent") {
    CHECK(run({"exterior", "--N", "3", "--p", "5", "--out", fresh_dir("ext5").string()}).code == 4);
  }
}

TEST_CASE("spectral subcommands write the declared headers") {
  const fs::path d = fresh_dir("spectral");
  CHECK(run({"nu", "--N", "3", "--alpha", "2.05", "--count", "4", "--pmin", "5.05", "--pmax", "5.15",
             "--out", d.string()})
            .code == 0);
  CHECK(first_line(d / "nu.csv") == "p,nu,nu_direct,gap");
  CHECK(run({"pk", "--N", "3", "--alpha", "2.05", "--count", "6", "--pmin", "5.0", "--pmax", "5.25",
             "--out", d.string()})
            .code == 0);
  CHECK(first_line(d / "pk.csv") == "k,lambda_k,p_k,bracket_lo,bracket_hi,mode_shot_residual");
  const std::string pk = slurp(d / "pk.csv");
  CHECK(pk.find("\n2,6,5.08906646") != std::string::npos);
  CHECK(run({"check-degeneracy", "--N", "3", "--alpha", "1", "--p", "5", "--out", d.string()}).code == 0);
  CHECK(first_line(d / "modes.csv") == "k,lambda_k,boundary_value");
  CHECK(run({"check-degeneracy", "--N", "3", "--alpha", "2.05", "--p", "5.0890664639", "--out", d.string()})
            .code == 2);
}

TEST_CASE("perturbed subcommand") {
  const fs::path d = fresh_dir("perturbed");
  const Run r = run({"perturbed", "--kmax", "8", "--rnodes", "256", "--out", d.string()});
  CHECK(r.code == 0);
  CHECK(first_line(d / "solution.csv") == "r,theta,v");
  CHECK(first_line(d / "convergence.csv") == "n,increment_norm");
  const std::string j = slurp(d / "report.json");
  CHECK(ordered_keys(j, {"kappa", "iters", "residual_sup", "positivity_margin"}));
  // exactly four keys
  std::size_t colons = 0;
  for (char c : j) colons += c == ':';
  CHECK(colons == 4);
}

TEST_CASE("analysis subcommands") {
  const fs::path d = fresh_dir("analysis");
  CHECK(run({"exterior", "--N", "3", "--p", "6", "--out", d.string()}).code == 0);
  CHECK(first_line(d / "exterior.csv") == "s,w,dw");
  CHECK(run({"pohozaev", "--N", "3", "--alpha", "2", "--p", "4", "--out", d.string()}).code == 0);
  CHECK(fs::exists(d / "pohozaev.json"));
  CHECK(run({"certify-nonexistence", "--N", "3", "--alpha", "1", "--p", "6", "--shift", "100", "--out",
             d.string()})
            .code == 0);
  CHECK(slurp(d / "certificate.json").find("CERTIFIED-NONEXISTENCE") != std::string::npos);
  CHECK(run({"certify-nonexistence", "--N", "3", "--alpha", "4", "--p", "6", "--shift", "1.01", "--out",
             d.string()})
            .code == 0);
  CHECK(slurp(d / "certificate.json").find("INCONCLUSIVE") != std::string::npos);
}

TEST_CASE("config file and flag precedence") {
  const fs::path d = fresh_dir("config");
  fs::create_directories(d);
  const fs::path cfg = d / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# comment\ncommand = radial\nN=3\nalpha = 0\n\np=2\nnodes=101\n";
  }
  CHECK(run({"--config", cfg.string(), "--out", (d / "a").string()}).code == 0);
  CHECK(slurp(d / "a" / "radial.json").find("\"p\": 2") != std::string::npos);
  CHECK(run({"radial", "--p", "3", "--config", cfg.string(), "--out", (d / "b").string()}).code == 0);
  CHECK(slurp(d / "b" / "radial.json").find("\"p\": 3") != std::string::npos);

  const auto merged = henon::cli::merge_config({"radial", "--p", "3"}, cfg.string());
  CHECK(std::count(merged.begin(), merged.end(), "--p") == 1);
  CHECK(std::count(merged.begin(), merged.end(), "--nodes") == 1);
  CHECK(run({"radial", "--config", (d / "missing.cfg").string()}).code == 4);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  const std::vector<std::string> base{"nu", "--N", "3", "--alpha", "1", "--count", "5"};
  auto with = [&](const fs::path& d, const std::string& w) {
    auto v = base;
    v.insert(v.end(), {"--workers", w, "--out", d.string()});
    return v;
  };
  CHECK(run(with(a, "1")).code == 0);
  CHECK(run(with(b, "3")).code == 0);
  CHECK(slurp(a / "nu.csv") == slurp(b / "nu.csv"));
  CHECK(slurp(a / "nu.json") == slurp(b / "nu.json"));
  CHECK(run({"perturbed", "--kmax", "8", "--rnodes", "128", "--out", (a / "p").string()}).code == 0);
  CHECK(run({"perturbed", "--kmax", "8", "--rnodes", "128", "--out", (b / "p").string()}).code == 0);
  CHECK(slurp(a / "p" / "solution.csv") == slurp(b / "p" / "solution.csv"));
  CHECK(slurp(a / "p" / "report.json") == slurp(b / "p" / "report.json"));
}

TEST_CASE("help documents every subcommand and flag") {
  const Run r = run({"--help-all"});
  CHECK(r.code == 0);
  for (const char* s : {"radial", "nu", "pk", "check-degeneracy", "perturbed", "exterior", "pohozaev",
                        "certify-nonexistence", "--workers", "--out", "--config", "--norm-limit",
                        "--eigen-nodes", "--direction", "HENON_WORKERS"}) {
    CHECK(r.out.find(s) != std::string::npos);
  }
}

TEST_CASE("the installed binary reports exit codes") {
  const std::string bin = HENON_CLI_PATH;
  const std::string dev_null = " >/dev/null 2>&1";
  auto code = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + dev_null).c_str());
    return WEXITSTATUS(s);
  };
  CHECK(code("radial --N 3 --alpha 0 --p 3 --out " + fresh_dir("bin").string()) == 0);
  CHECK(code("radial --N 3 --alpha 1 --p 7") == 4);
  CHECK(code("--help") == 0);
}
