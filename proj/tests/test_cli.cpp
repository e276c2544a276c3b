#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fermi/state.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "fermi_cli_test";

int run(const std::string& args) {
  const std::string command = std::string(FERMI_RDM_BINARY) + " " + args +
                              " > /dev/null 2> /dev/null";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("generated states load back") {
  fs::create_directories(kWorkDir);
  const fs::path state = kWorkDir / "state.json";

  CHECK(run("gen --family slater --n 3 --m 5 --out " + state.string()) == 0);
  const fermi::SlaterExpansion slater = fermi::load_state(state);
  CHECK(slater.particle_count() == 3);
  CHECK(slater.orbital_count() == 5);
  CHECK(slater.coefficients().size() == 1);

  CHECK(run("gen --family random --n 3 --m 6 --support 5 --seed 7 --out " +
            state.string()) == 0);
  const fermi::SlaterExpansion random = fermi::load_state(state);
  CHECK(random.coefficients().size() == 5);
  CHECK(random.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(run("gen --family yang --n 4 --m 8 --out " + state.string()) == 0);
  CHECK(fermi::load_state(state).coefficients().size() == 6);
}

TEST_CASE("spectrum report") {
  fs::create_directories(kWorkDir);
  const fs::path state = kWorkDir / "rdm_state.json";
  const fs::path report = kWorkDir / "rdm_report.json";
  REQUIRE(run("gen --family slater --n 3 --m 5 --out " + state.string()) == 0);
  CHECK(run("rdm --state " + state.string() + " --k 1 --out " +
            report.string()) == 0);
  const json doc = json::parse(slurp(report));
  CHECK(doc.at("k") == 1);
  CHECK(doc.at("trace").get<double>() == doctest::Approx(3.0));
  CHECK(doc.at("op_norm").get<double>() == doctest::Approx(1.0));
  CHECK(doc.at("eigenvalues").size() == 5);
}

TEST_CASE("identity and inequality verification") {
  fs::create_directories(kWorkDir);
  const fs::path state = kWorkDir / "verify_state.json";
  const fs::path out = kWorkDir / "verify_out.json";
  REQUIRE(run("gen --family random --n 4 --m 7 --support 8 --seed 3 --out " +
              state.string()) == 0);

  CHECK(run("verify-identity --state " + state.string() + " --k 2 --out " +
            out.string()) == 0);
  CHECK(json::parse(slurp(out)).at("pass").get<bool>());

  CHECK(run("verify-inequalities --state " + state.string() +
            " --t 1 --lemma odd --out " + out.string()) == 0);
  CHECK(run("verify-inequalities --state " + state.string() +
            " --t 2 --lemma even --tau 1.5 --out " + out.string()) == 0);
  CHECK(run("verify-inequalities --state " + state.string() +
            " --t 1 --lemma prop --out " + out.string()) == 0);
  CHECK(run("verify-inequalities --state " + state.string() +
            " --t 2 --lemma theorem --out " + out.string()) == 0);
  const json theorem = json::parse(slurp(out));
  CHECK(theorem.at("sound").get<bool>());
  CHECK(theorem.at("bound").get<double>() >=
        theorem.at("direct_hs_sq").get<double>() - 1e-8);
}

TEST_CASE("sweep output is deterministic") {
  fs::create_directories(kWorkDir);
  const fs::path a = kWorkDir / "sweep_a.csv";
  const fs::path b = kWorkDir / "sweep_b.csv";
  const std::string args =
      "sweep --k 2 --n-range 3:4 --m-offset 2 --support 6 --seed 5 --out ";
  CHECK(run(args + a.string()) == 0);
  CHECK(run(args + b.string()) == 0);
  const std::string first = slurp(a);
  CHECK(first == slurp(b));  // byte-identical reruns
  CHECK(first.rfind("n,m,k,hs_norm,op_norm,trace,S,S2,certified_bound,"
                    "realized_Ck\n", 0) == 0);
  int lines = 0;
  for (char c : first) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 3);
}

TEST_CASE("usage errors exit with status two") {
  CHECK(run("") == 2);
  CHECK(run("gen --family slater") == 2);                 // missing -n/-m
  CHECK(run("rdm --state /nonexistent.json --k 1") == 2); // unreadable input
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
}
