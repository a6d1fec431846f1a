#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("vpfp_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" VPFP_CLI "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("cli: exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("run --no-such-flag") == 2);
  CHECK(run("run --scenario landau --out " + scratch("bad1").string()) == 2);
  CHECK(run("run --nx 1 --out " + scratch("bad2").string()) == 2);
  CHECK(run("run --config /nonexistent.cfg") == 2);
  CHECK(run("run --order 3 --out " + scratch("bad3").string()) == 2);
}

TEST_CASE("cli: zero time step returns the initial state") {
  const fs::path dir = scratch("dt0");
  REQUIRE(run("run --nx 4 --nv 4 --rank 2 --dt 0 --solver full --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "done"));
  const std::string phase = slurp(dir / "phase.csv");
  // header + a single t = 0 snapshot of 16 cells
  CHECK(std::count(phase.begin(), phase.end(), '\n') == 17);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m.at("steps") == 0);
  CHECK(m.at("final_time") == 0.0);
}

TEST_CASE("cli: output directory from the environment") {
  const fs::path dir = scratch("env");
  REQUIRE(run("run --nx 4 --nv 4 --rank 2 --dt 0", "VPFP_OUT=" + dir.string()) == 0);
  CHECK(fs::exists(dir / "done"));
}

TEST_CASE("cli: a manifest fed back as config reproduces the outputs") {
  const fs::path a = scratch("rt_a");
  const fs::path b = scratch("rt_b");
  REQUIRE(run("run --nx 8 --nv 8 --rank 3 --dt 0.001 --t-final 0.003 --eps 0.5 --out " +
              a.string()) == 0);
  REQUIRE(run("run --config " + (a / "manifest.json").string() + " --out " + b.string()) == 0);
  for (const char* f : {"ap.csv", "fields.csv", "phase.csv", "pointwise_ap.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("cli: convergence and ap write their CSVs") {
  const fs::path c = scratch("conv");
  REQUIRE(run("convergence --nx 8 --nv 8 --rank 2 --levels 3 --out " + c.string()) == 0);
  const std::string conv = slurp(c / "convergence.csv");
  CHECK(conv.rfind("dt,error_l1\n", 0) == 0);
  CHECK(std::count(conv.begin(), conv.end(), '\n') == 3);

  const fs::path a = scratch("ap");
  REQUIRE(run("ap --nx 8 --nv 8 --rank 2 --t-final 0.01 --out " + a.string()) == 0);
  CHECK(slurp(a / "ap.csv").rfind("t,e_ap_global\n", 0) == 0);
}

TEST_CASE("cli: verify emits a JSON certificate") {
  const fs::path dir = scratch("verify");
  REQUIRE(run("verify --eps 1e-6 --nx 16 --nv 16 --out " + dir.string()) == 0);
  const auto cert = nlohmann::json::parse(slurp(dir / "certificate.json"));
  const auto& zf = cert.at("zero_field");
  CHECK(zf.at("constants").at("assumption_ok") == true);
  CHECK(zf.at("residual").at("passed") == true);
  CHECK(zf.at("coercivity").at("violations") == 0);
  CHECK(zf.at("projection").at("passed") == true);
  CHECK(cert.contains("self_consistent"));
  CHECK(cert.at("passed").is_boolean());
  for (const char* k : {"lambda_n", "gamma_h", "kappa_h", "theta", "m_min", "m_max"}) {
    CHECK(zf.at("constants").contains(k));
  }
}
