#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace oho::cli;

namespace {

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  args.insert(args.begin(), "operadic-ho");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name)
{
  const fs::path d = fs::temp_directory_path() / ("oho_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p)
{
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("tables")
{
  const fs::path d = fresh_dir("tables");
  const Run r = run({"tables", "--out", d.string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(d / "tables_report.csv");
  CHECK(csv.rfind("record,family,a,t,v1,v2,v3,v4,v5,v6,v7,v8,v9,resid,jacobiator\n", 0) == 0);
  CHECK(csv.find("constants,VII_a,1,0,0,-0.25,0,-0.5,0,0.5,-0.5,0,1,0,\n") != std::string::npos);
  CHECK(csv.find("table1,VII_a,1,0,0,-1,1,0,0,0,0,1,1,0,") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);

  CHECK(run({"tables", "--out", d.string(), "--family", "VI_a", "--a", "2"}).code == 0);
  CHECK(slurp(d / "tables_report.csv").find("constants,VI_a,2,") != std::string::npos);
}

TEST_CASE("verify-lax and the negative control")
{
  const fs::path d = fresh_dir("lax");
  const Run ok = run({"verify-lax", "--out", d.string(), "--family", "III_1"});
  CHECK(ok.code == 0);
  const auto rep = nlohmann::json::parse(slurp(d / "lax_report.json"));
  CHECK(rep["passed"] == true);
  for (const auto& r : rep["richardson"])
    for (double ratio : r["ratio"])
      CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));

  const Run bad = run({"verify-lax", "--out", d.string(), "--corrupt-m"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("matrix_lax") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2")
{
  const fs::path d = fresh_dir("cfg");
  fs::create_directories(d);
  CHECK(run({"tables", "--out", d.string(), "--omega", "-1"}).code == 2);
  CHECK(run({"tables", "--out", d.string(), "--family", "IX"}).code == 2);
  CHECK(run({"tables", "--out", d.string(), "--family", "VI_a", "--a", "1"}).code == 2);
  CHECK(run({"semiclassical", "--out", d.string(), "--hbar", "0.1", "0.2", "0.05"}).code == 2);
  CHECK(run({"tables", "--config", (d / "missing.json").string()}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);

  std::ofstream(d / "unknown.json") << R"({"omega": 1, "colour": "blue"})";
  CHECK(run({"tables", "--config", (d / "unknown.json").string()}).code == 2);
  std::ofstream(d / "broken.json") << "{ not json";
  CHECK(run({"tables", "--config", (d / "broken.json").string()}).code == 2);
}

TEST_CASE("flags override the config file")
{
  const fs::path d = fresh_dir("override");
  fs::create_directories(d);
  std::ofstream(d / "cfg.json") << R"({"family": "VI_a", "a": 3, "energy": 2, "out": ")" + (d / "from_cfg").string() +
                                       R"("})";
  CHECK(run({"tables", "--config", (d / "cfg.json").string()}).code == 0);
  CHECK(slurp(d / "from_cfg" / "tables_report.csv").find("constants,VI_a,3,") != std::string::npos);

  CHECK(run({"tables", "--config", (d / "cfg.json").string(), "--a", "0.5", "--out", (d / "flag").string()}).code ==
        0);
  CHECK(slurp(d / "flag" / "tables_report.csv").find("constants,VI_a,0.5,") != std::string::npos);
}

TEST_CASE("output directory from the environment")
{
  const fs::path d = fresh_dir("env");
  setenv("OPERADIC_HO_OUT", d.string().c_str(), 1);
  CHECK(run({"tables"}).code == 0);
  unsetenv("OPERADIC_HO_OUT");
  CHECK(fs::exists(d / "tables_report.csv"));

  RunConfig cfg;
  CHECK(resolve_out_dir(cfg) == ".");
  cfg.out_dir = "x";
  CHECK(resolve_out_dir(cfg) == "x");
}

TEST_CASE("semiclassical outputs are deterministic")
{
  const fs::path a = fresh_dir("semi_a"), b = fresh_dir("semi_b");
  const std::vector<std::string> common{"--hbar", "0.2", "0.1", "0.05", "--seed", "7"};
  std::vector<std::string> args_a{"semiclassical", "--out", a.string()}, args_b{"semiclassical", "--out", b.string()};
  args_a.insert(args_a.end(), common.begin(), common.end());
  args_b.insert(args_b.end(), common.begin(), common.end());
  // the 5% band is only promised at the smallest default hbar
  args_a.insert(args_a.end(), {"--band", "0.1"});
  args_b.insert(args_b.end(), {"--band", "0.1"});
  const Run ra = run(args_a);
  CHECK(ra.code == 0);
  CHECK(run(args_b).code == 0);
  const std::string semi = slurp(a / "semiclassical.csv");
  CHECK(semi.rfind("hbar,N,family,a,J1_norm,J2_norm,J3_norm,J1_resid,J2_resid,J3_resid,slope3\n", 0) == 0);
  CHECK(slurp(a / "quasiccr.csv").rfind("hbar,N,sym_resid,comm_ratio\n", 0) == 0);
  CHECK(semi == slurp(b / "semiclassical.csv"));
  CHECK(slurp(a / "quasiccr.csv") == slurp(b / "quasiccr.csv"));
}

TEST_CASE("truncation failures name the offending hbar")
{
  const fs::path d = fresh_dir("trunc");
  const Run r = run({"semiclassical", "--out", d.string(), "--N", "20"});
  CHECK(r.code == 1);
  CHECK(r.err.find("hbar = 0.2") != std::string::npos);
}
