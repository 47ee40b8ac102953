// End-to-end checks of the command-line surface: exit codes, JSON shape,
// determinism. The binary path comes from the build system.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "curvefit/models.hpp"
#include "curvefit/rng.hpp"

using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "curvefit_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const fs::path out_path = work_dir() / "stdout.txt";
  const fs::path err_path = work_dir() / "stderr.txt";
  const std::string cmd = (env.empty() ? "" : env + " ") +
                          std::string(CURVEFIT_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream out(out_path, std::ios::binary);
  r.out.assign(std::istreambuf_iterator<char>(out), {});
  std::ifstream err(err_path, std::ios::binary);
  r.err.assign(std::istreambuf_iterator<char>(err), {});
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path write_linear_csv(const char* name) {
  const fs::path path = work_dir() / name;
  std::ofstream out(path);
  out << "x,y\n";
  for (int i = 0; i < 20; ++i) {
    out << i << ',' << 3 * i + 4 << '\n';
  }
  return path;
}

fs::path write_exponential_csv(const char* name, double sigma, std::uint64_t seed) {
  const fs::path path = work_dir() / name;
  const curvefit::ModelSpec& exponential = *curvefit::find_model("exponential");
  curvefit::Rng rng(seed);
  std::ofstream out(path);
  out << "x,y\n";
  for (int i = 0; i < 200; ++i) {
    const double x = -5.0 + 10.0 * i / 199.0;
    const double y =
        exponential.eval(std::vector<double>{5.0, 0.7}, x) + sigma * rng.normal();
    out << curvefit::format_double(x) << ',' << curvefit::format_double(y) << '\n';
  }
  return path;
}

}  // namespace

TEST_CASE("cli: local fit on exact linear data") {
  const fs::path csv = write_linear_csv("cli_lin.csv");
  const RunResult r = run_cli("fit --model linear --data " + csv.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["converged"] == true);
  CHECK(j["result"]["model"] == "linear");
  CHECK(std::fabs(j["result"]["theta"][0].get<double>() - 3.0) < 1e-8);
  CHECK(std::fabs(j["result"]["theta"][1].get<double>() - 4.0) < 1e-8);
  CHECK(j["input"]["rows"] == 20);
  CHECK(j["version"].is_string());
}

TEST_CASE("cli: unknown model is a usage error listing the names") {
  const fs::path csv = write_linear_csv("cli_lin2.csv");
  const RunResult r = run_cli("fit --model warp --data " + csv.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("exponential") != std::string::npos);
  CHECK(r.err.find("gaussian") != std::string::npos);
}

TEST_CASE("cli: zero max-iter is a usage error") {
  const fs::path csv = write_linear_csv("cli_lin3.csv");
  const RunResult r =
      run_cli("fit --model linear --max-iter 0 --data " + csv.string());
  CHECK(r.exit_code == 1);
}

TEST_CASE("cli: missing file is a data error") {
  const RunResult r = run_cli("fit --model linear --data /no/such/file.csv");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: non-convergence exits 3 but still writes the result") {
  const fs::path csv = write_exponential_csv("cli_exp_nc.csv", 0.1, 12);
  const fs::path out = work_dir() / "nc.json";
  const RunResult r = run_cli("fit --model exponential --init 0.1,0.1 --max-iter 1 --data " +
                              csv.string() + " --out " + out.string());
  CHECK(r.exit_code == 3);
  const json j = json::parse(read_file(out));
  CHECK(j["result"]["converged"] == false);
}

TEST_CASE("cli: global fit reproduces the noisy exponential") {
  const fs::path csv = write_exponential_csv("cli_exp.csv", 0.1, 99);
  const fs::path out = work_dir() / "global.json";
  const RunResult r = run_cli("fit --model exponential --global --bounds 0:10,0:2 "
                              "--seed 5 --data " +
                              csv.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(read_file(out));
  CHECK(std::fabs(j["result"]["theta"][0].get<double>() - 5.0) <= 0.05);
  CHECK(std::fabs(j["result"]["theta"][1].get<double>() - 0.7) <= 0.005);
  CHECK(j["result"]["method"] == "differential_evolution");
}

TEST_CASE("cli: smooth leaves quadratic samples unchanged") {
  const fs::path csv = work_dir() / "cli_quad.csv";
  {
    std::ofstream out(csv);
    out << "x,y\n";
    for (int i = 0; i < 30; ++i) {
      const double x = i;
      out << x << ',' << curvefit::format_double(0.25 * x * x - x + 2) << '\n';
    }
  }
  const fs::path smoothed = work_dir() / "cli_quad_sm.csv";
  const RunResult r = run_cli("smooth --window 2 --degree 2 --data " + csv.string() +
                              " --out " + smoothed.string());
  REQUIRE(r.exit_code == 0);
  const curvefit::Dataset in = curvefit::load_csv(csv.string(), "x", "y");
  const curvefit::Dataset out = curvefit::load_csv(smoothed.string(), "x", "y");
  REQUIRE(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(std::fabs(out.y[i] - in.y[i]) < 1e-10);
  }
}

TEST_CASE("cli: smooth warns on a non-uniform grid and proceeds") {
  const fs::path csv = work_dir() / "cli_nonuniform.csv";
  {
    std::ofstream out(csv);
    out << "x,y\n0,1\n1,2\n2.5,3\n4,4\n5,5\n6,6\n";
  }
  const RunResult r = run_cli("smooth --window 1 --degree 1 --data " + csv.string() +
                              " --out " + (work_dir() / "nu.csv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("not uniformly spaced") != std::string::npos);
}

TEST_CASE("cli: smooth refuses incomplete data") {
  const fs::path csv = work_dir() / "cli_holes.csv";
  {
    std::ofstream out(csv);
    out << "x,y\n1,1\n2,\n3,3\n4,4\n5,5\n";
  }
  const RunResult r = run_cli("smooth --window 1 --degree 1 --data " + csv.string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: impute fills and writes CSV") {
  const fs::path csv = work_dir() / "cli_imp.csv";
  {
    std::ofstream out(csv);
    out << "x,y\n1,2\n2,\n3,6\n";
  }
  const fs::path filled = work_dir() / "cli_imp_out.csv";
  const RunResult r = run_cli("impute --strategy linear --data " + csv.string() +
                              " --out " + filled.string());
  REQUIRE(r.exit_code == 0);
  CHECK(read_file(filled) == "x,y\n1,2\n2,4\n3,6\n");

  // a run report accompanies the CSV
  const json j = json::parse(r.out);
  CHECK(j["result"]["strategy"] == "linear");
  CHECK(j["result"]["filled"] == 1);
  CHECK(j["command"].get<std::string>().find("impute") == 0);
}

TEST_CASE("cli: stats emits the nine summary fields") {
  const fs::path csv = work_dir() / "cli_stats.csv";
  {
    std::ofstream out(csv);
    out << "x,y\n1,2\n2,4\n3,4\n4,4\n5,5\n6,5\n7,7\n8,9\n";
  }
  const RunResult r = run_cli("stats --data " + csv.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  const json& s = j["result"];
  for (const char* key : {"mean", "std", "min", "max", "median", "count",
                          "unique_count", "skewness", "excess_kurtosis"}) {
    INFO(key);
    CHECK(s.contains(key));
  }
  CHECK(s["mean"].get<double>() == doctest::Approx(5.0));
  CHECK(s["count"] == 8);
  CHECK(s["unique_count"] == 5);
}

TEST_CASE("cli: select ranks linear first on linear data") {
  const fs::path csv = write_linear_csv("cli_sel.csv");
  const RunResult r =
      run_cli("select --candidates linear,quadratic,cubic --data " + csv.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["result"].is_array());
  CHECK(j["result"][0]["model_name"] == "linear");
  CHECK(j["result"][0]["r_squared"].get<double>() >= 0.9999);
}

TEST_CASE("cli: evaluate reports metrics for fixed parameters") {
  const fs::path csv = write_linear_csv("cli_eval.csv");
  const RunResult r =
      run_cli("evaluate --model linear --params 3,4 --data " + csv.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["metrics"]["r_squared"].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["metrics"]["mse"].get<double>() == 0.0);
}

TEST_CASE("cli: plot writes one SVG per kind") {
  const fs::path csv = write_linear_csv("cli_plot.csv");
  const fs::path svg = work_dir() / "one.svg";
  const RunResult single = run_cli("plot --kind scatter --data " + csv.string() +
                                   " --out " + svg.string());
  REQUIRE(single.exit_code == 0);
  CHECK(fs::exists(svg));

  const fs::path multi = work_dir() / "multi.svg";
  const RunResult several = run_cli("plot --kind scatter,histogram,qq --data " +
                                    csv.string() + " --out " + multi.string());
  REQUIRE(several.exit_code == 0);
  CHECK(fs::exists(work_dir() / "multi.scatter.svg"));
  CHECK(fs::exists(work_dir() / "multi.histogram.svg"));
  CHECK(fs::exists(work_dir() / "multi.qq.svg"));
}

TEST_CASE("cli: repeated seeded runs are byte-identical") {
  const fs::path csv = write_exponential_csv("cli_det.csv", 0.1, 7);
  const fs::path out1 = work_dir() / "det1.json";
  const fs::path out2 = work_dir() / "det2.json";
  const std::string base = "fit --model exponential --global --bounds 0:10,0:2 "
                           "--seed 42 --data " +
                           csv.string();
  REQUIRE(run_cli(base + " --n-jobs 1 --out " + out1.string()).exit_code == 0);
  REQUIRE(run_cli(base + " --n-jobs 4 --out " + out2.string()).exit_code == 0);
  CHECK(read_file(out1) == read_file(out2));
}

TEST_CASE("cli: CURVEFIT_SEED is the default seed, --seed wins") {
  const fs::path csv = write_linear_csv("cli_env.csv");
  const RunResult env_run = run_cli("stats --data " + csv.string(), "CURVEFIT_SEED=9");
  const json j = json::parse(env_run.out);
  CHECK(j["seed"] == 9);

  const RunResult flag_run =
      run_cli("stats --seed 4 --data " + csv.string(), "CURVEFIT_SEED=9");
  const json j2 = json::parse(flag_run.out);
  CHECK(j2["seed"] == 4);
}
