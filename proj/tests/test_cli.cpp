#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string tag = std::to_string(++counter);
  const std::string out_path = "cli_stdout_" + tag + ".txt";
  const std::string err_path = "cli_stderr_" + tag + ".txt";
  const std::string cmd = std::string("\"") + SVIGUARD_CLI + "\" " + args +
                          " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

const char* kRow2Flags =
    "--a -0.136299 --b 1.072730 --s 0.253555 --rho 0.817793 --m 0.673280";

}  // namespace

TEST_CASE("version and help exit cleanly") {
  const RunResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);
  const RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("calibrate") != std::string::npos);
  CHECK(help.out.find("scan") != std::string::npos);
  CHECK(help.out.find("bound") != std::string::npos);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("scan --a 0.1").exit_code == 1);          // missing params
  CHECK(run_cli("bound --no-such-flag").exit_code == 1);  // unknown flag
  CHECK(run_cli("calibrate").exit_code == 1);             // missing file
}

TEST_CASE("bound reports the practical slope limits as json") {
  const RunResult r = run_cli("bound --k-max 1e6 --c-max 1e-4");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.at("command") == "bound");
  CHECK(doc.at("inputs").at("k_max") == 1e6);
  CHECK(doc.at("inputs").at("c_max") == 1e-4);
  const double quad = doc.at("practical_slope_quadratic").get<double>();
  CHECK(std::abs(quad - 0.53554986744117454) <= 1e-10);
  CHECK(!doc.contains("practical_slope_exact"));

  const RunResult e = run_cli("bound --k-max 1e6 --c-max 1e-4 --exact");
  REQUIRE(e.exit_code == 0);
  const json edoc = json::parse(e.out);
  const double exact = edoc.at("practical_slope_exact").get<double>();
  CHECK(std::abs(exact - 0.57470869525590825) <= 1e-8);
  CHECK(exact > edoc.at("practical_slope_quadratic").get<double>());
}

TEST_CASE("scan flags a steep wing and exits 2") {
  const RunResult r = run_cli(std::string("scan ") + kRow2Flags);
  REQUIRE(r.exit_code == 2);
  const json doc = json::parse(r.out);
  CHECK(doc.at("command") == "scan");
  CHECK(doc.at("inputs").at("params").at("b") == 1.072730);
  const json& report = doc.at("arbitrage_report");
  REQUIRE(!report.at("monotonicity_violations").empty());
  const json& v = report.at("monotonicity_violations").at(0);
  CHECK(v.at("lo").get<double>() > 1.4);
  CHECK(v.at("lo").get<double>() < 1.6);
  CHECK(v.at("hi").get<double>() == 1e7);
  CHECK(!report.at("negative_g_intervals").empty());
  const json& verdict = report.at("verdict");
  CHECK(verdict.at("passes_gatheral") == true);
  CHECK(verdict.at("passes_lee") == true);
  CHECK(verdict.at("d1_limit_class") == "minus_infinity");
  // The human summary goes to stderr, the machine report to stdout.
  CHECK(!r.err.empty());
}

TEST_CASE("scan of a flat surface is clean and exits 0") {
  const RunResult r = run_cli("scan --a 0.04 --b 0 --s 0.5 --rho 0 --m 0");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("arbitrage_report").at("monotonicity_violations").empty());
  CHECK(doc.at("arbitrage_report").at("negative_g_intervals").empty());
}

TEST_CASE("scan can dump plot data alongside the report") {
  const std::string plot = "cli_plot_tmp.csv";
  const RunResult r = run_cli(std::string("scan ") + kRow2Flags +
                              " --plot-data " + plot);
  CHECK(r.exit_code == 2);
  std::ifstream in(plot);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "moneyness,implied_vol,call_price,g");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 577);  // default grid resolution
  in.close();
  std::remove(plot.c_str());
}

TEST_CASE("calibrate fits the bundled smile and reports the arbitrage") {
  const std::string out = "cli_calibrate_tmp.json";
  const RunResult r = run_cli(std::string("calibrate \"") + SVIGUARD_TABLE2 +
                              "\" --slope-cap 1.95 --out " + out);
  CHECK(r.exit_code == 2);
  const json doc = json::parse(slurp(out));
  std::remove(out.c_str());

  CHECK(doc.at("command") == "calibrate");
  const json& inputs = doc.at("inputs");
  CHECK(inputs.at("slope_cap") == 1.95);
  CHECK(inputs.at("seed") == 42);
  CHECK(inputs.at("restarts") == 16);
  CHECK(inputs.at("weights") == "uniform");
  const std::string digest = inputs.at("smile_hash").get<std::string>();
  CHECK(digest.rfind("fnv1a:", 0) == 0);
  CHECK(digest.size() == 22);

  const json& fit = doc.at("calibration");
  CHECK(fit.at("rmse").get<double>() <= 0.0035);
  CHECK(fit.at("constraint_active") == false);
  CHECK(fit.at("restarts_summary").at("best_objective").get<double>() <=
        fit.at("restarts_summary").at("median_objective").get<double>());

  const json& report = doc.at("arbitrage_report");
  CHECK(!report.at("monotonicity_violations").empty());
  CHECK(report.at("verdict").at("passes_lee") == true);
}

TEST_CASE("calibrate rejects invalid configuration and inputs") {
  const std::string good = SVIGUARD_TABLE2;
  CHECK(run_cli("calibrate \"" + good + "\" --slope-cap 0").exit_code == 1);
  CHECK(run_cli("calibrate /definitely/not/there.csv").exit_code == 1);

  const std::string bad_csv = "cli_bad_tmp.csv";
  {
    std::ofstream f(bad_csv);
    f << "strike,vol_percent\n0.95,23.1\nbogus\n";
  }
  const RunResult r = run_cli("calibrate " + bad_csv);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
  std::remove(bad_csv.c_str());
}

TEST_CASE("calibrate output files are byte-identical across runs") {
  const std::string out1 = "cli_det_1.json";
  const std::string out2 = "cli_det_2.json";
  const std::string args = std::string("calibrate \"") + SVIGUARD_TABLE2 +
                           "\" --slope-cap 0.19 --out ";
  const RunResult r1 = run_cli(args + out1);
  const RunResult r2 = run_cli(args + out2);
  CHECK(r1.exit_code == 2);
  CHECK(r2.exit_code == 2);
  const std::string b1 = slurp(out1);
  const std::string b2 = slurp(out2);
  CHECK(!b1.empty());
  CHECK(b1 == b2);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}
