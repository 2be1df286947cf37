// End-to-end checks of the command-line front-end: exit codes, output
// schemas, config-file precedence, and worker-count independence.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "pu_risklab_cli_out.txt";
  const std::string cmd =
      std::string(PU_RISKLAB_BIN) + " " + args + " > " + out.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path tmp(const std::string& name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("bounds subcommand prints the documented example row") {
  const auto r = run_cli("bounds --n 1000 --V 2 --h 0.2 --em 0.5");
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_text.find("# schema: pu-risklab.bounds.v1") !=
        std::string::npos);
  CHECK(r.stdout_text.find("0.06324555320336758") != std::string::npos);
  CHECK(r.stdout_text.find("slow") != std::string::npos);
}

TEST_CASE("config errors exit with code 2 and name the field") {
  CHECK(run_cli("bounds --n 1000 --V 2 --h 0.2 --em 1.5").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("bounds --n 1000").exit_code == 2);  // missing required flags
  const auto r = run_cli("curve --grid 100,200 --V 3");
  CHECK(r.exit_code == 2);
  CHECK(r.stdout_text.find("seed") != std::string::npos);
}

TEST_CASE("risk subcommand writes a csv with the documented header") {
  const auto scenario_path = tmp("scn.json");
  {
    std::ofstream out(scenario_path);
    out << R"({"kind":"discrete_assouad","V":3,"p":0.2,"h":0.4,)"
        << R"("b":[1,0],"e":[0.5,0.5,0.5]})";
  }
  const auto out_csv = tmp("risk_out.csv");
  const auto r = run_cli("risk --scenario " + scenario_path.string() +
                         " --n 200 --seed 5 --alpha 0.2 --em 0.5 --out " +
                         out_csv.string());
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(out_csv);
  CHECK(csv.find("scenario_id,g_id,n,seed,r_true,r_excess,r_emp_sar,"
                 "r_emp_scar_alpha,r_emp_scar_em,r_emp_nontraditional,"
                 "r_emp_standard") != std::string::npos);
  CHECK(csv.find("t:100") != std::string::npos);  // bayes for b = (1,0)
}

TEST_CASE("erm subcommand emits the documented json") {
  const auto scenario_path = tmp("scn2.json");
  {
    std::ofstream out(scenario_path);
    out << R"({"kind":"discrete_assouad","V":3,"p":0.3,"h":1.0,)"
        << R"("b":[1,0],"e":[1.0,1.0,1.0]})";
  }
  const auto out_json = tmp("erm_out.json");
  const auto r = run_cli("erm --scenario " + scenario_path.string() +
                         " --n 300 --seed 9 --loss sar --out " +
                         out_json.string());
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(out_json));
  CHECK(j.at("loss_kind") == "sar");
  CHECK(j.at("hypothesis_encoding") == "t:100");  // separable, noiseless
  CHECK(j.contains("min_emp_risk"));
  CHECK(j.contains("num_ties"));
}

TEST_CASE("same seed and config give byte-identical csv across workers") {
  const auto out1 = tmp("curve_w1.csv"), out2 = tmp("curve_w2.csv");
  const std::string base =
      "curve --sweep n --grid 250,500,1000 --V 3 --h 0.5 --em 0.5 "
      "--replicates 120 --seed 31 ";
  REQUIRE(run_cli(base + "--workers 1 --out " + out1.string()).exit_code == 0);
  REQUIRE(run_cli(base + "--workers 4 --out " + out2.string()).exit_code == 0);
  const std::string a = slurp(out1), b = slurp(out2);
  REQUIRE_FALSE(a.empty());
  CHECK(a == b);
}

TEST_CASE("config file supplies defaults and flags override") {
  const auto cfg = tmp("cfg.json");
  {
    std::ofstream out(cfg);
    out << nlohmann::json{{"seed", 31},
                          {"replicates", 120},
                          {"workers", 2}}
               .dump();
  }
  const auto out1 = tmp("curve_cfg.csv"), out2 = tmp("curve_flag.csv");
  // Seed and replicates from the config file.
  REQUIRE(run_cli("--config " + cfg.string() +
                  " curve --sweep n --grid 250,500,1000 --V 3 --h 0.5 "
                  "--em 0.5 --out " +
                  out1.string())
              .exit_code == 0);
  // Identical to passing the same values as flags.
  REQUIRE(run_cli("curve --sweep n --grid 250,500,1000 --V 3 --h 0.5 "
                  "--em 0.5 --replicates 120 --seed 31 --workers 2 --out " +
                  out2.string())
              .exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));

  // A flag overrides the config value: different seed, different output.
  const auto out3 = tmp("curve_override.csv");
  REQUIRE(run_cli("--config " + cfg.string() +
                  " curve --sweep n --grid 250,500,1000 --V 3 --h 0.5 "
                  "--em 0.5 --seed 99 --out " +
                  out3.string())
              .exit_code == 0);
  CHECK(slurp(out3) != slurp(out1));
}

TEST_CASE("manifest echoes the resolved config") {
  const auto out_csv = tmp("curve_manifest.csv");
  REQUIRE(run_cli("curve --sweep n --grid 250,500 --V 3 --h 0.5 --em 0.5 "
                  "--replicates 100 --seed 8 --out " +
                  out_csv.string())
              .exit_code == 0);
  const auto manifest =
      nlohmann::json::parse(slurp(out_csv.string() + ".manifest.json"));
  CHECK(manifest.at("subcommand") == "curve");
  CHECK(manifest.at("seed") == 8);
  CHECK(manifest.at("config").at("replicates") == 100);
  CHECK(manifest.at("config").contains("fit"));
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest.at("version") == "0.1.0");
}

TEST_CASE("validate exits zero on a healthy build") {
  const auto r = run_cli("validate --seed 7 --replicates 3000 --workers 2");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("unbiasedness") != std::string::npos);
  CHECK(r.stdout_text.find("fixed-point-sandwich") != std::string::npos);
}
