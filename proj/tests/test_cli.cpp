#include "commands.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("qdsim_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  [[nodiscard]] std::string str() const { return path.string(); }
};

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qdsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qdsim::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gate summary and trajectories") {
  TempDir d;
  const Run r = cli({"gate", "--out", d.str(), "--snapshots", "5"});
  REQUIRE(r.code == 0);
  const json j = load(d.path / "gate.json");
  CHECK(j["summary"]["fidelity"].get<double>() >= 0.999);
  CHECK(j["summary"]["t_star_ps"].get<double>() == doctest::Approx(142.86).epsilon(1e-4));
  CHECK(j["summary"]["truth_table_correct"].get<bool>());
  CHECK(j["tables"]["trajectory_101"]["time_ps"].size() == 5);
  CHECK(j["config"]["command"] == "gate");
  CHECK(fs::exists(d.path / "gate_summary.csv"));
  const std::string traj = slurp(d.path / "gate_trajectory_101.csv");
  CHECK(traj.rfind("# config: ", 0) == 0);
  CHECK(lines(traj) == 2 + 5);
}

TEST_CASE("gate in the single-electron encoding") {
  TempDir d;
  REQUIRE(cli({"--encoding", "single-electron", "gate", "--out", d.str(), "--snapshots", "2",
               "--format", "json"})
              .code == 0);
  const json j = load(d.path / "gate.json");
  CHECK(j["summary"]["t_star_ps"].get<double>() == doctest::Approx(23.498).epsilon(1e-4));
  CHECK(j["config"]["encoding"] == "single-electron");
  CHECK_FALSE(fs::exists(d.path / "gate_summary.csv"));
}

TEST_CASE("sweep output is deterministic") {
  TempDir a, b;
  REQUIRE(cli({"sweep", "--u-min", "21", "--u-max", "22", "--points", "2", "--out", a.str()}).code == 0);
  REQUIRE(cli({"sweep", "--u-min", "21", "--u-max", "22", "--points", "2", "--out", b.str()}).code == 0);
  const std::string csv = slurp(a.path / "sweep_fidelity.csv");
  CHECK(lines(csv) == 2 + 2);
  CHECK(csv == slurp(b.path / "sweep_fidelity.csv"));
  CHECK(slurp(a.path / "sweep.json") == slurp(b.path / "sweep.json"));
}

TEST_CASE("sweep rejects an empty range") {
  TempDir d;
  const Run r = cli({"sweep", "--u-min", "25", "--u-max", "18", "--out", d.str()});
  CHECK(r.code != 0);
  CHECK(r.err.rfind("error:", 0) == 0);
  CHECK(lines(r.err) == 1);
}

TEST_CASE("quasistatic noise with zero spread") {
  TempDir d;
  REQUIRE(cli({"--seed", "3", "noise", "quasistatic", "--epsilon-bar", "0", "--samples", "20",
               "--out", d.str()})
              .code == 0);
  const json s = load(d.path / "noise_quasistatic.json")["summary"];
  CHECK(s["mc_change"].get<double>() == 0.0);
  CHECK(s["analytic_change"].get<double>() == doctest::Approx(0.0));
  CHECK(s["lambda_formula"].get<double>() == doctest::Approx(17.043868));
  CHECK(s["fit_lambda"].is_null());
}

TEST_CASE("high-frequency noise records seed and step") {
  TempDir d;
  REQUIRE(cli({"noise", "highfreq", "--runs", "4", "--seed", "11", "--out", d.str()}).code == 0);
  const json j = load(d.path / "noise_highfreq.json");
  CHECK(j["config"]["seed"] == 11);
  CHECK(j["config"]["options"]["dt_hbar_over_gamma"].get<double>() == 1.0);
  CHECK(j["summary"]["steps"] == 10);
  CHECK(j["summary"]["runs"] == 4);
  TempDir e;
  REQUIRE(cli({"noise", "highfreq", "--runs", "4", "--seed", "11", "--out", e.str()}).code == 0);
  CHECK(slurp(d.path / "noise_highfreq.json") == slurp(e.path / "noise_highfreq.json"));
}

TEST_CASE("adder truth table and single inputs") {
  TempDir d;
  REQUIRE(cli({"adder", "--all", "--out", d.str()}).code == 0);
  const json t = load(d.path / "adder_truth_table.json")["tables"]["truth_table"];
  REQUIRE(t["fidelity"].size() == 8);
  CHECK(t["fidelity"][7].get<double>() == doctest::Approx(0.999).epsilon(2e-3));
  for (int k = 0; k < 8; ++k) {
    const int sum = t["p"][k].get<int>() + t["q"][k].get<int>() + t["r"][k].get<int>();
    CHECK(t["parity"][k] == sum % 2);
    CHECK(t["carry"][k] == (sum >= 2 ? 1 : 0));
  }
  REQUIRE(cli({"adder", "--p", "1", "--q", "0", "--r", "1", "--out", d.str()}).code == 0);
  const json s = load(d.path / "adder_101.json")["summary"];
  CHECK(s["parity"] == 0);
  CHECK(s["carry"] == 1);
}

TEST_CASE("sampled adder is reproducible") {
  TempDir a, b;
  const std::vector<std::string> args{"--seed", "4", "adder", "--p", "1", "--q", "1", "--r", "0",
                                      "--mode", "sampled", "--shots", "20"};
  auto with_out = [&](const TempDir& d) {
    auto v = args;
    v.insert(v.end(), {"--out", d.str()});
    return v;
  };
  REQUIRE(cli(with_out(a)).code == 0);
  REQUIRE(cli(with_out(b)).code == 0);
  CHECK(slurp(a.path / "adder_110.json") == slurp(b.path / "adder_110.json"));
  const json s = load(a.path / "adder_110.json")["summary"];
  CHECK(s["majority_parity"] == 0);
  CHECK(s["majority_carry"] == 1);
}

TEST_CASE("adder rejects bad bits") {
  TempDir d;
  const Run r = cli({"adder", "--p", "2", "--out", d.str()});
  CHECK(r.code != 0);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("energy ledger") {
  TempDir d;
  REQUIRE(cli({"energy", "--out", d.str()}).code == 0);
  const json s = load(d.path / "energy.json")["summary"];
  CHECK(s["total_without_measurement_mev"].get<double>() == doctest::Approx(27.77456).epsilon(1e-9));
  CHECK(s["grand_total_ev"].get<double>() == doctest::Approx(27.77456e-3).epsilon(1e-9));
  CHECK(s["reference_row_mismatches"] == 0);
  CHECK(slurp(d.path / "energy_ledger.txt").find("27.77 meV") != std::string::npos);

  TempDir m;
  REQUIRE(cli({"energy", "--include-measurement", "--out", m.str()}).code == 0);
  const json sm = load(m.path / "energy.json")["summary"];
  CHECK(sm["grand_total_ev"].get<double>() ==
        doctest::Approx(27.77456e-3 + 2.0 * sm["measurement_cost_ev"].get<double>()));

  TempDir g;
  REQUIRE(cli({"--set", "gamma_si_ueV=22", "energy", "--out", g.str()}).code == 0);
  CHECK(load(g.path / "energy.json")["summary"]["total_without_measurement_mev"].get<double>() ==
        doctest::Approx(27.77456 / 2.0));
}

TEST_CASE("config file is read and left alone") {
  TempDir d;
  const fs::path cfg = d.path / "params.cfg";
  {
    std::ofstream f(cfg);
    f << "# test\nU = 20\nV = 10\n";
  }
  const std::string before = slurp(cfg);
  REQUIRE(cli({"--config", cfg.string(), "gate", "--snapshots", "2", "--format", "json", "--out",
               d.str()})
              .code == 0);
  CHECK(slurp(cfg) == before);
  CHECK(load(d.path / "gate.json")["config"]["params"]["U"].get<double>() == 20.0);

  const fs::path bad = d.path / "bad.cfg";
  {
    std::ofstream f(bad);
    f << "W = 3\n";
  }
  const Run r = cli({"--config", bad.string(), "gate", "--out", d.str()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("argument errors") {
  CHECK(cli({"teleport"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"gate", "--snapshots", "many"}).code == 2);
  CHECK(cli({"--set", "U=abc", "gate"}).code == 1);
  const Run h = cli({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("adder") != std::string::npos);
}

}
