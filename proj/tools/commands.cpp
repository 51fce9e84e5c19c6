#include "commands.hpp"

#include "qdsim/energetics.hpp"
#include "qdsim/noise.hpp"
#include "qdsim/random.hpp"
#include "qdsim/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

namespace qdsim::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum class Format { csv, json, both };

struct RunConfig {
  HubbardParams params;
  Encoding encoding;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  Format format = Format::both;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Artifact {
  std::string stem;
  json config;
  json summary = json::object();
  std::vector<Table> tables;
  std::vector<std::pair<std::string, std::string>> text_files;  // name, content
};

json params_json(const HubbardParams& p) {
  return {{"eps0", p.eps[0]},       {"eps1", p.eps[1]},       {"eps2", p.eps[2]},
          {"gamma12", p.gamma12},   {"gamma01", p.gamma01},   {"U", p.charging},
          {"V", p.capacitive},      {"gamma_si_ueV", p.gamma_si_ueV}};
}

json base_config(const RunConfig& cfg, const std::string& command, json options) {
  return {{"command", command},
          {"params", params_json(cfg.params)},
          {"encoding", cfg.encoding.name()},
          {"seed", cfg.seed},
          {"options", std::move(options)}};
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_file(const fs::path& path, const std::string& content, std::ostream& out) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
  out << "wrote " << path.string() << '\n';
}

void emit(const RunConfig& cfg, const Artifact& a, std::ostream& out) {
  const fs::path dir(cfg.output_dir);
  const std::string header = "# config: " + a.config.dump() + "\n";
  if (cfg.format != Format::json) {
    std::string s = header + "key,value\n";
    for (const auto& [k, v] : a.summary.items()) s += k + "," + csv_cell(v) + "\n";
    write_file(dir / (a.stem + "_summary.csv"), s, out);
    for (const auto& t : a.tables) {
      std::ostringstream os;
      os << header;
      for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
      os << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
      }
      write_file(dir / (a.stem + "_" + t.name + ".csv"), os.str(), out);
    }
  }
  if (cfg.format != Format::csv) {
    json doc = {{"config", a.config}, {"summary", a.summary}, {"tables", json::object()}};
    for (const auto& t : a.tables) {
      json cols = json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        json col = json::array();
        for (const auto& row : t.rows) col.push_back(row[c]);
        cols[t.columns[c]] = std::move(col);
      }
      doc["tables"][t.name] = std::move(cols);
    }
    write_file(dir / (a.stem + ".json"), doc.dump(2) + "\n", out);
  }
  for (const auto& [name, content] : a.text_files) {
    write_file(dir / name, header + content, out);
  }
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---------------------------------------------------------------------------

struct GateOptions {
  int snapshots = 201;
  std::optional<double> t_final;
};

Artifact cmd_gate(const RunConfig& cfg, const GateOptions& o) {
  if (o.snapshots < 2) throw std::invalid_argument("--snapshots must be >= 2");
  const GateAnalysis ga = analyze_gate(cfg.params, cfg.encoding);
  const double t_final = o.t_final.value_or(ga.t_star.natural);
  if (!(t_final > 0.0)) throw std::invalid_argument("--t-final must be > 0");

  Artifact a;
  a.stem = "gate";
  a.config = base_config(cfg, "gate", {{"snapshots", o.snapshots}, {"t_final_hbar_over_gamma", t_final}});
  auto& s = a.summary;
  s["t_star_hbar_over_gamma"] = ga.t_star.natural;
  s["t_star_ps"] = ga.t_star.ps;
  s["slow_period_ps"] = finite_or_null(ga.slow_period.ps);
  s["omega1_gamma"] = ga.omega.omega1;
  s["omega2_gamma"] = ga.omega.omega2;
  s["omega3_gamma"] = ga.omega.omega3;
  s["fidelity"] = ga.fidelity;
  s["leakage_at_t_star"] = ga.leakage_at_tstar;
  s["leakage_per_configuration_at_t_star"] = ga.leakage_per_configuration_at_tstar;
  const bool analytic = cfg.encoding.variant == Encoding::Variant::two_electron &&
                        cfg.params.eps[1] == cfg.params.eps[2];
  s["leakage_analytic_at_t_star"] = analytic ? json(ga.leakage_analytic_at_tstar) : json(nullptr);

  const TruthTableReport tt = truth_table(cfg.params, cfg.encoding);
  s["truth_table_correct"] = tt.all_correct();
  Table inputs{"inputs",
               {"input", "expected", "argmax_output", "target_population", "leakage", "leakage_flag",
                "correct"},
               {}};
  for (const auto& r : tt.rows) {
    inputs.rows.push_back({r.input.str(), r.expected.str(),
                           r.argmax_output ? json(r.argmax_output->str()) : json("leak"),
                           r.target_population, r.leakage, r.leakage_flag, r.correct()});
  }
  a.tables.push_back(std::move(inputs));

  const FredkinGate gate(cfg.params, cfg.encoding);
  for (int i = 0; i < 8; ++i) {
    const LogicalBits in = LogicalBits::from_index(i);
    const FockState f = logical_to_fock(in, cfg.encoding);
    const FockBasis sector = build_basis(sector_of(f));
    const HamiltonianMatrix h = build_fredkin_hamiltonian(cfg.params, sector);
    const EvolutionResult ev =
        evolve_sampled(h, StateVector::basis_state(sector, f), t_final, o.snapshots);
    Table t{"trajectory_" + in.str(), {"time_hbar_over_gamma", "time_ps"}, {}};
    for (const FockState st : sector.states()) t.columns.push_back("pop_" + st.label());
    t.columns.emplace_back("leakage");
    for (std::size_t k = 0; k < ev.times.size(); ++k) {
      std::vector<json> row{ev.times[k],
                            units::natural_time_to_ps(ev.times[k], cfg.params.gamma_si_ueV)};
      const Eigen::VectorXd pops = ev.states[k].populations();
      for (Eigen::Index j = 0; j < pops.size(); ++j) row.emplace_back(pops(j));
      row.emplace_back(ev.states[k].leakage(cfg.encoding));
      t.rows.push_back(std::move(row));
    }
    a.tables.push_back(std::move(t));
  }
  return a;
}

struct SweepOptions {
  double u_min = 18.0;
  double u_max = 25.0;
  int points = 701;
};

Artifact cmd_sweep(const RunConfig& cfg, const SweepOptions& o) {
  if (!(o.u_min < o.u_max)) throw std::invalid_argument("sweep needs --u-min < --u-max");
  if (o.points < 2) throw std::invalid_argument("--points must be >= 2");
  const USweep sw = u_sweep(cfg.params, o.u_min, o.u_max, o.points, cfg.encoding);
  Artifact a;
  a.stem = "sweep";
  a.config = base_config(cfg, "sweep", {{"u_min_gamma", o.u_min}, {"u_max_gamma", o.u_max},
                                        {"points", o.points}});
  const std::size_t local = sw.nearest_local_max(cfg.params.charging);
  a.summary = {{"argmax_u_gamma", sw.argmax_charging()},
               {"max_fidelity", sw.max_fidelity()},
               {"reference_u_gamma", cfg.params.charging},
               {"local_max_near_reference_u_gamma", sw.charging[local]},
               {"local_max_near_reference_fidelity", sw.fidelity[local]}};
  Table t{"fidelity", {"u_gamma", "t_star_hbar_over_gamma", "t_star_ps", "fidelity"}, {}};
  for (std::size_t i = 0; i < sw.charging.size(); ++i) {
    t.rows.push_back({sw.charging[i], sw.gate_time[i],
                      units::natural_time_to_ps(sw.gate_time[i], cfg.params.gamma_si_ueV),
                      sw.fidelity[i]});
  }
  a.tables.push_back(std::move(t));
  return a;
}

struct NoiseOptions {
  std::string kind;
  QuasistaticModel qs;
  HighFrequencyModel hf;
  std::string method = "both";
};

Artifact cmd_noise(const RunConfig& cfg, const NoiseOptions& o) {
  if (cfg.encoding.variant != Encoding::Variant::two_electron) {
    throw std::invalid_argument("noise analysis is defined for the two-electron encoding");
  }
  Artifact a;
  if (o.kind == "quasistatic") {
    QuasistaticModel m = o.qs;
    m.seed = cfg.seed;
    if (m.epsilon_bar < 0.0) throw std::invalid_argument("--epsilon-bar must be >= 0");
    if (m.n_samples < 1) throw std::invalid_argument("--samples must be >= 1");
    a.stem = "noise_quasistatic";
    a.config = base_config(cfg, "noise", {{"kind", o.kind},
                                          {"method", o.method},
                                          {"epsilon_bar_gamma", m.epsilon_bar},
                                          {"samples", m.n_samples},
                                          {"alpha", m.alpha},
                                          {"beta", m.beta},
                                          {"include_eps0", m.include_eps0}});
    auto& s = a.summary;
    s["t_star_hbar_over_gamma"] = gate_time(cfg.params).natural;
    s["p0"] = control_one_success(cfg.params, {0.0, 0.0, 0.0});
    s["lambda_formula"] = lambda_coefficient(cfg.params, m.alpha, m.beta);
    if (o.method != "mc") {
      const QuasistaticAnalytic qa = quasistatic_analytic(cfg.params, m.alpha, m.beta);
      s["analytic_f0"] = qa.f0;
      s["analytic_average"] = qa.average(m.epsilon_bar);
      s["analytic_change"] = qa.average(m.epsilon_bar) - qa.f0 * qa.f0;
    }
    if (o.method != "analytic") {
      const NoiseReport r = quasistatic_average_mc(cfg.params, m);
      s["mc_samples"] = r.n;
      s["mc_mean"] = r.mean;
      s["mc_std"] = r.std;
      s["mc_standard_error"] = r.standard_error;
      s["mc_change"] = r.change();
      s["mc_min"] = r.min;
      s["mc_max"] = r.max;
      if (m.epsilon_bar > 0.0 && r.samples.size() >= 2) {
        const LambdaFit fit = fit_lambda(r.samples);
        s["fit_f0"] = fit.f0;
        s["fit_lambda"] = fit.lambda;
      } else {
        s["fit_f0"] = nullptr;
        s["fit_lambda"] = nullptr;
      }
      Table t{"samples", {"eps0_offset_gamma", "eps1_offset_gamma", "eps2_offset_gamma", "success"}, {}};
      for (const auto& smp : r.samples) {
        t.rows.push_back({smp.offsets[0], smp.offsets[1], smp.offsets[2], smp.success});
      }
      a.tables.push_back(std::move(t));
    }
  } else if (o.kind == "highfreq") {
    HighFrequencyModel m = o.hf;
    m.seed = cfg.seed;
    if (m.amplitude < 0.0) throw std::invalid_argument("--amplitude must be >= 0");
    if (!(m.dt > 0.0)) throw std::invalid_argument("--dt must be > 0");
    if (m.n_runs < 1) throw std::invalid_argument("--runs must be >= 1");
    a.stem = "noise_highfreq";
    a.config = base_config(cfg, "noise", {{"kind", o.kind},
                                          {"amplitude_gamma", m.amplitude},
                                          {"dt_hbar_over_gamma", m.dt},
                                          {"runs", m.n_runs}});
    const NoiseReport r = high_frequency_ensemble(cfg.params, m);
    a.summary = {{"runs", r.n},
                 {"dt_hbar_over_gamma", r.dt},
                 {"steps", static_cast<int>(r.times.size()) - 1},
                 {"t_final_hbar_over_gamma", r.t_final},
                 {"p0", r.p0},
                 {"mean", r.mean},
                 {"std", r.std},
                 {"standard_error", r.standard_error},
                 {"change", r.change()},
                 {"min", r.min},
                 {"max", r.max}};
    Table t{"trajectory", {"time_hbar_over_gamma", "time_ps", "clean", "mean", "std"}, {}};
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      t.rows.push_back({r.times[k], units::natural_time_to_ps(r.times[k], cfg.params.gamma_si_ueV),
                        r.clean_trajectory[k], r.mean_trajectory[k], r.std_trajectory[k]});
    }
    a.tables.push_back(std::move(t));
  } else {
    throw std::invalid_argument("unknown noise kind '" + o.kind + "'");
  }
  return a;
}

struct AdderOptions {
  int p = 0;
  int q = 0;
  int r = 0;
  bool all = false;
  std::string mode = "ideal";
  int shots = 1000;
  std::string schedule_path;
};

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Artifact cmd_adder(const RunConfig& cfg, const AdderOptions& o) {
  for (int b : {o.p, o.q, o.r}) {
    if (b != 0 && b != 1) throw std::invalid_argument("input bits must be 0 or 1");
  }
  if (o.mode != "ideal" && o.mode != "sampled") {
    throw std::invalid_argument("--mode must be ideal or sampled");
  }
  if (o.shots < 1) throw std::invalid_argument("--shots must be >= 1");
  if (o.all && !o.schedule_path.empty()) {
    throw std::invalid_argument("--all and --schedule are mutually exclusive");
  }
  if (cfg.encoding.variant != Encoding::Variant::two_electron && o.schedule_path.empty()) {
    throw std::invalid_argument("the default adder schedule uses the two-electron encoding");
  }

  Artifact a;
  json options = {{"mode", o.mode}, {"all", o.all}};
  if (o.mode == "sampled") options["shots"] = o.shots;

  std::optional<PulseSchedule> custom;
  if (!o.schedule_path.empty()) {
    custom = schedule_from_json(read_text(o.schedule_path));
    options["schedule"] = json::parse(schedule_to_json(*custom));
  } else {
    options["p"] = o.p;
    options["q"] = o.q;
    options["r"] = o.r;
  }
  a.config = base_config(cfg, "adder", options);
  if (custom) {
    a.config["params"] = params_json(custom->params);
    a.config["encoding"] = custom->encoding.name();
  }

  const HubbardParams params = with_default_aux_coupling(cfg.params);
  std::optional<AuxSwapCalibration> cal;
  if (!custom) {
    cal = aux_swap_calibration(params);
    a.summary["aux_swap_duration_hbar_over_gamma"] = cal->duration;
    a.summary["aux_swap_fidelity_parity0"] = cal->fidelity_parity0;
    a.summary["aux_swap_fidelity_parity1"] = cal->fidelity_parity1;
  }
  const PulseSchedule base = custom ? *custom : default_schedule({o.p, o.q, o.r}, params, *cal);
  a.summary["coherent_time_ps"] =
      units::natural_time_to_ps(coherent_time(base), base.params.gamma_si_ueV);

  if (o.all) {
    a.stem = "adder_truth_table";
    Table t{"truth_table",
            {"p", "q", "r", "parity", "carry", "fidelity", "reference_fidelity"}, {}};
    std::vector<AdderResult> rows;
    for (int k = 0; k < 8; ++k) {
      const AdderInputs in{(k >> 2) & 1, (k >> 1) & 1, k & 1};
      const PulseSchedule s = default_schedule(in, params, *cal);
      const AdderResult r = o.mode == "ideal"
                                ? run_adder(s)
                                : run_adder(s, RunMode::sampled(child_seed(cfg.seed, k)));
      t.rows.push_back({in.p, in.q, in.r, r.parity, r.carry, r.fidelity,
                        kReferenceAdderFidelity[static_cast<std::size_t>(k)]});
    }
    a.tables.push_back(std::move(t));
    return a;
  }

  const std::string tag = std::to_string(base.inputs.p) + std::to_string(base.inputs.q) +
                          std::to_string(base.inputs.r);
  a.stem = "adder_" + tag;
  if (o.mode == "ideal") {
    const AdderResult r = run_adder(base);
    a.summary["parity"] = r.parity;
    a.summary["carry"] = r.carry;
    a.summary["fidelity"] = r.fidelity;
    a.summary["g"] = r.g;
    Table t{"steps", {"interval", "fidelity"}, {}};
    for (std::size_t i = 0; i < r.step_fidelities.size(); ++i) {
      t.rows.push_back({static_cast<int>(i), r.step_fidelities[i]});
    }
    a.tables.push_back(std::move(t));
    Table m{"measurements", {"output", "dot", "charge", "bit"}, {}};
    for (const auto& rec : r.measurements) m.rows.push_back({rec.output, rec.dot, rec.charge, rec.bit});
    a.tables.push_back(std::move(m));
  } else {
    const ShotStatistics st = sample_adder(base, o.shots, cfg.seed);
    const auto [mp, mc] = st.majority();
    a.summary["shots"] = st.shots;
    a.summary["majority_parity"] = mp;
    a.summary["majority_carry"] = mc;
    a.summary["leakage_shots"] = st.leakage_shots;
    for (const auto& [outcome, count] : st.counts) {
      a.summary["count_" + std::to_string(outcome.first) + std::to_string(outcome.second)] = count;
    }
    Table t{"shots", {"shot", "parity", "carry", "g", "probability", "leakage"}, {}};
    for (std::size_t i = 0; i < st.results.size(); ++i) {
      const auto& r = st.results[i];
      bool leaked = false;
      for (const auto& m : r.measurements) leaked = leaked || m.leakage;
      t.rows.push_back({static_cast<int>(i), r.parity, r.carry, r.g, r.fidelity, leaked});
    }
    a.tables.push_back(std::move(t));
  }
  return a;
}

struct EnergyOptions {
  bool include_measurement = false;
  double bias_mv = 1.0;
  double current_na = 30.0;
  double measure_us = 10.0;
  double cooling_uw = 500.0;
  std::optional<double> adder_time_ps;
};

Artifact cmd_energy(const RunConfig& cfg, const EnergyOptions& o) {
  CostModel model;
  model.measurement = {o.bias_mv * 1e-3, o.current_na * 1e-9, o.measure_us * 1e-6};
  model.validate();
  const HubbardParams params = with_default_aux_coupling(cfg.params);
  const PulseSchedule s = default_schedule({0, 0, 0}, params);
  const EnergyLedger ledger = energy_ledger(s, model);
  const double t_star_ps = gate_time(params).ps;
  const double adder_ps = o.adder_time_ps.value_or(6.0 * t_star_ps);

  Artifact a;
  a.stem = "energy";
  json options = {{"include_measurement", o.include_measurement},
                  {"bias_mv", o.bias_mv},
                  {"current_na", o.current_na},
                  {"measure_us", o.measure_us},
                  {"cooling_uw", o.cooling_uw},
                  {"adder_time_ps", adder_ps}};
  a.config = base_config(cfg, "energy", options);

  const double without_mev = ledger.total_without_measurement_meV();
  const double dem = measurement_cost(model.measurement);
  auto& sm = a.summary;
  sm["charging_total_u"] = ledger.totals.charging_u;
  sm["eps_total_gamma"] = ledger.totals.eps_gamma;
  sm["gamma_total_u"] = ledger.totals.gamma_u;
  sm["measurements"] = ledger.totals.measurements;
  sm["charging_mev"] = ledger.charging_meV();
  sm["eps_mev"] = ledger.eps_meV();
  sm["gamma_mev"] = ledger.gamma_meV();
  sm["total_without_measurement_mev"] = without_mev;
  sm["measurement_cost_ev"] = dem;
  sm["reference_measurement_cost_ev"] = kReferenceMeasurementEv;
  sm["measurement_total_ev"] = ledger.totals.measurement_ev;
  sm["grand_total_ev"] =
      without_mev * 1e-3 + (o.include_measurement ? ledger.totals.measurement_ev : 0.0);
  sm["adder_time_ps"] = adder_ps;
  sm["cooling_power_uw"] = o.cooling_uw;
  sm["cooling_headroom"] = cooling_headroom(without_mev * 1e-3, adder_ps * 1e-12, o.cooling_uw * 1e-6);
  sm["reference_row_mismatches"] = static_cast<int>(reference_mismatches(ledger).size());

  Table rows{"ledger",
             {"transition", "charging_u", "eps_gamma", "gamma_u", "measurements", "measurement_ev",
              "charging_mev", "eps_mev", "gamma_mev"},
             {}};
  auto mev = [&](double x) { return units::gamma_units_to_meV(x, ledger.gamma_si_ueV); };
  auto push = [&](const std::string& name, const LedgerRow& r) {
    rows.rows.push_back({name, r.charging_u, r.eps_gamma, r.gamma_u, r.measurements,
                         r.measurement_ev, mev(r.charging_u * ledger.charging), mev(r.eps_gamma),
                         mev(r.gamma_u * ledger.charging)});
  };
  for (const auto& r : ledger.rows) push(r.transition, r);
  push("total", ledger.totals);
  a.tables.push_back(std::move(rows));

  EnergyLedger shown = ledger;
  if (!o.include_measurement) {
    shown.totals.measurement_ev = 0.0;
  }
  const auto cmp = comparison_table(shown);
  Table c{"comparison", {"technology", "variant", "ev_per_bitop", "order_log10"}, {}};
  for (const auto& r : cmp) {
    if (!o.include_measurement && r.variant == "measurement") continue;
    c.rows.push_back({r.technology, r.variant, r.ev_per_bitop, r.order});
  }
  a.tables.push_back(std::move(c));

  Table audit{"electron_flow", {"transition", "electrons_moved", "charged_electrons", "matches"}, {}};
  for (const auto& r : audit_electron_flow(s, model)) {
    audit.rows.push_back({r.transition, r.electrons_moved, r.charged_electrons, r.matches()});
  }
  a.tables.push_back(std::move(audit));

  a.text_files.emplace_back("energy_ledger.txt", ledger_text(ledger));
  return a;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-dot Fredkin gate and full-adder simulator", "qdsim"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "both";
  std::string encoding = "two-electron";
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key=value parameter file");
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--encoding", encoding, "two-electron or single-electron[:up|:down]");
  app.add_option("--set", sets, "parameter override key=value (repeatable)");

  GateOptions gate_o;
  auto* gate = app.add_subcommand("gate", "Fredkin gate analysis and trajectories");
  gate->add_option("--snapshots", gate_o.snapshots, "trajectory samples per input");
  gate->add_option("--t-final", gate_o.t_final, "trajectory length [hbar/Gamma], default t*");

  SweepOptions sweep_o;
  auto* sweep = app.add_subcommand("sweep", "Fidelity against U");
  sweep->add_option("--u-min", sweep_o.u_min);
  sweep->add_option("--u-max", sweep_o.u_max);
  sweep->add_option("--points", sweep_o.points);

  NoiseOptions noise_o;
  auto* noise = app.add_subcommand("noise", "Charge-noise ensembles");
  noise->add_option("kind", noise_o.kind, "quasistatic or highfreq")
      ->required()
      ->check(CLI::IsMember({"quasistatic", "highfreq"}));
  noise->add_option("--epsilon-bar", noise_o.qs.epsilon_bar, "quasistatic offset std [Gamma]");
  noise->add_option("--samples", noise_o.qs.n_samples);
  noise->add_option("--alpha", noise_o.qs.alpha);
  noise->add_option("--beta", noise_o.qs.beta);
  noise->add_flag("--include-eps0", noise_o.qs.include_eps0);
  noise->add_option("--method", noise_o.method, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  noise->add_option("--amplitude", noise_o.hf.amplitude, "high-frequency amplitude [Gamma]");
  noise->add_option("--dt", noise_o.hf.dt, "noise step [hbar/Gamma]");
  noise->add_option("--runs", noise_o.hf.n_runs);

  AdderOptions adder_o;
  auto* adder = app.add_subcommand("adder", "Full-adder protocol");
  adder->add_option("--p", adder_o.p);
  adder->add_option("--q", adder_o.q);
  adder->add_option("--r", adder_o.r);
  adder->add_flag("--all", adder_o.all, "all eight inputs");
  adder->add_option("--mode", adder_o.mode, "ideal or sampled");
  adder->add_option("--shots", adder_o.shots);
  adder->add_option("--schedule", adder_o.schedule_path, "pulse schedule JSON");

  EnergyOptions energy_o;
  auto* energy = app.add_subcommand("energy", "Energy ledger and comparison");
  energy->add_flag("--include-measurement", energy_o.include_measurement);
  energy->add_option("--bias-mv", energy_o.bias_mv);
  energy->add_option("--current-na", energy_o.current_na);
  energy->add_option("--measure-us", energy_o.measure_us);
  energy->add_option("--cooling-uw", energy_o.cooling_uw);
  energy->add_option("--adder-time-ps", energy_o.adder_time_ps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.params = load_params(config_path);
    if (!sets.empty()) {
      std::ostringstream lines;
      for (const auto& s : sets) lines << s << '\n';
      std::istringstream in(lines.str());
      cfg.params = parse_params(in, cfg.params);
    }
    cfg.params.validate();
    cfg.encoding = parse_encoding(encoding);
    cfg.seed = seed;
    cfg.output_dir = out_dir;
    cfg.format = format == "csv" ? Format::csv : format == "json" ? Format::json : Format::both;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
      throw std::runtime_error("cannot create output directory " + out_dir);
    }

    Artifact a;
    if (gate->parsed()) a = cmd_gate(cfg, gate_o);
    else if (sweep->parsed()) a = cmd_sweep(cfg, sweep_o);
    else if (noise->parsed()) a = cmd_noise(cfg, noise_o);
    else if (adder->parsed()) a = cmd_adder(cfg, adder_o);
    else a = cmd_energy(cfg, energy_o);
    emit(cfg, a, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    err << "error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qdsim::cli
