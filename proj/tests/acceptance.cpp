// Acceptance runner: one PASS/FAIL line per criterion.
//   qdsim_acceptance            all criteria
//   qdsim_acceptance --only N   criterion N alone (exit code reflects it)

#include "properties.hpp"
#include "qdsim/adder.hpp"
#include "qdsim/energetics.hpp"
#include "qdsim/fredkin.hpp"
#include "qdsim/noise.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace qdsim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within_rel(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::abs(ref); }

Outcome gate_time_check() {
  const GateTime t = gate_time({});
  return {within_rel(t.ps, 142.9, 0.01), fmt("t* = %.4f ps (%.6f hbar/Gamma)", t.ps, t.natural)};
}

Outcome fidelity_check() {
  const double f = gate_fidelity({});
  return {f >= 0.999, fmt("mean fidelity %.10f", f)};
}

Outcome sweep_check() {
  const HubbardParams p;
  const USweep sw = u_sweep(p, 18.0, 25.0, 701);
  const std::size_t local = sw.nearest_local_max(p.charging);
  const double u = sw.argmax_charging();
  return {std::abs(u - p.charging) <= 0.5,
          fmt("global argmax U = %.2f (F = %.6f); local max near %.2f at U = %.2f (F = %.6f)", u,
              sw.max_fidelity(), p.charging, sw.charging[local], sw.fidelity[local])};
}

Outcome truth_table_check() {
  // Fredkin: control c, targets (t1, t2) swap iff c = 1.
  constexpr int kFredkin[8][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                                  {1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
  // Adder (p, q, r) -> (parity, carry).
  constexpr int kAdder[8][2] = {{0, 0}, {1, 0}, {1, 0}, {0, 1}, {1, 0}, {0, 1}, {0, 1}, {1, 1}};
  const TruthTableReport tt = truth_table({});
  int fredkin_ok = 0;
  for (const auto& r : tt.rows) {
    const int* e = kFredkin[r.input.index()];
    if (r.argmax_output && r.argmax_output->c == e[0] && r.argmax_output->t1 == e[1] &&
        r.argmax_output->t2 == e[2]) {
      ++fredkin_ok;
    }
  }
  int adder_ok = 0;
  const auto rows = adder_truth_table({});
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].parity == kAdder[k][0] && rows[k].carry == kAdder[k][1]) ++adder_ok;
  }
  return {fredkin_ok == 8 && adder_ok == 8 && rows.size() == 8,
          fmt("Fredkin %d/8, adder %d/8", fredkin_ok, adder_ok)};
}

Outcome adder_fidelity_check() {
  const auto rows = adder_truth_table({});
  double worst = 0.0;
  int high = 0;
  std::string list;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    worst = std::max(worst, std::abs(rows[k].fidelity - kReferenceAdderFidelity[k]));
    if (rows[k].fidelity >= 0.99) ++high;
    list += fmt("%s%.4f", k ? " " : "", rows[k].fidelity);
  }
  const double f000 = rows.at(0).fidelity;
  return {worst <= 0.005 && high >= 7 && f000 >= 0.98 && f000 <= 0.99,
          fmt("[%s] max |dF| = %.5f, %d rows >= 0.99", list.c_str(), worst, high)};
}

Outcome leakage_check() {
  const HubbardParams p;
  const Encoding enc = Encoding::two_electron();
  const FredkinGate gate(p, enc);
  const double tstar = gate.time().natural;
  const EvolutionResult ev = evolve_sampled(gate.hamiltonian(), gate.input_state(kSwapInput), tstar, 1001);
  double sum2 = 0.0;
  double per_config2 = 0.0;
  for (std::size_t i = 0; i < ev.times.size(); ++i) {
    const double formula = leakage_probability_analytic(ev.times[i], p);
    sum2 += std::pow(ev.states[i].leakage(enc) - formula, 2);
    per_config2 += std::pow(ev.states[i].population(kSplitPair) - formula, 2);
  }
  const double n = static_cast<double>(ev.times.size());
  const double rms = std::sqrt(sum2 / n);
  const double rms_config = std::sqrt(per_config2 / n);
  const double end = ev.states.back().leakage(enc);
  return {rms <= 1e-6 && end <= 1e-3,
          fmt("non-codeword RMS vs formula %.3e, at t* %.3e (formula %.3e); "
              "single-configuration RMS %.3e",
              rms, end, leakage_probability_analytic(tstar, p), rms_config)};
}

Outcome highfreq_check() {
  HighFrequencyModel m;
  m.n_runs = 1000;
  const NoiseReport r = high_frequency_ensemble({}, m);
  const double change = std::abs(r.change());
  const bool same_order = r.std > 0.0 && std::abs(std::log10(r.std / change)) <= 1.0;
  return {change >= 2e-4 && change <= 5e-3 && same_order,
          fmt("mean change %.3e, std %.3e, dt %.5f (%zu steps)", r.change(), r.std, r.dt,
              r.times.size() - 1)};
}

Outcome quasistatic_check() {
  const HubbardParams p;
  QuasistaticModel m;
  m.n_samples = 10000;
  const NoiseReport r = quasistatic_average_mc(p, m);
  const LambdaFit fit = fit_lambda(r.samples);
  const double formula = lambda_coefficient(p, m.alpha, m.beta);
  const double analytic = quasistatic_average_analytic(p, m.epsilon_bar);
  return {within_rel(fit.lambda, formula, 0.2),
          fmt("fitted Lambda %.3f vs formula %.3f; change MC %.3e, closed form %.3e", fit.lambda,
              formula, r.change(), analytic - r.p0)};
}

Outcome ledger_check() {
  const EnergyLedger l = energy_ledger(default_schedule({0, 0, 0}, {}));
  const double dem = measurement_cost(MeasurementSetting{});
  const double mev = l.total_without_measurement_meV();
  const bool exact = l.totals.charging_u == 16.0 && l.totals.eps_gamma == 20.0 &&
                     l.totals.gamma_u == 12.0 && l.totals.measurements == 2 &&
                     l.totals.measurement_ev == 2.0 * dem;
  return {exact && within_rel(mev, 27.77, 0.005),
          fmt("%gU, %gGamma, %gU, %d dE_M; %.5f meV", l.totals.charging_u, l.totals.eps_gamma,
              l.totals.gamma_u, l.totals.measurements, mev)};
}

Outcome baseline_check() {
  const double a = flops_to_ev_per_bitop(52.227);
  const double b = flops_to_ev_per_bitop(62.684);
  const double n = cooling_headroom(28e-3, 858e-12, 500e-6);
  return {within_rel(a, 1.19e5, 0.01) && within_rel(b, 9.95e4, 0.01) && n >= 9e7 && n <= 1e8,
          fmt("%.4e and %.4e eV/bit-op; headroom %.0f", a, b, n)};
}

Outcome single_electron_check() {
  const Encoding enc = Encoding::single_electron();
  const HubbardParams p;
  const FredkinGate gate(p, enc);
  const double ratio = gate_time(p).ps / gate.time().ps;
  double outside = 0.0;
  for (int k = 0; k < 8; ++k) {
    const LogicalBits in{(k >> 2) & 1, (k >> 1) & 1, k & 1};
    const Sector sector{logical_to_fock(in, enc).electrons(), logical_to_fock(in, enc).sz2()};
    for (double t : {0.3, 1.0, gate.time().natural, 7.7}) {
      const StateVector psi = gate.evolve(in, t);
      for (std::size_t i = 0; i < psi.basis.size(); ++i) {
        if (!sector.contains(psi.basis[i])) outside += std::norm(psi.amplitudes(static_cast<Eigen::Index>(i)));
      }
    }
  }
  return {within_rel(gate.time().ps, 23.5, 0.005) && ratio >= 5.5 && ratio <= 6.5 && outside == 0.0,
          fmt("t* = %.3f ps, ratio %.3f, population outside sector %.1e", gate.time().ps, ratio,
              outside)};
}

Outcome property_check() {
  const double anti = props::anticommutator_residual();
  const double herm = props::hermiticity_residual(20, 101);
  const props::Conservation cons = props::conservation_residual(20, 102);
  const double sector = props::sector_leakage(20, 103);
  const double comp = props::composition_residual(20, 104);
  const double rk4 = props::rk4_deviation(20, 105);
  return {anti == 0.0 && herm <= 1e-13 && cons.norm <= 1e-10 && cons.energy <= 1e-10 &&
              sector == 0.0 && comp <= 1e-10 && rk4 <= 1e-8,
          fmt("anticommutator %.1e, hermiticity %.1e, norm %.1e, energy %.1e, sector %.1e, "
              "composition %.1e, RK4 %.1e",
              anti, herm, cons.norm, cons.energy, sector, comp, rk4)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"gate time", gate_time_check},
      {"Fredkin fidelity", fidelity_check},
      {"U-sweep optimum", sweep_check},
      {"truth tables", truth_table_check},
      {"adder fidelities", adder_fidelity_check},
      {"analytic leakage", leakage_check},
      {"high-frequency noise", highfreq_check},
      {"quasistatic noise", quasistatic_check},
      {"energy ledger", ledger_check},
      {"baseline conversions", baseline_check},
      {"single-electron mode", single_electron_check},
      {"property suites", property_check},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %-22s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].name,
                o.detail.c_str(), secs);
  }
  return failed == 0 ? 0 : 1;
}
