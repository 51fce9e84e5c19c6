#include "qdsim/fredkin.hpp"

#include "qdsim/parallel.hpp"
#include "qdsim/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qdsim {

ModeFrequencies mode_frequencies(const HubbardParams& params) {
  const double detuning = params.charging - params.capacitive;
  const double g = params.gamma12;
  ModeFrequencies f;
  f.omega1 = std::sqrt(16.0 * g * g + detuning * detuning);
  f.omega2 = 0.5 * (detuning + f.omega1);
  f.omega3 = 0.5 * (detuning - f.omega1);
  return f;
}

GateTime gate_time(const HubbardParams& params, Encoding encoding) {
  double t = 0.0;
  if (encoding.variant == Encoding::Variant::single_electron) {
    if (params.gamma12 == 0.0) throw std::invalid_argument("gate_time: gamma12 is zero");
    t = std::numbers::pi / (2.0 * std::abs(params.gamma12));
  } else {
    const double denom = std::abs(2.0 * mode_frequencies(params).omega3);
    if (denom == 0.0) throw std::invalid_argument("gate_time: degenerate parameters");
    t = 2.0 * std::numbers::pi / denom;
  }
  return {t, units::natural_time_to_ps(t, params.gamma_si_ueV)};
}

GateTime slow_component_period(const HubbardParams& params) {
  const double t = 2.0 * std::numbers::pi / std::abs(mode_frequencies(params).omega3);
  return {t, units::natural_time_to_ps(t, params.gamma_si_ueV)};
}

double leakage_probability_analytic(double t, const HubbardParams& params) {
  if (params.eps[1] != params.eps[2]) {
    throw std::invalid_argument("analytic leakage requires identical target dots (eps1 == eps2)");
  }
  const double w = mode_frequencies(params).omega1;
  return 2.0 * (1.0 - std::cos(w * t)) / (w * w);
}

LogicalBits fredkin_output(LogicalBits in) {
  return in.c == 1 ? LogicalBits{in.c, in.t2, in.t1} : in;
}

FredkinGate::FredkinGate(const HubbardParams& params, Encoding encoding,
                         std::optional<double> duration)
    : params_(params),
      encoding_(encoding),
      hamiltonian_(build_fredkin_hamiltonian(params, build_basis())),
      propagator_(hamiltonian_) {
  if (duration) {
    if (!(*duration >= 0.0)) throw std::invalid_argument("gate duration must be >= 0");
    time_ = {*duration, units::natural_time_to_ps(*duration, params.gamma_si_ueV)};
  } else {
    time_ = gate_time(params, encoding);
  }
}

StateVector FredkinGate::input_state(LogicalBits in) const {
  return StateVector::basis_state(hamiltonian_.basis(), logical_to_fock(in, encoding_));
}

StateVector FredkinGate::evolve(LogicalBits in, double t) const {
  return propagator_.evolve(input_state(in), t);
}

double FredkinGate::output_population(LogicalBits in) const {
  return evolve(in, time_.natural).population(logical_to_fock(fredkin_output(in), encoding_));
}

std::array<double, 8> FredkinGate::fidelities() const {
  std::array<double, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = output_population(LogicalBits::from_index(i));
  return out;
}

double gate_fidelity(const HubbardParams& params, Encoding encoding) {
  const auto f = FredkinGate(params, encoding).fidelities();
  return std::accumulate(f.begin(), f.end(), 0.0) / 8.0;
}

bool TruthTableReport::all_correct() const {
  if (rows.size() != 8) return false;
  for (const auto& r : rows) {
    if (!r.correct()) return false;
  }
  return true;
}

TruthTableReport truth_table(const HubbardParams& params, Encoding encoding,
                             double leakage_threshold) {
  const FredkinGate gate(params, encoding);
  TruthTableReport report;
  for (int i = 0; i < 8; ++i) {
    const LogicalBits in = LogicalBits::from_index(i);
    const StateVector out = gate.evolve(in, gate.time().natural);
    TruthTableRow row;
    row.input = in;
    row.expected = fredkin_output(in);
    row.target_population = out.population(logical_to_fock(row.expected, encoding));

    double best = -1.0;
    std::optional<LogicalBits> best_bits;
    for (std::size_t k = 0; k < out.basis.size(); ++k) {
      const double p = std::norm(out.amplitudes(static_cast<Eigen::Index>(k)));
      const auto logical = fock_to_logical(out.basis[k], encoding);
      if (!logical) {
        row.leakage += p;
        row.leakage_flag = row.leakage_flag || p > leakage_threshold;
      }
      if (p > best) {
        best = p;
        best_bits = logical;
      }
    }
    row.leakage_flag = row.leakage_flag || row.leakage > leakage_threshold;
    row.argmax_output = best_bits;
    report.rows.push_back(row);
  }
  return report;
}

std::size_t USweep::nearest_local_max(double charging_ref) const {
  const std::size_t n = fidelity.size();
  std::size_t best = argmax;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || fidelity[i] >= fidelity[i - 1];
    const bool right = i + 1 == n || fidelity[i] >= fidelity[i + 1];
    if (!(left && right)) continue;
    const double d = std::abs(charging[i] - charging_ref);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return best;
}

USweep u_sweep(const HubbardParams& params, double u_min, double u_max, int n_points,
               Encoding encoding) {
  if (n_points < 1) throw std::invalid_argument("u_sweep: need at least one point");
  if (!(u_min >= 0.0) || !(u_max >= u_min)) {
    throw std::invalid_argument("u_sweep: need 0 <= u_min <= u_max");
  }
  if (n_points == 1 && u_max != u_min) {
    throw std::invalid_argument("u_sweep: a single point needs u_min == u_max");
  }
  USweep sweep;
  const auto n = static_cast<std::size_t>(n_points);
  sweep.charging.resize(n);
  sweep.gate_time.resize(n);
  sweep.fidelity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sweep.charging[i] = n == 1 ? u_min : u_min + (u_max - u_min) * static_cast<double>(i) /
                                                     static_cast<double>(n - 1);
  }
  parallel_for(n, [&](std::size_t i) {
    HubbardParams p = params;
    p.charging = sweep.charging[i];
    const FredkinGate gate(p, encoding);
    const auto f = gate.fidelities();
    sweep.gate_time[i] = gate.time().natural;
    sweep.fidelity[i] = std::accumulate(f.begin(), f.end(), 0.0) / 8.0;
  });
  // First maximum wins on ties.
  for (std::size_t i = 1; i < n; ++i) {
    if (sweep.fidelity[i] > sweep.fidelity[sweep.argmax]) sweep.argmax = i;
  }
  return sweep;
}

GateAnalysis analyze_gate(const HubbardParams& params, Encoding encoding) {
  const FredkinGate gate(params, encoding);
  GateAnalysis a;
  a.t_star = gate.time();
  a.slow_period = slow_component_period(params);
  a.omega = mode_frequencies(params);
  a.input_fidelity = gate.fidelities();
  a.fidelity = std::accumulate(a.input_fidelity.begin(), a.input_fidelity.end(), 0.0) / 8.0;
  const StateVector at_tstar = gate.evolve(kSwapInput, a.t_star.natural);
  a.leakage_at_tstar = at_tstar.leakage(encoding);
  a.leakage_per_configuration_at_tstar = at_tstar.population(kSplitPair);
  if (encoding.variant == Encoding::Variant::two_electron && params.eps[1] == params.eps[2]) {
    a.leakage_analytic_at_tstar = leakage_probability_analytic(a.t_star.natural, params);
  }
  return a;
}

}  // namespace qdsim
