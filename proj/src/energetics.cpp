#include "qdsim/energetics.hpp"

#include "qdsim/units.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qdsim {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

int electrons_per_charged_dot(Encoding enc) {
  return enc.variant == Encoding::Variant::two_electron ? 2 : 1;
}

void add(LedgerRow& into, const LedgerRow& r) {
  into.charging_u += r.charging_u;
  into.eps_gamma += r.eps_gamma;
  into.gamma_u += r.gamma_u;
  into.measurement_ev += r.measurement_ev;
  into.measurements += r.measurements;
}

bool empty(const LedgerRow& r) {
  return r.charging_u == 0.0 && r.eps_gamma == 0.0 && r.gamma_u == 0.0 && r.measurements == 0;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

}  // namespace

void CostModel::validate() const {
  if (barrier_toggle_cost < 0.0 || electron_transfer_cost < 0.0 ||
      (onsite_raise_cost && *onsite_raise_cost < 0.0)) {
    throw std::invalid_argument("cost model entries must be >= 0");
  }
  require_positive(measurement.bias_volts, "measurement bias");
  require_positive(measurement.current_amperes, "measurement current");
  require_positive(measurement.duration_seconds, "measurement duration");
}

double EnergyLedger::charging_meV() const {
  return units::gamma_units_to_meV(totals.charging_u * charging, gamma_si_ueV);
}
double EnergyLedger::eps_meV() const {
  return units::gamma_units_to_meV(totals.eps_gamma, gamma_si_ueV);
}
double EnergyLedger::gamma_meV() const {
  return units::gamma_units_to_meV(totals.gamma_u * charging, gamma_si_ueV);
}
double EnergyLedger::total_without_measurement_meV() const {
  return units::gamma_units_to_meV((totals.charging_u + totals.gamma_u) * charging + totals.eps_gamma,
                                   gamma_si_ueV);
}
double EnergyLedger::total_with_measurement_eV() const {
  return total_without_measurement_meV() * 1e-3 + totals.measurement_ev;
}

EnergyLedger energy_ledger(const PulseSchedule& schedule, const CostModel& model) {
  model.validate();
  EnergyLedger ledger;
  ledger.charging = schedule.params.charging;
  ledger.gamma_si_ueV = schedule.params.gamma_si_ueV;
  const double per_dot = electrons_per_charged_dot(schedule.encoding) * model.electron_transfer_cost;
  const double dem = measurement_cost(model.measurement);

  LedgerRow open;
  std::size_t cycle_start = 0;  // numbering restarts after each reset
  auto close = [&](bool wraps) {
    const int k = static_cast<int>(ledger.rows.size() - cycle_start);
    open.transition = std::to_string(k) + "->" + (wraps ? "0" : std::to_string(k + 1));
    ledger.rows.push_back(open);
    add(ledger.totals, open);
    open = LedgerRow{};
    if (wraps) cycle_start = ledger.rows.size();
  };

  for (const auto& step : schedule.steps) {
    if (std::holds_alternative<LoadStep>(step)) {
      open.charging_u += per_dot;
    } else if (std::holds_alternative<FredkinInterval>(step)) {
      open.gamma_u += 2.0 * model.barrier_toggle_cost;
      close(false);
    } else if (const auto* aux = std::get_if<AuxSwapInterval>(&step)) {
      open.eps_gamma += model.onsite_raise_cost.value_or(aux->conditional_detune);
      open.gamma_u += 2.0 * model.barrier_toggle_cost;
      close(false);
    } else if (std::holds_alternative<MeasureStep>(step)) {
      open.measurement_ev += dem;
      open.measurements += 1;
    } else if (std::holds_alternative<ResetStep>(step)) {
      open.charging_u += kNumSites * per_dot;
      close(true);
    } else {
      throw ScheduleError("energy_ledger: unknown step kind");
    }
  }
  if (!empty(open)) close(false);
  return ledger;
}

std::vector<std::size_t> reference_mismatches(const EnergyLedger& ledger) {
  std::vector<std::size_t> bad;
  const std::size_t n = std::max(ledger.rows.size(), kReferenceLedger.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= ledger.rows.size() || i >= kReferenceLedger.size()) {
      bad.push_back(i);
      continue;
    }
    const auto& a = ledger.rows[i];
    const auto& b = kReferenceLedger[i];
    if (a.transition != b.transition || a.charging_u != b.charging_u ||
        a.eps_gamma != b.eps_gamma || a.gamma_u != b.gamma_u || a.measurements != b.measurements) {
      bad.push_back(i);
    }
  }
  return bad;
}

std::vector<ElectronFlowRow> audit_electron_flow(const PulseSchedule& schedule,
                                                 const CostModel& model) {
  const EnergyLedger ledger = energy_ledger(schedule, model);
  const Encoding enc = schedule.encoding;
  std::vector<ElectronFlowRow> out;
  LogicalBits cur{1, 1, 1};
  std::map<std::string, int> regs;
  int moved = 0;
  auto close = [&] {
    const std::size_t k = out.size();
    ElectronFlowRow r;
    r.electrons_moved = moved;
    if (k < ledger.rows.size()) {
      r.transition = ledger.rows[k].transition;
      r.charged_electrons = model.electron_transfer_cost > 0.0
                                ? ledger.rows[k].charging_u / model.electron_transfer_cost
                                : 0.0;
    }
    out.push_back(r);
    moved = 0;
  };
  auto charge = [&](LogicalBits b, int dot) { return logical_to_fock(b, enc).site_occupancy(dot); };

  for (const auto& step : schedule.steps) {
    if (const auto* load = std::get_if<LoadStep>(&step)) {
      int bit = 0;
      switch (load->source) {
        case BitSource::p: bit = schedule.inputs.p; break;
        case BitSource::q: bit = schedule.inputs.q; break;
        case BitSource::r: bit = schedule.inputs.r; break;
        case BitSource::const0: bit = 0; break;
        case BitSource::const1: bit = 1; break;
        case BitSource::parity_register: bit = regs.at("parity"); break;
      }
      const LogicalBits next = cur.with(load->dot, bit);
      moved += std::abs(charge(next, load->dot) - charge(cur, load->dot));
      cur = next;
    } else if (std::holds_alternative<FredkinInterval>(step)) {
      cur = fredkin_output(cur);
      close();
    } else if (std::holds_alternative<AuxSwapInterval>(step)) {
      cur = {cur.t1, cur.c, cur.t2};
      close();
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      regs[m->output] = cur.bit(m->dot);
    } else {
      for (int d = 0; d < kNumSites; ++d) moved += charge(cur, d);
      cur = {1, 1, 1};
      close();
    }
  }
  if (out.size() < ledger.rows.size()) close();
  return out;
}

double measurement_cost(double volts, double amperes, double seconds) {
  require_positive(volts, "bias voltage");
  require_positive(amperes, "current");
  require_positive(seconds, "measurement time");
  return units::joule_to_ev(volts * amperes * seconds);
}

double measurement_cost(const MeasurementSetting& m) {
  return measurement_cost(m.bias_volts, m.current_amperes, m.duration_seconds);
}

double flops_to_ev_per_bitop(double gflops_per_watt, double bitops_per_flop) {
  require_positive(gflops_per_watt, "GFLOPS/W");
  require_positive(bitops_per_flop, "bit operations per FLOP");
  return units::joule_to_ev(1.0 / (gflops_per_watt * 1e9 * bitops_per_flop));
}

double cooling_headroom(double adder_energy_ev, double adder_time_s, double cooling_power_w) {
  require_positive(adder_energy_ev, "adder energy");
  require_positive(adder_time_s, "adder time");
  require_positive(cooling_power_w, "cooling power");
  const double watts = units::ev_to_joule(adder_energy_ev) / adder_time_s;
  return std::floor(cooling_power_w / watts);
}

std::vector<Baseline> default_baselines() {
  return {
      {"modern_supercomputers", flops_to_ev_per_bitop(52.227)},
      {"transistor_full_adders", 1.3e3},
      {"qd_cellular_automata", 1.0},
  };
}

std::vector<ComparisonRow> comparison_table(const EnergyLedger& ledger,
                                            const std::vector<Baseline>& baselines) {
  auto order = [](double x) { return x > 0.0 ? static_cast<int>(std::floor(std::log10(x))) : 0; };
  std::vector<ComparisonRow> rows;
  for (const auto& b : baselines) rows.push_back({b.technology, "", b.ev_per_bitop, order(b.ev_per_bitop)});
  const double coherent = ledger.total_without_measurement_meV() * 1e-3;
  const double with_m = ledger.total_with_measurement_eV();
  rows.push_back({"qd_full_adder", "coherent", coherent, order(coherent)});
  rows.push_back({"qd_full_adder", "measurement", with_m, order(with_m)});
  return rows;
}

std::string ledger_csv(const EnergyLedger& ledger) {
  std::ostringstream os;
  os << "transition,charging_u,eps_gamma,gamma_u,measurements,measurement_ev,"
        "charging_mev,eps_mev,gamma_mev\n";
  auto line = [&](const LedgerRow& r) {
    os << r.transition << ',' << fmt(r.charging_u) << ',' << fmt(r.eps_gamma) << ','
       << fmt(r.gamma_u) << ',' << r.measurements << ',' << fmt(r.measurement_ev) << ','
       << fmt(units::gamma_units_to_meV(r.charging_u * ledger.charging, ledger.gamma_si_ueV)) << ','
       << fmt(units::gamma_units_to_meV(r.eps_gamma, ledger.gamma_si_ueV)) << ','
       << fmt(units::gamma_units_to_meV(r.gamma_u * ledger.charging, ledger.gamma_si_ueV)) << '\n';
  };
  for (const auto& r : ledger.rows) line(r);
  LedgerRow t = ledger.totals;
  t.transition = "total";
  line(t);
  return os.str();
}

std::string ledger_text(const EnergyLedger& ledger) {
  std::ostringstream os;
  auto sym = [](double x, const char* unit) {
    if (x == 0.0) return std::string("-");
    std::ostringstream s;
    s << x << unit;
    return s.str();
  };
  auto meas = [](int n) {
    if (n == 0) return std::string("-");
    return n == 1 ? std::string("dE_M") : std::to_string(n) + "dE_M";
  };
  const int w = 12;
  os << std::left << std::setw(w) << "step" << std::setw(w) << "charging" << std::setw(w) << "eps"
     << std::setw(w) << "gamma" << "measurement\n";
  for (const auto& r : ledger.rows) {
    os << std::setw(w) << r.transition << std::setw(w) << sym(r.charging_u, "U") << std::setw(w)
       << sym(r.eps_gamma, "G") << std::setw(w) << sym(r.gamma_u, "U") << meas(r.measurements)
       << '\n';
  }
  const auto& t = ledger.totals;
  os << std::setw(w) << "total" << std::setw(w) << sym(t.charging_u, "U") << std::setw(w)
     << sym(t.eps_gamma, "G") << std::setw(w) << sym(t.gamma_u, "U") << meas(t.measurements) << '\n';
  std::ostringstream a, b, c, d;
  a << std::fixed << std::setprecision(2) << ledger.charging_meV() << " meV";
  b << std::fixed << std::setprecision(2) << ledger.eps_meV() << " meV";
  c << std::fixed << std::setprecision(2) << ledger.gamma_meV() << " meV";
  d << std::fixed << std::setprecision(2) << t.measurement_ev * 1e-3 << " keV";
  os << std::setw(w) << "" << std::setw(w) << a.str() << std::setw(w) << b.str() << std::setw(w)
     << c.str() << d.str() << '\n';
  os << "total without measurement: " << std::fixed << std::setprecision(2)
     << ledger.total_without_measurement_meV() << " meV\n";
  return os.str();
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "technology,variant,ev_per_bitop,order_log10\n";
  for (const auto& r : rows) {
    os << r.technology << ',' << r.variant << ',' << fmt(r.ev_per_bitop) << ',' << r.order << '\n';
  }
  return os.str();
}

std::string comparison_text(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(26) << "technology" << std::setw(14) << "variant"
     << "cost per bit op (eV)\n";
  for (const auto& r : rows) {
    os << std::setw(26) << r.technology << std::setw(14) << r.variant << "~10^" << r.order << "  ("
       << std::setprecision(3) << r.ev_per_bitop << ")\n";
  }
  return os.str();
}

}  // namespace qdsim
