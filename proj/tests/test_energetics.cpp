#include "qdsim/energetics.hpp"
#include "qdsim/units.hpp"

#include <doctest.h>

using namespace qdsim;

namespace {

const PulseSchedule& schedule() {
  static const PulseSchedule s = default_schedule({0, 1, 1}, {});
  return s;
}

}  // namespace

TEST_SUITE("energetics") {

TEST_CASE("ledger reproduces the reference table row by row") {
  const EnergyLedger l = energy_ledger(schedule());
  REQUIRE(l.rows.size() == 7);
  CHECK(reference_mismatches(l).empty());
  CHECK(l.rows.back().transition == "6->0");
  CHECK(l.totals.charging_u == 16.0);
  CHECK(l.totals.eps_gamma == 20.0);
  CHECK(l.totals.gamma_u == 12.0);
  CHECK(l.totals.measurements == 2);
}

TEST_CASE("ledger totals in SI") {
  const EnergyLedger l = energy_ledger(schedule());
  // 28 U + 20 Gamma with U = 21.83 * 0.044 meV.
  CHECK(l.total_without_measurement_meV() == doctest::Approx(28 * 21.83 * 0.044 + 20 * 0.044));
  CHECK(l.total_without_measurement_meV() == doctest::Approx(27.77456).epsilon(1e-12));
  const double dem = measurement_cost(1e-3, 30e-9, 10e-6);
  CHECK(l.totals.measurement_ev == doctest::Approx(2.0 * dem));
  CHECK(l.total_with_measurement_eV() ==
        doctest::Approx(27.77456e-3 + 2.0 * dem).epsilon(1e-12));
  const double summed = l.charging_meV() + l.eps_meV() + l.gamma_meV();
  CHECK(std::abs(summed - l.total_without_measurement_meV()) <=
        1e-12 * l.total_without_measurement_meV());
}

TEST_CASE("column totals are row sums") {
  const EnergyLedger l = energy_ledger(schedule());
  LedgerRow sum;
  for (const auto& r : l.rows) {
    sum.charging_u += r.charging_u;
    sum.eps_gamma += r.eps_gamma;
    sum.gamma_u += r.gamma_u;
    sum.measurement_ev += r.measurement_ev;
  }
  CHECK(sum.charging_u == l.totals.charging_u);
  CHECK(sum.eps_gamma == l.totals.eps_gamma);
  CHECK(sum.gamma_u == l.totals.gamma_u);
  CHECK(sum.measurement_ev == doctest::Approx(l.totals.measurement_ev));
}

TEST_CASE("empty schedule") {
  const EnergyLedger l = energy_ledger(PulseSchedule{});
  CHECK(l.rows.empty());
  CHECK(l.totals.charging_u == 0.0);
  CHECK(l.total_without_measurement_meV() == 0.0);
  CHECK(l.total_with_measurement_eV() == 0.0);
}

TEST_CASE("ledger is additive over concatenation") {
  const PulseSchedule& a = schedule();
  PulseSchedule b = default_schedule({1, 1, 0}, {});
  PulseSchedule ab = a;
  ab.steps.insert(ab.steps.end(), b.steps.begin(), b.steps.end());
  const EnergyLedger la = energy_ledger(a);
  const EnergyLedger lb = energy_ledger(b);
  const EnergyLedger lab = energy_ledger(ab);
  REQUIRE(lab.rows.size() == la.rows.size() + lb.rows.size());
  for (std::size_t i = 0; i < lb.rows.size(); ++i) {
    CHECK(lab.rows[la.rows.size() + i].transition == lb.rows[i].transition);
  }
  CHECK(lab.totals.charging_u == la.totals.charging_u + lb.totals.charging_u);
  CHECK(lab.totals.eps_gamma == la.totals.eps_gamma + lb.totals.eps_gamma);
  CHECK(lab.totals.gamma_u == la.totals.gamma_u + lb.totals.gamma_u);
  CHECK(lab.totals.measurements == la.totals.measurements + lb.totals.measurements);
}

TEST_CASE("cost model knobs") {
  CostModel m;
  m.onsite_raise_cost = 5.0;
  CHECK(energy_ledger(schedule(), m).totals.eps_gamma == 5.0);
  m = {};
  m.barrier_toggle_cost = 0.5;
  CHECK(energy_ledger(schedule(), m).totals.gamma_u == 6.0);
  m = {};
  m.electron_transfer_cost = -1.0;
  CHECK_THROWS_AS((void)energy_ledger(schedule(), m), std::invalid_argument);
  m = {};
  m.measurement.duration_seconds = 0.0;
  CHECK_THROWS_AS((void)energy_ledger(schedule(), m), std::invalid_argument);
}

TEST_CASE("Gamma scale enters linearly") {
  PulseSchedule s = schedule();
  s.params.gamma_si_ueV = 22.0;
  CHECK(energy_ledger(s).total_without_measurement_meV() ==
        doctest::Approx(energy_ledger(schedule()).total_without_measurement_meV() / 2.0));
}

TEST_CASE("electron-flow audit") {
  const auto audit = audit_electron_flow(schedule());
  REQUIRE(audit.size() == 7);
  CHECK(audit[0].charged_electrons == 4.0);
  CHECK(audit[0].electrons_moved == 4);  // p = 0 and the fixed 0 both load pairs
  CHECK(audit[1].electrons_moved == 2);  // q = 1 empties the pair on dot 0
  CHECK(audit[2].electrons_moved == 0);  // r = 1 onto a dot that is already empty
  bool any_mismatch = false;
  for (const auto& r : audit) any_mismatch = any_mismatch || !r.matches();
  CHECK(any_mismatch);
}

TEST_CASE("measurement cost") {
  const double e = measurement_cost(1e-3, 30e-9, 10e-6);
  CHECK(e == doctest::Approx(3e-16 / 1.602176634e-19).epsilon(1e-12));
  CHECK(e == doctest::Approx(1872.45).epsilon(1e-5));
  CHECK(measurement_cost(1e-3, 30e-9, 20e-6) == doctest::Approx(2.0 * e));
  CHECK(kReferenceMeasurementEv == 3600.0);
  CHECK_THROWS_AS((void)measurement_cost(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)measurement_cost(1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("FLOPS per watt to eV per bit operation") {
  CHECK(flops_to_ev_per_bitop(52.227) == doctest::Approx(1.19e5).epsilon(0.01));
  CHECK(flops_to_ev_per_bitop(62.684) == doctest::Approx(9.95e4).epsilon(0.01));
  CHECK(flops_to_ev_per_bitop(52.227, 1.0) ==
        doctest::Approx(1000.0 * flops_to_ev_per_bitop(52.227)));
  CHECK_THROWS_AS((void)flops_to_ev_per_bitop(0.0), std::invalid_argument);
}

TEST_CASE("cooling headroom") {
  const double n = cooling_headroom(28e-3, 858e-12, 500e-6);
  CHECK(n >= 9e7);
  CHECK(n <= 1e8);
  CHECK(n == std::floor(n));
  CHECK(cooling_headroom(28e-3, 858e-12, 1500e-6) == doctest::Approx(2.87e8).epsilon(0.01));
  CHECK(cooling_headroom(28e-3, 858e-12, 1000e-6) == doctest::Approx(2.0 * n).epsilon(1e-8));
  CHECK_THROWS_AS((void)cooling_headroom(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("unit conversions round-trip") {
  for (double ev : {1e-3, 1.0, 3.6e3, 1.19e5}) {
    CHECK(std::abs(units::joule_to_ev(units::ev_to_joule(ev)) - ev) <= 1e-15 * ev);
  }
}

TEST_CASE("comparison table") {
  const auto rows = comparison_table(energy_ledger(schedule()));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].order == 5);
  CHECK(rows[1].order == 3);
  CHECK(rows[2].order == 0);
  CHECK(rows[3].variant == "coherent");
  CHECK(rows[3].order == -2);
  CHECK(rows[4].variant == "measurement");
  CHECK(rows[4].order == 3);
}

TEST_CASE("text and CSV renderings") {
  const EnergyLedger l = energy_ledger(schedule());
  const std::string csv = ledger_csv(l);
  CHECK(csv.rfind("transition,charging_u,eps_gamma,gamma_u,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  const std::string txt = ledger_text(l);
  CHECK(txt.find("16U") != std::string::npos);
  CHECK(txt.find("20G") != std::string::npos);
  CHECK(txt.find("2dE_M") != std::string::npos);
  CHECK(txt.find("27.77 meV") != std::string::npos);
  const auto cmp = comparison_table(l);
  CHECK(comparison_csv(cmp).rfind("technology,variant,ev_per_bitop,order_log10\n", 0) == 0);
  CHECK(comparison_text(cmp).find("~10^-2") != std::string::npos);
}

}
