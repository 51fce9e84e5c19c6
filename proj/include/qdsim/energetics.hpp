#pragma once

// Energy bookkeeping for a pulse schedule plus the classical reference
// figures it is compared against.

#include "qdsim/adder.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qdsim {

struct MeasurementSetting {
  double bias_volts = 1e-3;
  double current_amperes = 30e-9;
  double duration_seconds = 10e-6;
};

struct CostModel {
  double barrier_toggle_cost = 1.0;    // [U] per Gamma or Gamma* switch, each way
  double electron_transfer_cost = 1.0;  // [U] per potential electron in or out of a dot
  /// Raise applied by a conditional detune [Gamma]; nullopt takes the value
  /// stored in the schedule step.
  std::optional<double> onsite_raise_cost;
  MeasurementSetting measurement;

  void validate() const;  // throws std::invalid_argument on negative costs
};

struct LedgerRow {
  std::string transition;    // e.g. "3->4", last row "6->0"
  double charging_u = 0.0;   // multiples of U
  double eps_gamma = 0.0;    // multiples of Gamma
  double gamma_u = 0.0;      // multiples of U
  double measurement_ev = 0.0;
  int measurements = 0;
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;
  LedgerRow totals;
  double charging = 21.83;  // U [Gamma]
  double gamma_si_ueV = 44.0;

  [[nodiscard]] double charging_meV() const;
  [[nodiscard]] double eps_meV() const;
  [[nodiscard]] double gamma_meV() const;
  /// Charging, eps and barrier columns converted to meV.
  [[nodiscard]] double total_without_measurement_meV() const;
  [[nodiscard]] double total_with_measurement_eV() const;
};

/// Rows close at every coherent interval and at every reset; loads,
/// measurements and detunes are charged to the row they precede. Throws
/// ScheduleError on a step kind it does not know.
[[nodiscard]] EnergyLedger energy_ledger(const PulseSchedule& schedule,
                                         const CostModel& model = {});

/// Published per-row counts for the default protocol.
struct ReferenceRow {
  const char* transition;
  double charging_u;
  double eps_gamma;
  double gamma_u;
  int measurements;
};
inline constexpr std::array<ReferenceRow, 7> kReferenceLedger{{
    {"0->1", 4, 0, 2, 0},
    {"1->2", 2, 0, 2, 0},
    {"2->3", 2, 0, 2, 0},
    {"3->4", 0, 20, 2, 1},
    {"4->5", 0, 0, 2, 0},
    {"5->6", 2, 0, 2, 0},
    {"6->0", 6, 0, 0, 1},
}};
/// Published measurement energy [eV].
inline constexpr double kReferenceMeasurementEv = 3.6e3;

/// Row indices whose counts differ from kReferenceLedger (a row-count
/// mismatch is reported as every index past the shorter table).
[[nodiscard]] std::vector<std::size_t> reference_mismatches(const EnergyLedger& ledger);

/// Electrons that actually move in or out of dots per ledger row when the
/// schedule runs on its logical inputs, next to the charged count.
struct ElectronFlowRow {
  std::string transition;
  int electrons_moved = 0;
  double charged_electrons = 0.0;  // charging_u / electron_transfer_cost
  [[nodiscard]] bool matches() const { return charged_electrons == electrons_moved; }
};

[[nodiscard]] std::vector<ElectronFlowRow> audit_electron_flow(const PulseSchedule& schedule,
                                                               const CostModel& model = {});

/// V I dt in eV.
[[nodiscard]] double measurement_cost(double volts, double amperes, double seconds);
[[nodiscard]] double measurement_cost(const MeasurementSetting& m);

/// 1 / (gflops_per_watt * 1e9 * bitops_per_flop) J, in eV.
[[nodiscard]] double flops_to_ev_per_bitop(double gflops_per_watt, double bitops_per_flop = 1000.0);

/// floor(cooling_power / (energy / time)).
[[nodiscard]] double cooling_headroom(double adder_energy_ev, double adder_time_s,
                                      double cooling_power_w);

struct ComparisonRow {
  std::string technology;
  std::string variant;
  double ev_per_bitop = 0.0;
  int order = 0;  // floor(log10(ev_per_bitop))
};

struct Baseline {
  std::string technology;
  double ev_per_bitop = 0.0;
};

/// Supercomputer (52.227 GFLOPS/W), transistor full-adder (1.3e3 eV PDP)
/// and QD cellular automaton (1 eV).
[[nodiscard]] std::vector<Baseline> default_baselines();

/// Baselines followed by the adder, once coherent only and once with the
/// ledger's measurements, one full addition counted as one bit operation.
[[nodiscard]] std::vector<ComparisonRow> comparison_table(
    const EnergyLedger& ledger, const std::vector<Baseline>& baselines = default_baselines());

[[nodiscard]] std::string ledger_csv(const EnergyLedger& ledger);
/// Fixed-width table: one line per row, a totals line in symbolic units and
/// one in meV / keV.
[[nodiscard]] std::string ledger_text(const EnergyLedger& ledger);
[[nodiscard]] std::string comparison_csv(const std::vector<ComparisonRow>& rows);
[[nodiscard]] std::string comparison_text(const std::vector<ComparisonRow>& rows);

}  // namespace qdsim
