#pragma once

// Three-dot full adder driven as a pulse schedule: dot 0 is reloaded with
// input bits between Fredkin intervals, dot 1 is measured for parity and
// carry, and one auxiliary 0-1 swap moves the parity into the control dot.

#include "qdsim/fredkin.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qdsim {

enum class BitSource { p, q, r, const0, const1, parity_register };

[[nodiscard]] std::string to_string(BitSource s);
[[nodiscard]] BitSource parse_bit_source(const std::string& s);

struct LoadStep {
  int dot = 0;
  BitSource source = BitSource::const1;
};

struct FredkinInterval {
  double duration = 0.0;  // hbar/Gamma
};

/// Gamma off, Gamma* on; eps0 raised by conditional_detune when the parity
/// register holds 1.
struct AuxSwapInterval {
  double duration = 0.0;
  double conditional_detune = 0.0;  // Gamma
};

struct MeasureStep {
  int dot = 1;
  std::string output;  // register name, e.g. "parity" or "carry"
};

/// Empties every dot, returning the register to its starting configuration.
struct ResetStep {};

using ProtocolStep =
    std::variant<LoadStep, FredkinInterval, AuxSwapInterval, MeasureStep, ResetStep>;

struct AdderInputs {
  int p = 0;
  int q = 0;
  int r = 0;
  friend bool operator==(const AdderInputs&, const AdderInputs&) = default;
};

struct PulseSchedule {
  std::vector<ProtocolStep> steps;
  HubbardParams params;  // gamma01 is the Gamma* used during aux swaps
  AdderInputs inputs;
  Encoding encoding = Encoding::two_electron();
};

/// Schedule or parameters cannot be executed (bad dot, non-positive
/// duration, register read before it is written, no Gamma* for a swap).
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AuxSwapCalibration {
  double duration = 0.0;          // hbar/Gamma
  double fidelity_parity0 = 0.0;  // 0-1 swap with dot 2 holding logical 1
  double fidelity_parity1 = 0.0;  // 0-1 swap with dot 2 holding logical 0, eps0 raised
  std::vector<double> scan_times;
  std::vector<double> scan_fidelity;  // mean of the two branches
};

/// No duration in the window reaches the required swap fidelity.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, AuxSwapCalibration diagnostic)
      : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}
  [[nodiscard]] const AuxSwapCalibration& diagnostic() const { return diagnostic_; }

 private:
  AuxSwapCalibration diagnostic_;
};

/// Scans (0, window_factor * t*] for the duration that maximizes the mean
/// 0-1 swap fidelity over both parity branches (Gamma = 0, Gamma* =
/// params.gamma01, eps0 + 2V on the parity-1 branch), then refines the best
/// grid point by golden-section search.
[[nodiscard]] AuxSwapCalibration aux_swap_calibration(const HubbardParams& params,
                                                      double window_factor = 4.0,
                                                      int scan_points = 4000,
                                                      double min_fidelity = 0.9);

/// `params` with gamma01 set to gamma12 when it is zero.
[[nodiscard]] HubbardParams with_default_aux_coupling(HubbardParams params);

/// The seven-phase protocol: load p and 0, Fredkin; load q, Fredkin; load r,
/// Fredkin; measure parity, aux swap; Fredkin; load q, Fredkin; measure carry;
/// reset.
[[nodiscard]] PulseSchedule default_schedule(AdderInputs inputs, const HubbardParams& params);
/// Same, reusing an existing calibration.
[[nodiscard]] PulseSchedule default_schedule(AdderInputs inputs, const HubbardParams& params,
                                             const AuxSwapCalibration& calibration);

[[nodiscard]] int count_fredkin_intervals(const PulseSchedule& s);
[[nodiscard]] int count_aux_swaps(const PulseSchedule& s);
/// Sum of coherent interval durations [hbar/Gamma].
[[nodiscard]] double coherent_time(const PulseSchedule& s);

struct RunMode {
  enum class Kind { ideal_branch, sampled };
  Kind kind = Kind::ideal_branch;
  std::uint64_t seed = 0;

  static RunMode ideal_branch() { return {}; }
  static RunMode sampled(std::uint64_t seed) { return {Kind::sampled, seed}; }
};

struct MeasurementRecord {
  std::string output;
  int dot = 1;
  int charge = 0;  // electrons found on the dot
  int bit = 0;
  double probability = 0.0;
  bool leakage = false;
};

struct AdderResult {
  AdderInputs inputs;
  int parity = 0;
  int carry = 0;
  int g = 0;  // final logical value of dot 2
  /// ideal_branch: ideal-output population of each coherent interval.
  /// sampled: Born probability of each recorded measurement outcome.
  std::vector<double> step_fidelities;
  double fidelity = 1.0;  // product of step_fidelities
  std::vector<MeasurementRecord> measurements;
};

/// ideal_branch: every coherent interval starts from the logically correct
/// basis state; its fidelity is the population of the ideal output, after
/// which the state is projected onto that output. sampled: measurements draw
/// from the Born distribution of the dot charge and loads discard and
/// re-prepare the dot.
[[nodiscard]] AdderResult run_adder(const PulseSchedule& schedule,
                                    RunMode mode = RunMode::ideal_branch());

/// Ideal-branch results for all eight inputs, ordered p, q, r ascending.
[[nodiscard]] std::vector<AdderResult> adder_truth_table(const HubbardParams& params);

struct ShotStatistics {
  int shots = 0;
  std::uint64_t seed = 0;
  std::map<std::pair<int, int>, int> counts;  // (parity, carry) -> shots
  int leakage_shots = 0;
  std::vector<AdderResult> results;  // one per shot

  [[nodiscard]] std::pair<int, int> majority() const;
};

/// `shots` sampled runs; shot i uses child_seed(seed, i).
[[nodiscard]] ShotStatistics sample_adder(const PulseSchedule& schedule, int shots,
                                          std::uint64_t seed);

/// Reference fidelities for U = 21.83, V = 10, indexed 4p + 2q + r.
inline constexpr std::array<double, 8> kReferenceAdderFidelity{0.986, 0.991, 0.994, 0.997,
                                                               0.994, 0.997, 0.994, 0.999};

[[nodiscard]] std::string schedule_to_json(const PulseSchedule& s);
/// Throws ScheduleError on malformed documents.
[[nodiscard]] PulseSchedule schedule_from_json(const std::string& text);

/// Header p,q,r,parity,carry,fidelity,step_fidelities (';'-separated).
[[nodiscard]] std::string adder_results_csv(const std::vector<AdderResult>& rows);

}  // namespace qdsim
