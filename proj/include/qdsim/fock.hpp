#pragma once

// Fock space of three single-level quantum dots with two spin species.
//
// Modes are ordered (0 up, 0 down, 1 up, 1 down, 2 up, 2 down); mode k is
// bit k of a FockState. Fermionic signs follow the parity of occupied modes
// with a lower index than the mode being acted on.

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdsim {

inline constexpr int kNumSites = 3;
inline constexpr int kNumModes = 2 * kNumSites;
inline constexpr int kFullDimension = 1 << kNumModes;

enum class Spin : std::uint8_t { up = 0, down = 1 };

struct SpinSite {
  int site = 0;
  Spin spin = Spin::up;

  /// Throws std::out_of_range unless 0 <= site < 3.
  SpinSite(int site_, Spin spin_);
  SpinSite() = default;

  [[nodiscard]] int mode() const { return 2 * site + static_cast<int>(spin); }
  friend bool operator==(const SpinSite&, const SpinSite&) = default;
};

class FockState {
 public:
  constexpr FockState() = default;
  constexpr explicit FockState(std::uint8_t bits) : bits_(bits & 0x3f) {}

  [[nodiscard]] constexpr std::uint8_t bits() const { return bits_; }
  [[nodiscard]] constexpr bool occupied(int mode) const { return (bits_ >> mode) & 1u; }
  [[nodiscard]] bool occupied(SpinSite m) const { return occupied(m.mode()); }

  /// Total electron number N.
  [[nodiscard]] int electrons() const;
  /// Electrons on one dot (0, 1 or 2).
  [[nodiscard]] int site_occupancy(int site) const;
  /// Twice the total S_z, i.e. N_up - N_down.
  [[nodiscard]] int sz2() const;
  /// Parity (+1/-1) of occupied modes strictly below `mode`.
  [[nodiscard]] int sign_before(int mode) const;

  [[nodiscard]] FockState with(int mode, bool occ) const;

  /// Per-dot label such as "20u": '0' empty, 'u' up, 'd' down, '2' double.
  [[nodiscard]] std::string label() const;

  friend constexpr auto operator<=>(const FockState&, const FockState&) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Total electron number and twice the total S_z.
struct Sector {
  int electrons = 0;
  int sz2 = 0;

  [[nodiscard]] bool contains(FockState s) const {
    return s.electrons() == electrons && s.sz2() == sz2;
  }
  friend bool operator==(const Sector&, const Sector&) = default;
};

[[nodiscard]] Sector sector_of(FockState s);

/// Requested (N, Sz) combination admits no state.
class SectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand dimensions or bases do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FockBasis {
 public:
  /// Full 64-state space.
  FockBasis();

  [[nodiscard]] std::size_t size() const { return states_.size(); }
  [[nodiscard]] const std::vector<FockState>& states() const { return states_; }
  [[nodiscard]] FockState operator[](std::size_t i) const { return states_[i]; }
  [[nodiscard]] const std::optional<Sector>& sector() const { return sector_; }

  /// Index of `s`, or nullopt if `s` is outside this basis.
  [[nodiscard]] std::optional<std::size_t> index_of(FockState s) const;
  [[nodiscard]] bool contains(FockState s) const { return index_of(s).has_value(); }

  friend bool operator==(const FockBasis& a, const FockBasis& b) {
    return a.sector_ == b.sector_ && a.states_ == b.states_;
  }

 private:
  explicit FockBasis(std::optional<Sector> sector);
  friend FockBasis build_basis(std::optional<Sector>);

  std::vector<FockState> states_;
  std::optional<Sector> sector_;
  std::array<int, kFullDimension> lookup_{};
};

/// All states in ascending bit order, optionally restricted to a sector.
/// Throws SectorError for N outside [0, 6] or Sz inconsistent with N.
[[nodiscard]] FockBasis build_basis(std::optional<Sector> sector = std::nullopt);

/// Dense complex operator; maps col_basis amplitudes to row_basis amplitudes.
struct OperatorMatrix {
  FockBasis row_basis;
  FockBasis col_basis;
  Eigen::MatrixXcd matrix;

  [[nodiscard]] bool square() const { return row_basis == col_basis; }
};

/// c†_mode : basis_in -> basis_out. For sector bases, basis_out must be the
/// sector of basis_in with one more electron of the mode's spin.
[[nodiscard]] OperatorMatrix creation_operator(const FockBasis& basis_in,
                                               const FockBasis& basis_out,
                                               SpinSite mode);
/// c_mode : basis_in -> basis_out (adjoint of creation_operator(out, in)).
[[nodiscard]] OperatorMatrix annihilation_operator(const FockBasis& basis_in,
                                                   const FockBasis& basis_out,
                                                   SpinSite mode);
[[nodiscard]] OperatorMatrix number_operator(const FockBasis& basis, SpinSite mode);

// ---------------------------------------------------------------------------
// Logical encoding

struct Encoding {
  enum class Variant { two_electron, single_electron };
  Variant variant = Variant::two_electron;
  Spin fixed_spin = Spin::up;  // single_electron only

  static Encoding two_electron() { return {}; }
  static Encoding single_electron(Spin s = Spin::up) { return {Variant::single_electron, s}; }

  [[nodiscard]] std::string name() const;
  friend bool operator==(const Encoding&, const Encoding&) = default;
};

/// Parses "two-electron" / "single-electron" (optionally ":up"/":down").
[[nodiscard]] Encoding parse_encoding(const std::string& text);

/// Logical bits (control on dot 0, targets on dots 1 and 2).
struct LogicalBits {
  int c = 0;
  int t1 = 0;
  int t2 = 0;

  [[nodiscard]] int bit(int dot) const { return dot == 0 ? c : (dot == 1 ? t1 : t2); }
  [[nodiscard]] LogicalBits with(int dot, int value) const;
  [[nodiscard]] std::string str() const;
  /// 3-bit index c*4 + t1*2 + t2.
  [[nodiscard]] int index() const { return 4 * c + 2 * t1 + t2; }
  static LogicalBits from_index(int i) { return {(i >> 2) & 1, (i >> 1) & 1, i & 1}; }

  friend bool operator==(const LogicalBits&, const LogicalBits&) = default;
};

/// Empty dot = logical 1; charged dot (pair, or one fixed-spin electron) = 0.
[[nodiscard]] FockState logical_to_fock(LogicalBits bits, Encoding encoding);
/// Inverse of logical_to_fock; nullopt marks a leakage state.
[[nodiscard]] std::optional<LogicalBits> fock_to_logical(FockState state, Encoding encoding);
/// Fock configuration (bits of modes 2*dot, 2*dot+1) of one dot holding `bit`.
[[nodiscard]] int dot_configuration(int bit, Encoding encoding);

}  // namespace qdsim
