#pragma once

#include "qdsim/fock.hpp"

#include <array>
#include <iosfwd>
#include <string>

namespace qdsim {

/// Parameters of the three-dot Hubbard model. Energies are in units of the
/// 1-2 tunnel coupling; gamma_si_ueV sets the physical scale.
struct HubbardParams {
  std::array<double, kNumSites> eps{0.0, 0.0, 0.0};
  double gamma12 = 1.0;
  double gamma01 = 0.0;
  double charging = 21.83;  // U
  double capacitive = 10.0;  // V
  double gamma_si_ueV = 44.0;

  /// Throws std::invalid_argument on negative U/V or non-positive gamma_si.
  void validate() const;

  friend bool operator==(const HubbardParams&, const HubbardParams&) = default;
};

/// Parses `key = value` lines (eps0, eps1, eps2, gamma12, gamma01, U, V,
/// gamma_si_ueV). '#' starts a comment. Unknown keys and malformed values
/// throw std::invalid_argument naming the line.
[[nodiscard]] HubbardParams parse_params(std::istream& in, HubbardParams base = {});
[[nodiscard]] HubbardParams load_params(const std::string& path, HubbardParams base = {});
/// Inverse of parse_params; stable key order and full precision.
[[nodiscard]] std::string format_params(const HubbardParams& p);

struct HamiltonianMatrix {
  enum class Variant { fredkin, adder };

  OperatorMatrix op;
  HubbardParams params;
  Variant variant = Variant::fredkin;

  [[nodiscard]] const FockBasis& basis() const { return op.row_basis; }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return op.matrix; }
};

/// H_F: on-site energies, 1-2 hopping, nearest-neighbour capacitive
/// coupling (0-1 and 1-2, summed over both spins) and on-site charging.
[[nodiscard]] HamiltonianMatrix build_fredkin_hamiltonian(const HubbardParams& params,
                                                          const FockBasis& basis);
/// H_A = H_F plus the 0-1 hopping gamma01.
[[nodiscard]] HamiltonianMatrix build_adder_hamiltonian(const HubbardParams& params,
                                                        const FockBasis& basis);

/// Diagonal sum_sigma n_{site,sigma} over `basis`.
[[nodiscard]] Eigen::VectorXd site_occupancy_diagonal(const FockBasis& basis, int site);
[[nodiscard]] OperatorMatrix total_number_operator(const FockBasis& basis);
/// N_up - N_down (twice S_z).
[[nodiscard]] OperatorMatrix total_sz_operator(const FockBasis& basis);

struct ConservedChargeReport {
  double number_commutator = 0.0;  // max |[H, N]|
  double sz_commutator = 0.0;      // max |[H, Sz]|

  [[nodiscard]] bool conserved(double tol = 1e-13) const {
    return number_commutator <= tol && sz_commutator <= tol;
  }
};

[[nodiscard]] ConservedChargeReport conserved_charges(const HamiltonianMatrix& h);

/// max |H - H^dagger|.
[[nodiscard]] double hermiticity_residual(const Eigen::MatrixXcd& m);

}  // namespace qdsim
