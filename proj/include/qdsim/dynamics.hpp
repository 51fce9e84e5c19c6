#pragma once

#include "qdsim/hamiltonian.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdsim {

struct StateVector {
  FockBasis basis;
  Eigen::VectorXcd amplitudes;

  /// |state> as a unit vector; throws DimensionError if not in `basis`.
  static StateVector basis_state(const FockBasis& basis, FockState state);

  [[nodiscard]] double norm() const { return amplitudes.norm(); }
  /// |amplitude|^2 of `state`, 0 if it lies outside the basis.
  [[nodiscard]] double population(FockState state) const;
  [[nodiscard]] Eigen::VectorXd populations() const { return amplitudes.cwiseAbs2(); }
  /// Total population of states that are not codewords of `encoding`.
  [[nodiscard]] double leakage(Encoding encoding) const;
};

/// Eigendecomposition of a Hermitian matrix, split into (N, Sz) blocks when
/// the matrix has no elements between sectors. Amplitude never leaves the
/// sector block it starts in.
class Propagator {
 public:
  explicit Propagator(const HamiltonianMatrix& h);
  Propagator(const FockBasis& basis, const Eigen::MatrixXcd& h);

  [[nodiscard]] const FockBasis& basis() const { return basis_; }
  [[nodiscard]] std::size_t block_count() const { return blocks_.size(); }

  /// exp(-i H t) psi (hbar = 1). Throws DimensionError on basis mismatch.
  [[nodiscard]] StateVector evolve(const StateVector& psi, double t) const;
  /// Dense exp(-i H t).
  [[nodiscard]] Eigen::MatrixXcd unitary(double t) const;

 private:
  struct Block {
    std::vector<Eigen::Index> indices;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
  };

  FockBasis basis_;
  std::vector<Block> blocks_;
};

struct EvolutionResult {
  std::vector<double> times;  // hbar/Gamma
  std::vector<StateVector> states;

  /// Rows are snapshots, columns basis states.
  [[nodiscard]] Eigen::MatrixXd populations() const;
};

[[nodiscard]] StateVector evolve(const HamiltonianMatrix& h, const StateVector& psi0, double t);

/// n_snapshots uniform times on [0, t_final] from one eigendecomposition.
[[nodiscard]] EvolutionResult evolve_sampled(const HamiltonianMatrix& h, const StateVector& psi0,
                                             double t_final, int n_snapshots);

/// Piecewise-constant step grid: round(t_final/dt) steps (at least one) of
/// equal length t_final/steps.
struct StepGrid {
  int steps = 1;
  double step = 0.0;

  /// Throws std::invalid_argument for dt <= 0 or t_final < 0.
  static StepGrid make(double t_final, double dt);
};

/// Called after each step with (time, state).
using NoiseObserver = std::function<void(double, const StateVector&)>;

/// Evolution with Gaussian on-site fluctuations: on each step, draws
/// X_l ~ amplitude * N(0,1) for each dot, adds sum_l X_l n_l to h_base and
/// evolves exactly over the step. The state is renormalized after each step.
[[nodiscard]] StateVector evolve_noisy(const HamiltonianMatrix& h_base, const StateVector& psi0,
                                       double t_final, double dt, double amplitude,
                                       std::uint64_t seed, const NoiseObserver& observer = {});

/// One row per snapshot: time_hbar_over_gamma, time_ps, pop_<label>...
/// `header` lines are written first, each prefixed with "# ".
void write_evolution_csv(std::ostream& os, const EvolutionResult& result, double gamma_si_ueV,
                         const std::vector<std::string>& header = {});

}  // namespace qdsim
