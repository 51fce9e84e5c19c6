#include "qdsim/dynamics.hpp"

#include "qdsim/random.hpp"
#include "qdsim/units.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>

namespace qdsim {

using cd = std::complex<double>;

StateVector StateVector::basis_state(const FockBasis& basis, FockState state) {
  const auto i = basis.index_of(state);
  if (!i) throw DimensionError("state " + state.label() + " is not in the basis");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  v(static_cast<Eigen::Index>(*i)) = 1.0;
  return {basis, std::move(v)};
}

double StateVector::population(FockState state) const {
  const auto i = basis.index_of(state);
  return i ? std::norm(amplitudes(static_cast<Eigen::Index>(*i))) : 0.0;
}

double StateVector::leakage(Encoding encoding) const {
  double total = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!fock_to_logical(basis[i], encoding)) {
      total += std::norm(amplitudes(static_cast<Eigen::Index>(i)));
    }
  }
  return total;
}

Propagator::Propagator(const HamiltonianMatrix& h) : Propagator(h.basis(), h.matrix()) {}

Propagator::Propagator(const FockBasis& basis, const Eigen::MatrixXcd& h) : basis_(basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (h.rows() != n || h.cols() != n) {
    throw DimensionError("Hamiltonian dimension does not match its basis");
  }

  std::map<std::pair<int, int>, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    const FockState s = basis[static_cast<std::size_t>(i)];
    groups[{s.electrons(), s.sz2()}].push_back(i);
  }
  std::vector<int> group_of(static_cast<std::size_t>(n));
  int g = 0;
  for (const auto& [key, idx] : groups) {
    for (auto i : idx) group_of[static_cast<std::size_t>(i)] = g;
    ++g;
  }
  bool block_diagonal = true;
  for (Eigen::Index j = 0; j < n && block_diagonal; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (h(i, j) != cd{} && group_of[static_cast<std::size_t>(i)] !=
                                 group_of[static_cast<std::size_t>(j)]) {
        block_diagonal = false;
        break;
      }
    }
  }

  std::vector<std::vector<Eigen::Index>> partition;
  if (block_diagonal) {
    for (auto& [key, idx] : groups) partition.push_back(std::move(idx));
  } else {
    partition.emplace_back();
    for (Eigen::Index i = 0; i < n; ++i) partition.back().push_back(i);
  }

  for (auto& idx : partition) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = h(idx[a], idx[b]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigendecomposition failed");
    }
    blocks_.push_back({std::move(idx), solver.eigenvalues(), solver.eigenvectors()});
  }
}

StateVector Propagator::evolve(const StateVector& psi, double t) const {
  if (!(psi.basis == basis_)) throw DimensionError("state and Hamiltonian bases differ");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes.size());
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.indices.size());
    Eigen::VectorXcd local(m);
    bool any = false;
    for (Eigen::Index a = 0; a < m; ++a) {
      local(a) = psi.amplitudes(b.indices[a]);
      any = any || local(a) != cd{};
    }
    if (!any) continue;
    Eigen::VectorXcd coeff = b.vectors.adjoint() * local;
    for (Eigen::Index k = 0; k < m; ++k) coeff(k) *= std::polar(1.0, -b.energies(k) * t);
    local = b.vectors * coeff;
    for (Eigen::Index a = 0; a < m; ++a) out(b.indices[a]) = local(a);
  }
  return {basis_, std::move(out)};
}

Eigen::MatrixXcd Propagator::unitary(double t) const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.indices.size());
    Eigen::VectorXcd phase(m);
    for (Eigen::Index k = 0; k < m; ++k) phase(k) = std::polar(1.0, -b.energies(k) * t);
    const Eigen::MatrixXcd local = b.vectors * phase.asDiagonal() * b.vectors.adjoint();
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index c = 0; c < m; ++c) u(b.indices[a], b.indices[c]) = local(a, c);
    }
  }
  return u;
}

Eigen::MatrixXd EvolutionResult::populations() const {
  if (states.empty()) return {};
  Eigen::MatrixXd p(static_cast<Eigen::Index>(states.size()), states.front().amplitudes.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    p.row(static_cast<Eigen::Index>(k)) = states[k].populations().transpose();
  }
  return p;
}

StateVector evolve(const HamiltonianMatrix& h, const StateVector& psi0, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve: negative time");
  return Propagator(h).evolve(psi0, t);
}

EvolutionResult evolve_sampled(const HamiltonianMatrix& h, const StateVector& psi0,
                               double t_final, int n_snapshots) {
  if (n_snapshots < 2) throw std::invalid_argument("evolve_sampled: need at least 2 snapshots");
  if (t_final < 0.0) throw std::invalid_argument("evolve_sampled: negative time");
  const Propagator prop(h);
  EvolutionResult r;
  for (int k = 0; k < n_snapshots; ++k) {
    const double t = t_final * k / (n_snapshots - 1);
    r.times.push_back(t);
    r.states.push_back(prop.evolve(psi0, t));
  }
  return r;
}

StepGrid StepGrid::make(double t_final, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("noise step dt must be > 0");
  if (!(t_final >= 0.0)) throw std::invalid_argument("final time must be >= 0");
  const int steps = std::max(1, static_cast<int>(std::lround(t_final / dt)));
  return {steps, t_final / steps};
}

StateVector evolve_noisy(const HamiltonianMatrix& h_base, const StateVector& psi0,
                         double t_final, double dt, double amplitude, std::uint64_t seed,
                         const NoiseObserver& observer) {
  if (amplitude < 0.0) throw std::invalid_argument("noise amplitude must be >= 0");
  const StepGrid grid = StepGrid::make(t_final, dt);
  const FockBasis& basis = h_base.basis();
  if (!(psi0.basis == basis)) throw DimensionError("state and Hamiltonian bases differ");

  std::array<Eigen::VectorXd, kNumSites> occupancy;
  for (int site = 0; site < kNumSites; ++site) {
    occupancy[site] = site_occupancy_diagonal(basis, site);
  }

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector psi = psi0;
  const Propagator clean(h_base);
  for (int k = 0; k < grid.steps; ++k) {
    if (amplitude == 0.0) {
      psi = clean.evolve(psi, grid.step);
    } else {
      Eigen::VectorXd shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
      for (int site = 0; site < kNumSites; ++site) {
        shift += amplitude * normal(rng) * occupancy[site];
      }
      Eigen::MatrixXcd h = h_base.matrix();
      h.diagonal() += shift.cast<cd>();
      psi = Propagator(basis, h).evolve(psi, grid.step);
    }
    psi.amplitudes /= psi.amplitudes.norm();
    if (observer) observer((k + 1) * grid.step, psi);
  }
  return psi;
}

void write_evolution_csv(std::ostream& os, const EvolutionResult& result, double gamma_si_ueV,
                         const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
  os << "time_hbar_over_gamma,time_ps";
  if (!result.states.empty()) {
    for (auto s : result.states.front().basis.states()) os << ",pop_" << s.label();
  }
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < result.states.size(); ++k) {
    const double t = result.times[k];
    os << t << ',' << units::natural_time_to_ps(t, gamma_si_ueV);
    const Eigen::VectorXd p = result.states[k].populations();
    for (Eigen::Index i = 0; i < p.size(); ++i) os << ',' << p(i);
    os << '\n';
  }
}

}  // namespace qdsim
