#include "qdsim/hamiltonian.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace qdsim {

void HubbardParams::validate() const {
  if (!(charging >= 0.0)) throw std::invalid_argument("U must be >= 0");
  if (!(capacitive >= 0.0)) throw std::invalid_argument("V must be >= 0");
  if (!(gamma_si_ueV > 0.0)) throw std::invalid_argument("gamma_si_ueV must be > 0");
  for (double e : eps) {
    if (!std::isfinite(e)) throw std::invalid_argument("on-site energies must be finite");
  }
  if (!std::isfinite(gamma12) || !std::isfinite(gamma01)) {
    throw std::invalid_argument("tunnel couplings must be finite");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double* field(HubbardParams& p, const std::string& key) {
  static const std::map<std::string, double HubbardParams::*> scalars{
      {"gamma12", &HubbardParams::gamma12},
      {"gamma01", &HubbardParams::gamma01},
      {"U", &HubbardParams::charging},
      {"V", &HubbardParams::capacitive},
      {"gamma_si_ueV", &HubbardParams::gamma_si_ueV},
  };
  if (key == "eps0") return &p.eps[0];
  if (key == "eps1") return &p.eps[1];
  if (key == "eps2") return &p.eps[2];
  const auto it = scalars.find(key);
  return it == scalars.end() ? nullptr : &(p.*(it->second));
}

// Amplitude and target of c†_to c_from |s>, or zero amplitude.
std::pair<int, FockState> hop(FockState s, int to, int from) {
  if (!s.occupied(from) || s.occupied(to)) return {0, s};
  const int s1 = s.sign_before(from);
  const FockState mid = s.with(from, false);
  const int s2 = mid.sign_before(to);
  return {s1 * s2, mid.with(to, true)};
}

void add_hopping(Eigen::MatrixXcd& m, const FockBasis& basis, int site_a, int site_b,
                 double amplitude) {
  if (amplitude == 0.0) return;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (int spin = 0; spin < 2; ++spin) {
      const int a = 2 * site_a + spin;
      const int b = 2 * site_b + spin;
      for (auto [to, from] : {std::pair{a, b}, std::pair{b, a}}) {
        const auto [sign, target] = hop(basis[j], to, from);
        if (sign == 0) continue;
        const auto i = basis.index_of(target);
        // A basis that is not closed under hopping is not a sector basis.
        if (!i) throw DimensionError("basis is not closed under hopping");
        m(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) += sign * amplitude;
      }
    }
  }
}

}  // namespace

HubbardParams parse_params(std::istream& in, HubbardParams base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    double* target = field(base, key);
    if (!target) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
    std::size_t used = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad number '" +
                                  value + "' for " + key);
    }
    *target = parsed;
  }
  base.validate();
  return base;
}

HubbardParams load_params(const std::string& path, HubbardParams base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return parse_params(in, base);
}

std::string format_params(const HubbardParams& p) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "eps0 = " << p.eps[0] << '\n'
     << "eps1 = " << p.eps[1] << '\n'
     << "eps2 = " << p.eps[2] << '\n'
     << "gamma12 = " << p.gamma12 << '\n'
     << "gamma01 = " << p.gamma01 << '\n'
     << "U = " << p.charging << '\n'
     << "V = " << p.capacitive << '\n'
     << "gamma_si_ueV = " << p.gamma_si_ueV << '\n';
  return os.str();
}

HamiltonianMatrix build_fredkin_hamiltonian(const HubbardParams& params, const FockBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const FockState s = basis[static_cast<std::size_t>(i)];
    double diag = 0.0;
    for (int site = 0; site < kNumSites; ++site) {
      const int occ = s.site_occupancy(site);
      diag += params.eps[site] * occ;
      if (occ == 2) diag += params.charging;
    }
    // sum over sigma, sigma' of n_{0s} n_{1s'} factorizes into n_0 * n_1.
    diag += params.capacitive * (s.site_occupancy(0) * s.site_occupancy(1) +
                                 s.site_occupancy(1) * s.site_occupancy(2));
    m(i, i) = diag;
  }
  add_hopping(m, basis, 1, 2, params.gamma12);

  return {{basis, basis, std::move(m)}, params, HamiltonianMatrix::Variant::fredkin};
}

HamiltonianMatrix build_adder_hamiltonian(const HubbardParams& params, const FockBasis& basis) {
  HamiltonianMatrix h = build_fredkin_hamiltonian(params, basis);
  add_hopping(h.op.matrix, basis, 0, 1, params.gamma01);
  h.variant = HamiltonianMatrix::Variant::adder;
  return h;
}

Eigen::VectorXd site_occupancy_diagonal(const FockBasis& basis, int site) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = basis[i].site_occupancy(site);
  }
  return d;
}

OperatorMatrix total_number_operator(const FockBasis& basis) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = basis[i].electrons();
  }
  return {basis, basis, d.cast<std::complex<double>>().asDiagonal()};
}

OperatorMatrix total_sz_operator(const FockBasis& basis) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = basis[i].sz2();
  }
  return {basis, basis, d.cast<std::complex<double>>().asDiagonal()};
}

ConservedChargeReport conserved_charges(const HamiltonianMatrix& h) {
  const auto& m = h.matrix();
  const Eigen::MatrixXcd n = total_number_operator(h.basis()).matrix;
  const Eigen::MatrixXcd sz = total_sz_operator(h.basis()).matrix;
  ConservedChargeReport r;
  r.number_commutator = (m * n - n * m).cwiseAbs().maxCoeff();
  r.sz_commutator = (m * sz - sz * m).cwiseAbs().maxCoeff();
  return r;
}

double hermiticity_residual(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace qdsim
