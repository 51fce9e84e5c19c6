#include "oracle.hpp"
#include "qdsim/hamiltonian.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace qdsim;

namespace {

oracle::Params to_oracle(const HubbardParams& p) {
  return {p.eps, p.gamma12, p.gamma01, p.charging, p.capacitive};
}

HubbardParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HubbardParams p;
  for (auto& e : p.eps) e = 4.0 * u(rng) - 2.0;
  p.gamma12 = 0.2 + 1.8 * u(rng);
  p.gamma01 = 2.0 * u(rng);
  p.charging = 25.0 * u(rng);
  p.capacitive = 12.0 * u(rng);
  return p;
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("fredkin and adder Hamiltonians equal the operator-product oracle") {
  std::mt19937_64 rng(11);
  const FockBasis full = build_basis();
  for (int trial = 0; trial < 10; ++trial) {
    const HubbardParams p = random_params(rng);
    const auto ha = build_adder_hamiltonian(p, full);
    CHECK((ha.matrix() - oracle::hamiltonian(to_oracle(p))).cwiseAbs().maxCoeff() < 1e-12);
    oracle::Params op = to_oracle(p);
    op.gamma01 = 0.0;
    const auto hf = build_fredkin_hamiltonian(p, full);
    CHECK((hf.matrix() - oracle::hamiltonian(op)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sector blocks are sub-blocks of the full matrix") {
  HubbardParams p;
  p.gamma01 = 0.7;
  const FockBasis full = build_basis();
  const Eigen::MatrixXcd big = build_adder_hamiltonian(p, full).matrix();
  for (const Sector s : {Sector{2, 0}, Sector{4, 0}, Sector{3, 1}, Sector{1, -1}}) {
    const FockBasis b = build_basis(s);
    const Eigen::MatrixXcd h = build_adder_hamiltonian(p, b).matrix();
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        CHECK(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              big(b[i].bits(), b[j].bits()));
      }
    }
  }
}

TEST_CASE("diagonal energies of codewords") {
  const HubbardParams p;
  const FockBasis b = build_basis(Sector{2, 0});
  const auto h = build_fredkin_hamiltonian(p, b);
  auto energy = [&](LogicalBits bits) {
    const auto i = *b.index_of(logical_to_fock(bits, Encoding::two_electron()));
    return h.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  };
  CHECK(energy({0, 1, 1}) == doctest::Approx(21.83));
  CHECK(energy({1, 0, 1}) == doctest::Approx(21.83));
  const FockBasis b4 = build_basis(Sector{4, 0});
  const auto h4 = build_fredkin_hamiltonian(p, b4);
  const auto i = *b4.index_of(logical_to_fock({0, 0, 1}, Encoding::two_electron()));
  CHECK(h4.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() ==
        doctest::Approx(2 * 21.83 + 4 * 10.0));
}

TEST_CASE("Hermitian with conserved N and Sz") {
  std::mt19937_64 rng(5);
  const FockBasis full = build_basis();
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = build_adder_hamiltonian(random_params(rng), full);
    CHECK(hermiticity_residual(h.matrix()) <= 1e-13);
    CHECK(conserved_charges(h).conserved(1e-13));
  }
}

TEST_CASE("total number and Sz operators") {
  const FockBasis full = build_basis();
  const Eigen::MatrixXcd n = total_number_operator(full).matrix;
  const Eigen::MatrixXcd sz = total_sz_operator(full).matrix;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    CHECK(n(k, k).real() == full[i].electrons());
    CHECK(sz(k, k).real() == full[i].sz2());
  }
  const Eigen::VectorXd d1 = site_occupancy_diagonal(full, 1);
  CHECK(d1(0b001100) == 2.0);
  CHECK(d1(0b000011) == 0.0);
}

TEST_CASE("parameter files") {
  std::istringstream in(
      "# device\nU = 20.5\nV=9\n\neps1 = -0.25  # detuned\ngamma01 = 1\ngamma_si_ueV = 22\n");
  const HubbardParams p = parse_params(in);
  CHECK(p.charging == 20.5);
  CHECK(p.capacitive == 9.0);
  CHECK(p.eps[1] == -0.25);
  CHECK(p.gamma01 == 1.0);
  CHECK(p.gamma12 == 1.0);
  CHECK(p.gamma_si_ueV == 22.0);

  std::istringstream round(format_params(p));
  CHECK(parse_params(round) == p);

  std::istringstream unknown("W = 3\n");
  CHECK_THROWS_AS((void)parse_params(unknown), std::invalid_argument);
  std::istringstream bad("U = twenty\n");
  CHECK_THROWS_AS((void)parse_params(bad), std::invalid_argument);
  std::istringstream no_eq("U 20\n");
  CHECK_THROWS_AS((void)parse_params(no_eq), std::invalid_argument);
  CHECK_THROWS((void)load_params("/nonexistent/params.conf"));
}

TEST_CASE("parameter validation") {
  HubbardParams p;
  CHECK_NOTHROW(p.validate());
  p.charging = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.gamma_si_ueV = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}
