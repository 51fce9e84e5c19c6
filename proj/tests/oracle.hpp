#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: operators are Kronecker products of 2x2 matrices with an
// explicit string of Z factors, and time evolution is classic RK4.

#include <Eigen/Dense>

#include <array>

namespace oracle {

inline constexpr int kModes = 6;
inline constexpr int kDim = 64;

/// Annihilation operator of mode k on the full 64-dim space, index = bit pattern.
Eigen::MatrixXcd annihilate(int k);
Eigen::MatrixXcd create(int k);
Eigen::MatrixXcd number(int k);

struct Params {
  std::array<double, 3> eps{0, 0, 0};
  double gamma12 = 1.0;
  double gamma01 = 0.0;
  double U = 21.83;
  double V = 10.0;
};

/// H built from operator products.
Eigen::MatrixXcd hamiltonian(const Params& p);

/// exp(-iHt) psi by fixed-step fourth-order Runge-Kutta.
Eigen::VectorXcd rk4(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t, int steps);

/// exp(-iHt) by scaling and squaring.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& h, double t);

/// |<bits_out| exp(-iHt) |bits_in>|^2 through RK4 over the full space.
double transition(const Params& p, int bits_in, int bits_out, double t, int steps = 20000);

}  // namespace oracle
