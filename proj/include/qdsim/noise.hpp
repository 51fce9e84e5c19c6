#pragma once

#include "qdsim/fredkin.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qdsim {

/// Quasistatic charge noise: on-site offsets drawn once per gate run.
struct QuasistaticModel {
  double epsilon_bar = 0.01;  // std of each offset [Gamma]
  double alpha = 0.12;
  double beta = 0.25;
  int n_samples = 10000;
  std::uint64_t seed = 0;
  bool include_eps0 = false;  // also perturb the control dot
};

/// Gaussian on-site fluctuations resampled every dt during one gate run.
struct HighFrequencyModel {
  double amplitude = 0.01;  // [Gamma]
  double dt = 1.0;          // [hbar/Gamma]
  int n_runs = 1000;
  std::uint64_t seed = 0;
};

/// Lambda = alpha ((U - V)/Gamma)^2 + beta.
[[nodiscard]] double lambda_coefficient(const HubbardParams& params, double alpha = 0.12,
                                        double beta = 0.25);

/// Closed-form quasistatic model anchored to the simulated noise-free gate.
struct QuasistaticAnalytic {
  double f0 = 1.0;  // sqrt of the noise-free control-1 swap probability
  double lambda = 0.0;

  /// [f0 - Lambda ((eps1 - eps2)/Gamma)^2]^2
  [[nodiscard]] double success(double eps1, double eps2) const;
  /// [f0 - 2 Lambda (eps_bar/Gamma)^2]^2 + 8 Lambda^2 (eps_bar/Gamma)^4
  [[nodiscard]] double average(double epsilon_bar) const;
};

[[nodiscard]] QuasistaticAnalytic quasistatic_analytic(const HubbardParams& params,
                                                       double alpha = 0.12, double beta = 0.25);
[[nodiscard]] double quasistatic_success_analytic(const HubbardParams& params, double eps1_offset,
                                                  double eps2_offset);
[[nodiscard]] double quasistatic_average_analytic(const HubbardParams& params,
                                                  double epsilon_bar);

/// Success probability of the control-1 swap input at t* (of `params`) with
/// the given on-site offsets added to params.eps.
[[nodiscard]] double control_one_success(const HubbardParams& params,
                                         const std::array<double, kNumSites>& offsets);

struct QuasistaticSample {
  std::array<double, kNumSites> offsets{};
  double success = 0.0;
};

struct NoiseReport {
  std::string kind;  // "quasistatic" or "highfreq"
  std::uint64_t seed = 0;
  int n = 0;
  double strength = 0.0;  // epsilon_bar or amplitude [Gamma]
  double dt = 0.0;        // actual step length, high-frequency only
  double t_final = 0.0;

  double p0 = 0.0;  // noise-free success probability
  double mean = 0.0;
  double std = 0.0;
  double standard_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  [[nodiscard]] double change() const { return mean - p0; }

  // High-frequency: success probability at each step boundary (t = 0 first).
  std::vector<double> times;
  std::vector<double> clean_trajectory;
  std::vector<double> mean_trajectory;
  std::vector<double> std_trajectory;

  // Quasistatic: every draw, in sample order.
  std::vector<QuasistaticSample> samples;
};

/// Monte Carlo average of control_one_success over Gaussian offsets of
/// eps1, eps2 (and eps0 if requested). Sample i uses child_seed(seed, i).
[[nodiscard]] NoiseReport quasistatic_average_mc(const HubbardParams& params,
                                                 const QuasistaticModel& model);

struct LambdaFit {
  double f0 = 0.0;      // intercept of sqrt(p)
  double lambda = 0.0;  // minus the slope of sqrt(p) against ((eps1-eps2)/Gamma)^2
};

/// Least-squares fit of sqrt(p) = f0 - Lambda d^2 over the samples.
[[nodiscard]] LambdaFit fit_lambda(const std::vector<QuasistaticSample>& samples);

/// n_runs noisy evolutions of the control-1 swap input up to t*.
[[nodiscard]] NoiseReport high_frequency_ensemble(const HubbardParams& params,
                                                  const HighFrequencyModel& model);

}  // namespace qdsim
