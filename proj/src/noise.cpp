#include "qdsim/noise.hpp"

#include "qdsim/parallel.hpp"
#include "qdsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdsim {

namespace {

const FockState kSwapIn = logical_to_fock(kSwapInput, Encoding::two_electron());
const FockState kSwapOut = logical_to_fock(fredkin_output(kSwapInput), Encoding::two_electron());

const FockBasis& swap_sector() {
  static const FockBasis basis = build_basis(sector_of(kSwapIn));
  return basis;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Statistics taken relative to `ref`, so identical samples equal to ref give
// mean == ref and std == 0 exactly.
Moments moments(const std::vector<double>& xs, double ref) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x - ref;
  const double shift = sum / static_cast<double>(xs.size());
  m.mean = ref + shift;
  double ss = 0.0;
  for (double x : xs) {
    const double d = (x - ref) - shift;
    ss += d * d;
  }
  m.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  m.min = *lo;
  m.max = *hi;
  return m;
}

}  // namespace

double lambda_coefficient(const HubbardParams& params, double alpha, double beta) {
  const double x = (params.charging - params.capacitive) / params.gamma12;
  return alpha * x * x + beta;
}

double QuasistaticAnalytic::success(double eps1, double eps2) const {
  const double d = eps1 - eps2;
  const double amp = f0 - lambda * d * d;
  return amp * amp;
}

double QuasistaticAnalytic::average(double epsilon_bar) const {
  if (epsilon_bar < 0.0) throw std::invalid_argument("epsilon_bar must be >= 0");
  const double e2 = epsilon_bar * epsilon_bar;
  const double a = f0 - 2.0 * lambda * e2;
  return a * a + 8.0 * lambda * lambda * e2 * e2;
}

double control_one_success(const HubbardParams& params,
                           const std::array<double, kNumSites>& offsets) {
  HubbardParams p = params;
  for (int l = 0; l < kNumSites; ++l) p.eps[l] += offsets[l];
  const HamiltonianMatrix h = build_fredkin_hamiltonian(p, swap_sector());
  const double t = gate_time(params).natural;
  return Propagator(h).evolve(StateVector::basis_state(swap_sector(), kSwapIn), t)
      .population(kSwapOut);
}

QuasistaticAnalytic quasistatic_analytic(const HubbardParams& params, double alpha, double beta) {
  // Both control-1 swap inputs; they agree when eps1 == eps2.
  const FredkinGate gate(params);
  const double p0 =
      0.5 * (gate.output_population(kSwapInput) +
             gate.output_population(LogicalBits{1, kSwapInput.t2, kSwapInput.t1}));
  return {std::sqrt(p0), lambda_coefficient(params, alpha, beta)};
}

double quasistatic_success_analytic(const HubbardParams& params, double eps1_offset,
                                    double eps2_offset) {
  return quasistatic_analytic(params).success(eps1_offset, eps2_offset);
}

double quasistatic_average_analytic(const HubbardParams& params, double epsilon_bar) {
  return quasistatic_analytic(params).average(epsilon_bar);
}

NoiseReport quasistatic_average_mc(const HubbardParams& params, const QuasistaticModel& model) {
  if (model.n_samples < 1) throw std::invalid_argument("quasistatic MC needs n_samples >= 1");
  if (model.epsilon_bar < 0.0) throw std::invalid_argument("epsilon_bar must be >= 0");

  NoiseReport r;
  r.kind = "quasistatic";
  r.seed = model.seed;
  r.n = model.n_samples;
  r.strength = model.epsilon_bar;
  r.t_final = gate_time(params).natural;
  r.p0 = control_one_success(params, {0.0, 0.0, 0.0});

  const auto n = static_cast<std::size_t>(model.n_samples);
  r.samples.resize(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(child_seed(model.seed, i));
    std::normal_distribution<double> normal(0.0, 1.0);
    QuasistaticSample s;
    s.offsets[1] = model.epsilon_bar * normal(rng);
    s.offsets[2] = model.epsilon_bar * normal(rng);
    if (model.include_eps0) s.offsets[0] = model.epsilon_bar * normal(rng);
    s.success = control_one_success(params, s.offsets);
    r.samples[i] = s;
  });

  std::vector<double> ps(n);
  for (std::size_t i = 0; i < n; ++i) ps[i] = r.samples[i].success;
  const Moments m = moments(ps, r.p0);
  r.mean = m.mean;
  r.std = m.std;
  r.min = m.min;
  r.max = m.max;
  r.standard_error = m.std / std::sqrt(static_cast<double>(n));
  return r;
}

LambdaFit fit_lambda(const std::vector<QuasistaticSample>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("fit_lambda: need at least two samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double d = s.offsets[1] - s.offsets[2];
    const double x = d * d;
    const double y = std::sqrt(s.success);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(samples.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_lambda: degenerate offsets");
  const double slope = (n * sxy - sx * sy) / denom;
  return {(sy - slope * sx) / n, -slope};
}

NoiseReport high_frequency_ensemble(const HubbardParams& params, const HighFrequencyModel& model) {
  if (model.n_runs < 1) throw std::invalid_argument("high-frequency ensemble needs n_runs >= 1");
  if (model.amplitude < 0.0) throw std::invalid_argument("noise amplitude must be >= 0");

  const double t_final = gate_time(params).natural;
  const StepGrid grid = StepGrid::make(t_final, model.dt);
  const HamiltonianMatrix h = build_fredkin_hamiltonian(params, swap_sector());
  const StateVector psi0 = StateVector::basis_state(swap_sector(), kSwapIn);
  const auto steps = static_cast<std::size_t>(grid.steps);

  auto trajectory = [&](double amplitude, std::uint64_t seed) {
    std::vector<double> p;
    p.reserve(steps + 1);
    p.push_back(psi0.population(kSwapOut));
    (void)evolve_noisy(h, psi0, t_final, model.dt, amplitude, seed,
                       [&](double, const StateVector& s) { p.push_back(s.population(kSwapOut)); });
    return p;
  };

  NoiseReport r;
  r.kind = "highfreq";
  r.seed = model.seed;
  r.n = model.n_runs;
  r.strength = model.amplitude;
  r.dt = grid.step;
  r.t_final = t_final;
  for (std::size_t k = 0; k <= steps; ++k) r.times.push_back(static_cast<double>(k) * grid.step);
  r.clean_trajectory = trajectory(0.0, 0);
  r.p0 = r.clean_trajectory.back();

  const auto runs = static_cast<std::size_t>(model.n_runs);
  std::vector<std::vector<double>> all(runs);
  parallel_for(runs, [&](std::size_t i) {
    all[i] = trajectory(model.amplitude, child_seed(model.seed, i));
  });

  r.mean_trajectory.resize(steps + 1);
  r.std_trajectory.resize(steps + 1);
  std::vector<double> column(runs);
  for (std::size_t k = 0; k <= steps; ++k) {
    for (std::size_t i = 0; i < runs; ++i) column[i] = all[i][k];
    const Moments m = moments(column, r.clean_trajectory[k]);
    r.mean_trajectory[k] = m.mean;
    r.std_trajectory[k] = m.std;
    if (k == steps) {
      r.mean = m.mean;
      r.std = m.std;
      r.min = m.min;
      r.max = m.max;
      r.standard_error = m.std / std::sqrt(static_cast<double>(runs));
    }
  }
  return r;
}

}  // namespace qdsim
