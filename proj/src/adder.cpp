#include "qdsim/adder.hpp"

#include "qdsim/parallel.hpp"
#include "qdsim/random.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qdsim {

using json = nlohmann::json;

std::string to_string(BitSource s) {
  switch (s) {
    case BitSource::p: return "p";
    case BitSource::q: return "q";
    case BitSource::r: return "r";
    case BitSource::const0: return "const0";
    case BitSource::const1: return "const1";
    case BitSource::parity_register: return "parity_register";
  }
  return "?";
}

BitSource parse_bit_source(const std::string& s) {
  for (auto b : {BitSource::p, BitSource::q, BitSource::r, BitSource::const0, BitSource::const1,
                 BitSource::parity_register}) {
    if (to_string(b) == s) return b;
  }
  throw ScheduleError("unknown bit source '" + s + "'");
}

namespace {

constexpr const char* kParity = "parity";
constexpr const char* kCarry = "carry";

LogicalBits swap01(LogicalBits in) { return {in.t1, in.c, in.t2}; }

HubbardParams aux_params(const HubbardParams& params, double detune) {
  HubbardParams p = params;
  p.gamma12 = 0.0;
  p.eps[0] += detune;
  return p;
}

void check_bit(int b, const char* name) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument(std::string("input bit ") + name + " must be 0 or 1");
  }
}

// Immutable per-schedule state: validated steps and one propagator per
// distinct Hamiltonian the schedule can switch on.
class Engine {
 public:
  explicit Engine(const PulseSchedule& s)
      : schedule_(s), basis_(build_basis()), fredkin_(build_fredkin_hamiltonian(s.params, basis_)) {
    validate();
    for (const auto& step : s.steps) {
      if (const auto* aux = std::get_if<AuxSwapInterval>(&step)) {
        add_aux(0.0);
        add_aux(aux->conditional_detune);
      }
    }
  }

  [[nodiscard]] const FockBasis& basis() const { return basis_; }
  [[nodiscard]] const Propagator& fredkin() const { return fredkin_; }
  [[nodiscard]] const Propagator& aux(double detune) const { return aux_.at(detune); }
  [[nodiscard]] const PulseSchedule& schedule() const { return schedule_; }

  [[nodiscard]] int resolve(BitSource src, const std::map<std::string, int>& regs) const {
    switch (src) {
      case BitSource::p: return schedule_.inputs.p;
      case BitSource::q: return schedule_.inputs.q;
      case BitSource::r: return schedule_.inputs.r;
      case BitSource::const0: return 0;
      case BitSource::const1: return 1;
      case BitSource::parity_register: return regs.at(kParity);
    }
    return 0;
  }

  [[nodiscard]] static double applied_detune(const AuxSwapInterval& aux,
                                             const std::map<std::string, int>& regs) {
    const auto it = regs.find(kParity);
    return (it != regs.end() && it->second == 1) ? aux.conditional_detune : 0.0;
  }

 private:
  void add_aux(double detune) {
    if (aux_.contains(detune)) return;
    aux_.emplace(detune,
                 Propagator(build_adder_hamiltonian(aux_params(schedule_.params, detune), basis_)));
  }

  void validate() const {
    check_bit(schedule_.inputs.p, "p");
    check_bit(schedule_.inputs.q, "q");
    check_bit(schedule_.inputs.r, "r");
    std::map<std::string, bool> written;
    for (std::size_t i = 0; i < schedule_.steps.size(); ++i) {
      const std::string where = "step " + std::to_string(i) + ": ";
      std::visit(
          [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, LoadStep> || std::is_same_v<T, MeasureStep>) {
              if (st.dot < 0 || st.dot >= kNumSites) {
                throw ScheduleError(where + "dot " + std::to_string(st.dot) + " out of range");
              }
            }
            if constexpr (std::is_same_v<T, LoadStep>) {
              if (st.source == BitSource::parity_register && !written[kParity]) {
                throw ScheduleError(where + "parity register read before it is measured");
              }
            } else if constexpr (std::is_same_v<T, MeasureStep>) {
              if (st.output.empty()) throw ScheduleError(where + "measurement without output");
              written[st.output] = true;
            } else if constexpr (!std::is_same_v<T, ResetStep>) {
              if (!(st.duration > 0.0) || !std::isfinite(st.duration)) {
                throw ScheduleError(where + "interval duration must be > 0");
              }
              if constexpr (std::is_same_v<T, AuxSwapInterval>) {
                if (schedule_.params.gamma01 == 0.0) {
                  throw ScheduleError(where + "aux swap needs a nonzero gamma01");
                }
                if (!std::isfinite(st.conditional_detune)) {
                  throw ScheduleError(where + "conditional detune must be finite");
                }
              }
            }
          },
          schedule_.steps[i]);
    }
  }

  PulseSchedule schedule_;
  FockBasis basis_;
  Propagator fredkin_;
  std::map<double, Propagator> aux_;
};

// Electrons of `dot` in state s, as a 2-bit mode configuration.
int dot_conf(FockState s, int dot) { return (s.bits() >> (2 * dot)) & 0b11; }

// Applies (prod c†_new)(prod c_old) to a state whose dot holds `old_conf`.
std::pair<int, FockState> replace_dot(FockState s, int dot, int new_conf) {
  int sign = 1;
  for (int spin = 1; spin >= 0; --spin) {
    const int m = 2 * dot + spin;
    if (s.occupied(m)) {
      sign *= s.sign_before(m);
      s = s.with(m, false);
    }
  }
  for (int spin = 1; spin >= 0; --spin) {
    const int m = 2 * dot + spin;
    if ((new_conf >> spin) & 1) {
      sign *= s.sign_before(m);
      s = s.with(m, true);
    }
  }
  return {sign, s};
}

template <class Key>
Key sample_index(const std::map<Key, double>& probs, Rng& rng) {
  double total = 0.0;
  for (const auto& [k, p] : probs) total += p;
  std::uniform_real_distribution<double> uni(0.0, total);
  double u = uni(rng);
  Key last = probs.begin()->first;
  for (const auto& [k, p] : probs) {
    if (p <= 0.0) continue;
    last = k;
    if (u < p) return k;
    u -= p;
  }
  return last;
}

AdderResult run_ideal(const Engine& engine) {
  const auto& sched = engine.schedule();
  const Encoding enc = sched.encoding;
  AdderResult res;
  res.inputs = sched.inputs;
  std::map<std::string, int> regs;
  LogicalBits cur{1, 1, 1};

  auto coherent = [&](const Propagator& prop, double duration, LogicalBits expected) {
    const StateVector in = StateVector::basis_state(engine.basis(), logical_to_fock(cur, enc));
    const double f = prop.evolve(in, duration).population(logical_to_fock(expected, enc));
    res.step_fidelities.push_back(f);
    cur = expected;
  };

  for (const auto& step : sched.steps) {
    if (const auto* load = std::get_if<LoadStep>(&step)) {
      cur = cur.with(load->dot, engine.resolve(load->source, regs));
    } else if (const auto* fi = std::get_if<FredkinInterval>(&step)) {
      coherent(engine.fredkin(), fi->duration, fredkin_output(cur));
    } else if (const auto* aux = std::get_if<AuxSwapInterval>(&step)) {
      coherent(engine.aux(Engine::applied_detune(*aux, regs)), aux->duration, swap01(cur));
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      const int bit = cur.bit(m->dot);
      regs[m->output] = bit;
      const int charge = logical_to_fock(cur, enc).site_occupancy(m->dot);
      res.measurements.push_back({m->output, m->dot, charge, bit, 1.0, false});
    } else {
      res.g = cur.t2;
      cur = {1, 1, 1};
    }
  }
  res.parity = regs.contains(kParity) ? regs[kParity] : 0;
  res.carry = regs.contains(kCarry) ? regs[kCarry] : 0;
  if (sched.steps.empty() || !std::holds_alternative<ResetStep>(sched.steps.back())) {
    res.g = cur.t2;
  }
  res.fidelity = 1.0;
  for (double f : res.step_fidelities) res.fidelity *= f;
  return res;
}

AdderResult run_sampled(const Engine& engine, std::uint64_t seed) {
  const auto& sched = engine.schedule();
  const Encoding enc = sched.encoding;
  const FockBasis& basis = engine.basis();
  Rng rng(seed);

  AdderResult res;
  res.inputs = sched.inputs;
  std::map<std::string, int> regs;
  StateVector psi = StateVector::basis_state(basis, FockState{});

  auto dot_distribution = [&](int dot, auto key_of) {
    std::map<int, double> probs;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      probs[key_of(basis[i], dot)] += std::norm(psi.amplitudes(static_cast<Eigen::Index>(i)));
    }
    return probs;
  };
  auto charge_of = [](FockState s, int dot) { return s.site_occupancy(dot); };
  auto likely_bit = [&](int dot) {
    const auto probs = dot_distribution(dot, charge_of);
    int best = probs.begin()->first;
    for (const auto& [c, p] : probs) {
      if (p > probs.at(best)) best = c;
    }
    return best == 0 ? 1 : 0;
  };

  for (const auto& step : sched.steps) {
    if (const auto* load = std::get_if<LoadStep>(&step)) {
      // Discard: collapse the dot onto one configuration, then re-prepare it.
      const int old_conf = sample_index(dot_distribution(load->dot, dot_conf), rng);
      const int new_conf = dot_configuration(engine.resolve(load->source, regs), enc);
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes.size());
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (dot_conf(basis[i], load->dot) != old_conf) continue;
        const auto [sign, target] = replace_dot(basis[i], load->dot, new_conf);
        out(static_cast<Eigen::Index>(*basis.index_of(target))) +=
            static_cast<double>(sign) * psi.amplitudes(static_cast<Eigen::Index>(i));
      }
      psi.amplitudes = out / out.norm();
    } else if (const auto* fi = std::get_if<FredkinInterval>(&step)) {
      psi = engine.fredkin().evolve(psi, fi->duration);
    } else if (const auto* aux = std::get_if<AuxSwapInterval>(&step)) {
      psi = engine.aux(Engine::applied_detune(*aux, regs)).evolve(psi, aux->duration);
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      const auto probs = dot_distribution(m->dot, charge_of);
      const int charge = sample_index(probs, rng);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].site_occupancy(m->dot) != charge) {
          psi.amplitudes(static_cast<Eigen::Index>(i)) = 0.0;
        }
      }
      psi.amplitudes /= psi.amplitudes.norm();
      const int bit = charge == 0 ? 1 : 0;
      const int zero_charge = enc.variant == Encoding::Variant::two_electron ? 2 : 1;
      regs[m->output] = bit;
      const double p = probs.at(charge);
      res.measurements.push_back({m->output, m->dot, charge, bit, p,
                                  charge != 0 && charge != zero_charge});
      res.step_fidelities.push_back(p);
    } else {
      res.g = likely_bit(2);
      psi = StateVector::basis_state(basis, FockState{});
    }
  }
  res.parity = regs.contains(kParity) ? regs[kParity] : 0;
  res.carry = regs.contains(kCarry) ? regs[kCarry] : 0;
  if (sched.steps.empty() || !std::holds_alternative<ResetStep>(sched.steps.back())) {
    res.g = likely_bit(2);
  }
  res.fidelity = 1.0;
  for (double f : res.step_fidelities) res.fidelity *= f;
  return res;
}

}  // namespace

HubbardParams with_default_aux_coupling(HubbardParams params) {
  if (params.gamma01 == 0.0) params.gamma01 = params.gamma12;
  return params;
}

AuxSwapCalibration aux_swap_calibration(const HubbardParams& params, double window_factor,
                                        int scan_points, double min_fidelity) {
  if (scan_points < 3) throw std::invalid_argument("calibration needs at least 3 scan points");
  if (!(window_factor > 0.0)) throw std::invalid_argument("calibration window must be > 0");
  const Encoding enc = Encoding::two_electron();
  const FockBasis basis = build_basis();
  const double detune = 2.0 * params.capacitive;
  const Propagator branch0(build_adder_hamiltonian(aux_params(params, 0.0), basis));
  const Propagator branch1(build_adder_hamiltonian(aux_params(params, detune), basis));

  // Nontrivial cases: parity 0 with r = 1, parity 1 with r = 0.
  const LogicalBits in0{1, 0, 1};
  const LogicalBits in1{0, 1, 0};
  const StateVector psi0 = StateVector::basis_state(basis, logical_to_fock(in0, enc));
  const StateVector psi1 = StateVector::basis_state(basis, logical_to_fock(in1, enc));
  const FockState out0 = logical_to_fock(swap01(in0), enc);
  const FockState out1 = logical_to_fock(swap01(in1), enc);

  auto branch_fidelities = [&](double t) {
    return std::pair{branch0.evolve(psi0, t).population(out0),
                     branch1.evolve(psi1, t).population(out1)};
  };
  auto objective = [&](double t) {
    const auto [a, b] = branch_fidelities(t);
    return 0.5 * (a + b);
  };

  AuxSwapCalibration cal;
  const double window = window_factor * gate_time(params).natural;
  const double h = window / scan_points;
  std::size_t best = 0;
  for (int k = 1; k <= scan_points; ++k) {
    cal.scan_times.push_back(h * k);
    cal.scan_fidelity.push_back(objective(h * k));
    if (cal.scan_fidelity.back() > cal.scan_fidelity[best]) best = cal.scan_fidelity.size() - 1;
  }
  if (cal.scan_fidelity[best] < min_fidelity) {
    std::ostringstream msg;
    msg << "aux swap calibration failed: best mean swap fidelity " << cal.scan_fidelity[best]
        << " below " << min_fidelity;
    throw CalibrationError(msg.str(), cal);
  }

  // Golden-section refinement inside the neighbouring grid cells.
  double lo = std::max(cal.scan_times[best] - h, 1e-12 * window);
  double hi = std::min(cal.scan_times[best] + h, window);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13 * window; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  cal.duration = objective(refined) >= cal.scan_fidelity[best] ? refined : cal.scan_times[best];
  std::tie(cal.fidelity_parity0, cal.fidelity_parity1) = branch_fidelities(cal.duration);
  return cal;
}

PulseSchedule default_schedule(AdderInputs inputs, const HubbardParams& params,
                               const AuxSwapCalibration& calibration) {
  check_bit(inputs.p, "p");
  check_bit(inputs.q, "q");
  check_bit(inputs.r, "r");
  PulseSchedule s;
  s.params = with_default_aux_coupling(params);
  s.inputs = inputs;
  const double t_star = gate_time(s.params).natural;
  s.steps = {
      LoadStep{0, BitSource::p},
      LoadStep{1, BitSource::const0},
      FredkinInterval{t_star},
      LoadStep{0, BitSource::q},
      FredkinInterval{t_star},
      LoadStep{0, BitSource::r},
      FredkinInterval{t_star},
      MeasureStep{1, kParity},
      AuxSwapInterval{calibration.duration, 2.0 * s.params.capacitive},
      FredkinInterval{t_star},
      LoadStep{0, BitSource::q},
      FredkinInterval{t_star},
      MeasureStep{1, kCarry},
      ResetStep{},
  };
  return s;
}

PulseSchedule default_schedule(AdderInputs inputs, const HubbardParams& params) {
  return default_schedule(inputs, params,
                          aux_swap_calibration(with_default_aux_coupling(params)));
}

int count_fredkin_intervals(const PulseSchedule& s) {
  int n = 0;
  for (const auto& st : s.steps) n += std::holds_alternative<FredkinInterval>(st);
  return n;
}

int count_aux_swaps(const PulseSchedule& s) {
  int n = 0;
  for (const auto& st : s.steps) n += std::holds_alternative<AuxSwapInterval>(st);
  return n;
}

double coherent_time(const PulseSchedule& s) {
  double t = 0.0;
  for (const auto& st : s.steps) {
    if (const auto* f = std::get_if<FredkinInterval>(&st)) t += f->duration;
    if (const auto* a = std::get_if<AuxSwapInterval>(&st)) t += a->duration;
  }
  return t;
}

AdderResult run_adder(const PulseSchedule& schedule, RunMode mode) {
  const Engine engine(schedule);
  return mode.kind == RunMode::Kind::ideal_branch ? run_ideal(engine)
                                                  : run_sampled(engine, mode.seed);
}

std::vector<AdderResult> adder_truth_table(const HubbardParams& params) {
  const HubbardParams p = with_default_aux_coupling(params);
  const AuxSwapCalibration cal = aux_swap_calibration(p);
  std::vector<AdderResult> rows(8);
  parallel_for(8, [&](std::size_t i) {
    const int k = static_cast<int>(i);
    const AdderInputs in{(k >> 2) & 1, (k >> 1) & 1, k & 1};
    rows[i] = run_adder(default_schedule(in, p, cal));
  });
  return rows;
}

std::pair<int, int> ShotStatistics::majority() const {
  std::pair<int, int> best{-1, -1};
  int best_count = -1;
  for (const auto& [outcome, count] : counts) {
    if (count > best_count) {
      best_count = count;
      best = outcome;
    }
  }
  return best;
}

ShotStatistics sample_adder(const PulseSchedule& schedule, int shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_adder: need at least one shot");
  const Engine engine(schedule);
  std::vector<AdderResult> results(static_cast<std::size_t>(shots));
  parallel_for(results.size(), [&](std::size_t i) {
    results[i] = run_sampled(engine, child_seed(seed, i));
  });
  ShotStatistics stats;
  stats.shots = shots;
  stats.seed = seed;
  for (const auto& r : results) {
    ++stats.counts[{r.parity, r.carry}];
    bool leaked = false;
    for (const auto& m : r.measurements) leaked = leaked || m.leakage;
    stats.leakage_shots += leaked;
  }
  stats.results = std::move(results);
  return stats;
}

std::string schedule_to_json(const PulseSchedule& s) {
  json doc;
  doc["encoding"] = s.encoding.name();
  doc["inputs"] = {{"p", s.inputs.p}, {"q", s.inputs.q}, {"r", s.inputs.r}};
  doc["params"] = {{"eps0", s.params.eps[0]},      {"eps1", s.params.eps[1]},
                   {"eps2", s.params.eps[2]},      {"gamma12", s.params.gamma12},
                   {"gamma01", s.params.gamma01},  {"U", s.params.charging},
                   {"V", s.params.capacitive},     {"gamma_si_ueV", s.params.gamma_si_ueV}};
  json steps = json::array();
  for (const auto& st : s.steps) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, LoadStep>) {
            steps.push_back({{"kind", "load"}, {"dot", v.dot}, {"source", to_string(v.source)}});
          } else if constexpr (std::is_same_v<T, FredkinInterval>) {
            steps.push_back({{"kind", "fredkin_interval"}, {"duration", v.duration}});
          } else if constexpr (std::is_same_v<T, AuxSwapInterval>) {
            steps.push_back({{"kind", "aux_swap_interval"},
                             {"duration", v.duration},
                             {"conditional_detune", v.conditional_detune}});
          } else if constexpr (std::is_same_v<T, MeasureStep>) {
            steps.push_back({{"kind", "measure"}, {"dot", v.dot}, {"output", v.output}});
          } else {
            steps.push_back({{"kind", "reset"}});
          }
        },
        st);
  }
  doc["steps"] = steps;
  return doc.dump(2);
}

PulseSchedule schedule_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    PulseSchedule s;
    s.encoding = parse_encoding(doc.value("encoding", std::string("two-electron")));
    const auto& in = doc.at("inputs");
    s.inputs = {in.at("p").get<int>(), in.at("q").get<int>(), in.at("r").get<int>()};
    const auto& p = doc.at("params");
    s.params.eps = {p.at("eps0").get<double>(), p.at("eps1").get<double>(),
                    p.at("eps2").get<double>()};
    s.params.gamma12 = p.at("gamma12").get<double>();
    s.params.gamma01 = p.at("gamma01").get<double>();
    s.params.charging = p.at("U").get<double>();
    s.params.capacitive = p.at("V").get<double>();
    s.params.gamma_si_ueV = p.at("gamma_si_ueV").get<double>();
    s.params.validate();
    for (const auto& st : doc.at("steps")) {
      const auto kind = st.at("kind").get<std::string>();
      if (kind == "load") {
        s.steps.emplace_back(
            LoadStep{st.at("dot").get<int>(), parse_bit_source(st.at("source").get<std::string>())});
      } else if (kind == "fredkin_interval") {
        s.steps.emplace_back(FredkinInterval{st.at("duration").get<double>()});
      } else if (kind == "aux_swap_interval") {
        s.steps.emplace_back(AuxSwapInterval{st.at("duration").get<double>(),
                                             st.at("conditional_detune").get<double>()});
      } else if (kind == "measure") {
        s.steps.emplace_back(
            MeasureStep{st.at("dot").get<int>(), st.at("output").get<std::string>()});
      } else if (kind == "reset") {
        s.steps.emplace_back(ResetStep{});
      } else {
        throw ScheduleError("unknown step kind '" + kind + "'");
      }
    }
    return s;
  } catch (const ScheduleError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScheduleError(std::string("malformed schedule: ") + e.what());
  }
}

std::string adder_results_csv(const std::vector<AdderResult>& rows) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "p,q,r,parity,carry,fidelity,step_fidelities\n";
  for (const auto& r : rows) {
    os << r.inputs.p << ',' << r.inputs.q << ',' << r.inputs.r << ',' << r.parity << ','
       << r.carry << ',' << r.fidelity << ',';
    for (std::size_t i = 0; i < r.step_fidelities.size(); ++i) {
      os << (i ? ";" : "") << r.step_fidelities[i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qdsim
