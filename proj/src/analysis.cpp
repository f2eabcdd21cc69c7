#include "dickesim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "dickesim/spaces.hpp"

namespace dickesim {

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.basis != phi.basis)
    throw ConsistencyError("fidelity arguments live on different bases");
  return std::norm(inner(phi, psi));
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// member vectors |n>|v> of the doublet on the evolution basis
struct DoubletMembers {
  VectorXcd lower;
  VectorXcd upper;
};

DoubletMembers register_members(const IonChainConfig& cfg, const DoubletTarget& target,
                                const BasisTag& basis) {
  const int fock = cfg.n_max + 1;
  DoubletMembers m;
  m.lower = VectorXcd::Zero(basis.dim());
  m.upper = VectorXcd::Zero(basis.dim());
  if (cfg.homogeneous()) {
    const auto [n_lo, k_lo] = target.lower_member();
    const auto [n_up, k_up] = target.upper_member();
    const StateVector d_lo = dicke_state(cfg.num_ions, k_lo);
    const StateVector d_up = dicke_state(cfg.num_ions, k_up);
    for (int b = 0; b < 1 << cfg.num_ions; ++b) {
      m.lower(b * fock + n_lo) = d_lo.amplitudes(b);
      m.upper(b * fock + n_up) = d_up.amplitudes(b);
    }
  } else {
    CollectiveNumberBasis cn = build_collective_number_basis(cfg, target.k0 + 1);
    const auto& v_lo = cn.member(target.k0, target.branch).state;
    const auto& v_up = cn.member(target.k0 + 1, target.branch).state;
    const auto [n_lo, k_lo] = target.lower_member();
    const auto [n_up, k_up] = target.upper_member();
    for (int b = 0; b < 1 << cfg.num_ions; ++b) {
      m.lower(b * fock + n_lo) = v_lo(b);
      m.upper(b * fock + n_up) = v_up(b);
    }
  }
  return m;
}

}  // namespace

RabiTrace rabi_trace(const IonChainConfig& config, const DoubletTarget& target,
                     FidelityModel model, std::span<const double> times, bool retune) {
  config.validate();
  target.validate(config);
  RabiTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.lower.reserve(times.size());
  trace.upper.reserve(times.size());

  if (model == FidelityModel::TwoLevel) {
    const double half = doublet_rabi_frequency(config, target) / 2.0;
    for (double t : times) {
      trace.lower.push_back(std::cos(half * t) * std::cos(half * t));
      trace.upper.push_back(std::sin(half * t) * std::sin(half * t));
    }
    return trace;
  }

  IonChainConfig cfg = config;
  if (retune) {
    if (cfg.homogeneous()) {
      cfg = cfg.with_uniform_delta0(resonance_delta0(target, cfg.num_ions));
    } else {
      CollectiveNumberBasis cn = build_collective_number_basis(cfg, target.k0 + 1);
      cfg = cfg.with_delta0_shift(inhomogeneous_resonance_shift(cfg, cn, target));
    }
  }

  if (model == FidelityModel::FullSymmetric) {
    if (!cfg.homogeneous())
      throw BasisError("symmetric-model trace requires homogeneous couplings");
    OperatorMatrix h = symmetric_effective_hamiltonian(cfg, target.sideband);
    HermitianPropagator prop(h);
    const int fock = cfg.n_max + 1;
    const auto [n_lo, k_lo] = target.lower_member();
    const auto [n_up, k_up] = target.upper_member();
    StateVector psi0 = StateVector::basis_state(h.basis, k_lo * fock + n_lo);
    for (double t : times) {
      StateVector psi = prop.evolve(psi0, t);
      trace.lower.push_back(std::norm(psi.amplitudes(k_lo * fock + n_lo)));
      trace.upper.push_back(std::norm(psi.amplitudes(k_up * fock + n_up)));
    }
    return trace;
  }

  OperatorMatrix h = effective_hamiltonian(cfg, target.sideband);
  HermitianPropagator prop(h);
  DoubletMembers m = register_members(cfg, target, h.basis);
  StateVector psi0(h.basis, m.lower);
  for (double t : times) {
    StateVector psi = prop.evolve(psi0, t);
    trace.lower.push_back(std::norm(m.lower.dot(psi.amplitudes)));
    trace.upper.push_back(std::norm(m.upper.dot(psi.amplitudes)));
  }
  return trace;
}

double symmetric_leakage(const StateVector& psi) {
  if (psi.basis.kind != BasisKind::FullRegister)
    throw BasisError("symmetric leakage is defined on the full register");
  psi.require_normalized();
  const int N = psi.basis.num_ions;
  const int fock = psi.basis.fock_levels();
  const int ion_dim = 1 << N;
  const MatrixXcd v = dicke_isometry(N);
  const int blocks = psi.basis.with_ancilla ? 2 : 1;
  double sym = 0.0;
  for (int a = 0; a < blocks; ++a)
    for (int n = 0; n < fock; ++n)
      for (int k = 0; k <= N; ++k) {
        Complex c = 0.0;
        for (int b = 0; b < ion_dim; ++b)
          c += std::conj(v(b, k)) * psi.amplitudes((a * ion_dim + b) * fock + n);
        sym += std::norm(c);
      }
  return std::clamp(1.0 - sym, 0.0, 1.0);
}

SweepResult selectivity_sweep(const IonChainConfig& base, const std::string& protocol,
                              std::span<const double> ratios) {
  if (ratios.empty()) throw ParameterError("sweep needs at least one ratio");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0)) throw DomainError("sweep ratios must be positive");
    if (i > 0 && !(ratios[i] > ratios[i - 1]))
      throw DomainError("sweep axis must be strictly increasing");
  }
  int ladder_k = -1;
  if (protocol == "w" || protocol == "w_state") {
    ladder_k = -1;
  } else if (protocol.rfind("ladder:", 0) == 0) {
    try {
      ladder_k = std::stoi(protocol.substr(7));
    } catch (const std::exception&) {
      throw ParameterError("malformed ladder protocol '" + protocol + "'; use ladder:K");
    }
    if (ladder_k < 1) throw ParameterError("ladder sweep needs K >= 1");
  } else {
    throw ParameterError("unknown sweep protocol '" + protocol + "' (use w or ladder:K)");
  }

  SweepResult out;
  out.axis.assign(ratios.begin(), ratios.end());
  out.infidelity.assign(ratios.size(), 0.0);
  out.wall_ms.assign(ratios.size(), 0.0);
  out.protocol = protocol;
  out.config = base;

  std::vector<std::exception_ptr> errors(ratios.size());
  auto job = [&](std::size_t i) {
    try {
      const auto start = std::chrono::steady_clock::now();
      IonChainConfig cfg =
          IonChainConfig::homogeneous_ratio(base.num_ions, base.n_max, ratios[i]);
      PulseSchedule schedule =
          ladder_k < 0 ? prepare_w_state(cfg) : dicke_ladder(cfg, ladder_k);
      ExecutionOptions opt;
      opt.model_override = FidelityModel::FullSymmetric;
      ExecutionResult run = run_schedule(schedule, opt);
      out.infidelity[i] = std::clamp(1.0 - run.fidelity_to_ideal, 0.0, 1.0);
      out.wall_ms[i] = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), ratios.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < ratios.size(); ++i) job(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < ratios.size(); i = next.fetch_add(1))
          job(i);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const SimError& e) {
      throw SimError("ratio " + std::to_string(ratios[i]) + ": " + e.what());
    }
  }
  return out;
}

TimescaleCheck timescale_check(double omega_eff_hz, int num_ions) {
  if (!(omega_eff_hz > 0.0)) throw ParameterError("omega_eff_hz must be > 0");
  if (num_ions < 1) throw ParameterError("need at least one ion");
  TimescaleCheck check;
  check.pulse_seconds = kPi / (2.0 * std::sqrt(static_cast<double>(num_ions)) * omega_eff_hz);
  check.fits_pulse_budget = check.pulse_seconds <= 1e-4;
  check.fits_decoherence = check.pulse_seconds <= 1e-2;
  return check;
}

}  // namespace dickesim
