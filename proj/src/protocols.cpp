#include "dickesim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dickesim/spaces.hpp"

namespace dickesim {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pi(double angle) { return std::abs(angle - kPi) < 1e-9; }

std::string member_str(std::pair<int, int> m) {
  return "(n=" + std::to_string(m.first) + ", k=" + std::to_string(m.second) + ")";
}

// Ideal-model support tracking for the compile-time reachability check:
// the set of (fock, k) cells the ideal state can occupy.
using Support = std::set<std::pair<int, int>>;

std::string support_str(const Support& s) {
  std::string out = "{";
  for (const auto& m : s) {
    if (out.size() > 1) out += ", ";
    out += member_str(m);
  }
  return out + "}";
}

}  // namespace

// --- protocol builders ---------------------------------------------------

PulseSchedule prepare_w_state(const IonChainConfig& config) {
  config.validate();
  if (!config.homogeneous())
    throw BasisError("W-state schedule requires homogeneous couplings");
  if (config.n_max < 2)
    throw ParameterError("W-state schedule needs n_max >= 2 for the phonon headroom");
  PulseSchedule s;
  s.config = config;
  PulseStep step;
  step.kind = StepKind::SelectiveSideband;
  step.target = DoubletTarget::blue(0, 0);
  step.rabi_angle = kPi;
  step.phase = kPi / 2.0;
  s.steps.push_back(step);
  return s;
}

PulseSchedule prepare_w_n_plus_1(const IonChainConfig& config) {
  PulseSchedule s = prepare_w_state(config);
  // cos(rabi_angle / 2) = 1/sqrt(N+1) splits the population so that the
  // phonon doublet carries the (N+1)-th equal share.
  s.steps[0].rabi_angle = 2.0 * std::acos(1.0 / std::sqrt(config.num_ions + 1.0));
  return s;
}

PulseSchedule dicke_ladder(const IonChainConfig& config, int k_target) {
  config.validate();
  if (k_target < 0 || k_target > config.num_ions)
    throw DomainError("ladder endpoint k_target = " + std::to_string(k_target) +
                      " outside 0..N = " + std::to_string(config.num_ions));
  PulseSchedule s;
  s.config = config;
  if (k_target == 0) return s;
  if (!config.homogeneous())
    throw BasisError("ladder schedule requires homogeneous couplings");
  if (config.n_max < 2)
    throw ParameterError("ladder schedule needs n_max >= 2 for the phonon headroom");
  for (int i = 1; i <= k_target; ++i) {
    PulseStep step;
    step.kind = StepKind::SelectiveSideband;
    // odd steps climb |n=0>|D_{i-1}> -> |1>|D_i>, even steps hand the phonon
    // back while climbing, |1>|D_{i-1}> -> |0>|D_i>
    step.target = (i % 2 == 1) ? DoubletTarget::blue(0, i - 1) : DoubletTarget::red(0, i - 1);
    step.rabi_angle = kPi;
    step.phase = kPi / 2.0;
    s.steps.push_back(step);
  }
  return s;
}

StateVector atomic_coherent_prep(const IonChainConfig& config, double theta) {
  config.validate();
  OperatorMatrix g = carrier_generator(config);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(g.entries);
  if (solver.info() != Eigen::Success)
    throw ContractError("carrier generator eigendecomposition failed");
  const int dim = g.basis.dim();
  VectorXcd modal = solver.eigenvectors().adjoint().col(0);  // <v_i | g...g, n=0>
  for (int i = 0; i < dim; ++i)
    modal(i) *= std::exp(Complex(0.0, theta * solver.eigenvalues()(i)));
  return StateVector(g.basis, solver.eigenvectors() * modal);
}

// --- compilation ---------------------------------------------------------

CompiledSchedule compile_schedule(const PulseSchedule& schedule) {
  const IonChainConfig& cfg = schedule.config;
  cfg.validate();
  const int N = cfg.num_ions;
  const bool homo = cfg.homogeneous();

  if (schedule.initial.fock < 0 || schedule.initial.fock > cfg.n_max)
    throw DomainError("initial Fock number " + std::to_string(schedule.initial.fock) +
                      " outside 0..n_max = " + std::to_string(cfg.n_max));
  int init_k = schedule.initial.dicke;
  if (schedule.initial.bits) {
    if (static_cast<int>(schedule.initial.bits->size()) != N)
      throw ParameterError("bits initial state must list exactly N = " + std::to_string(N) +
                           " entries");
    init_k = 0;
    for (int b : *schedule.initial.bits) {
      if (b != 0 && b != 1) throw ParameterError("bits entries must be 0 or 1");
      init_k += b;
    }
  } else if (init_k < 0 || init_k > N) {
    throw DomainError("initial Dicke index " + std::to_string(init_k) +
                      " outside 0..N = " + std::to_string(N));
  }

  // Lazily built collective-number data for inhomogeneous chains.
  std::optional<CollectiveNumberBasis> cn;
  std::optional<OperatorMatrix> raising_bare;
  auto collective = [&]() -> const CollectiveNumberBasis& {
    if (!cn) cn = build_collective_number_basis(cfg, N);
    return *cn;
  };

  CompiledSchedule out;
  out.schedule = schedule;
  Support support{{schedule.initial.fock, init_k}};

  for (std::size_t si = 0; si < schedule.steps.size(); ++si) {
    const PulseStep& step = schedule.steps[si];
    if (step.rabi_angle < 0.0)
      throw ParameterError("step " + std::to_string(si + 1) + ": rabi_angle must be >= 0");

    CompiledSegment seg;
    seg.step_index = si;
    seg.kind = step.kind;
    seg.model = step.fidelity_model;
    seg.target = step.target;
    seg.rabi_angle = step.rabi_angle;
    seg.phase = step.phase;
    seg.delta0 = cfg.delta0;

    switch (step.kind) {
      case StepKind::SelectiveSideband: {
        step.target.validate(cfg);
        if (homo) {
          seg.delta0 = VectorXd::Constant(N, resonance_delta0(step.target, N));
          seg.rabi_frequency = doublet_rabi_frequency(cfg, step.target);
        } else {
          if (step.fidelity_model != FidelityModel::FullRegister)
            throw BasisError("step " + std::to_string(si + 1) +
                             ": inhomogeneous couplings only support the full-register model");
          const CollectiveNumberBasis& basis = collective();
          const double shift = inhomogeneous_resonance_shift(cfg, basis, step.target);
          seg.delta0 = cfg.delta0.array() + shift;
          if (!raising_bare)
            raising_bare = collective_raising(cfg, BasisTag::full_register(N, 0));
          const auto& lo = basis.member(step.target.k0, step.target.branch);
          const auto& up = basis.member(step.target.k0 + 1, step.target.branch);
          const Complex g = up.state.dot(raising_bare->entries * lo.state);
          seg.rabi_frequency = 2.0 * std::sqrt(step.target.n0 + 1.0) * std::abs(g);
        }
        if (!(seg.rabi_frequency > 1e-300))
          throw DomainError("step " + std::to_string(si + 1) +
                            ": zero sideband coupling, pulse duration diverges");
        seg.duration = step.rabi_angle / seg.rabi_frequency;

        const auto lo = step.target.lower_member();
        const auto up = step.target.upper_member();
        if (!support.count(lo) && !support.count(up))
          throw ConsistencyError("step " + std::to_string(si + 1) + ": target doublet {" +
                                 member_str(lo) + ", " + member_str(up) +
                                 "} is unreachable; the ideal state occupies " +
                                 support_str(support));
        const bool had_lo = support.count(lo) > 0;
        const bool had_up = support.count(up) > 0;
        support.erase(lo);
        support.erase(up);
        if (is_pi(step.rabi_angle)) {
          if (had_lo) support.insert(up);
          if (had_up) support.insert(lo);
        } else {
          support.insert(lo);
          support.insert(up);
        }
        break;
      }
      case StepKind::Carrier: {
        // instantaneous ideal rotation, mixes every Dicke index
        Support next;
        for (const auto& m : support)
          for (int k = 0; k <= N; ++k) next.insert({m.first, k});
        support = std::move(next);
        break;
      }
      case StepKind::AncillaRedSideband: {
        const int n0 = step.target.n0;
        if (n0 < 0 || n0 + 1 > cfg.n_max)
          throw DomainError("step " + std::to_string(si + 1) + ": ancilla pulse needs 0 <= n0 and n0+1 <= n_max = " +
                            std::to_string(cfg.n_max));
        Support next;
        for (const auto& m : support) {
          if (m.first == n0 + 1) {
            next.insert({n0, m.second});
            if (!is_pi(step.rabi_angle)) next.insert(m);
          } else {
            next.insert(m);
          }
        }
        support = std::move(next);
        break;
      }
      case StepKind::Measure:
        break;
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

// --- execution -----------------------------------------------------------

namespace {

struct ExecContext {
  IonChainConfig cfg;
  BasisTag basis;        // execution basis, possibly with ancilla
  BasisTag inner;        // same without the ancilla factor
  int fock = 1;          // Fock levels
  int ion_dim = 1;       // 2^N or N+1
  int blocks = 1;        // ancilla blocks
  int block_size = 1;
  MatrixXcd isometry;    // 2^N x (N+1), FullRegister only
  PhaseMode mode = PhaseMode::Carry;
};

double diag_energy(const ExecContext& ctx, const VectorXd& delta0, int inner_index) {
  const int n = inner_index % ctx.fock;
  const int r = inner_index / ctx.fock;
  if (ctx.basis.kind == BasisKind::DickeFock)
    return -ctx.cfg.omega0(0) * (n - delta0(0)) * (ctx.cfg.num_ions - r);
  double e = 0.0;
  for (int j = 0; j < ctx.cfg.num_ions; ++j)
    if (!(r >> j & 1)) e -= ctx.cfg.omega0(j) * (n - delta0(j));
  return e;
}

void apply_diag_phases(const ExecContext& ctx, const VectorXd& delta0, double tau,
                       VectorXcd& psi) {
  if (tau == 0.0) return;
  for (int i = 0; i < ctx.block_size; ++i) {
    const Complex phase = std::exp(Complex(0.0, -diag_energy(ctx, delta0, i) * tau));
    for (int a = 0; a < ctx.blocks; ++a) psi(a * ctx.block_size + i) *= phase;
  }
}

// In-place rotation on the doublet span: U = cos I - i sin (e^{-i phi}
// |up><lo| + e^{i phi} |lo><up|), identity elsewhere.
void doublet_rotation(const ExecContext& ctx, const DoubletTarget& target, double rabi_angle,
                      double phase, VectorXcd& psi) {
  const auto [n_lo, k_lo] = target.lower_member();
  const auto [n_up, k_up] = target.upper_member();
  const double c = std::cos(rabi_angle / 2.0);
  const Complex s_dn = Complex(0.0, -1.0) * std::sin(rabi_angle / 2.0) *
                       std::exp(Complex(0.0, -phase));
  const Complex s_up = Complex(0.0, -1.0) * std::sin(rabi_angle / 2.0) *
                       std::exp(Complex(0.0, phase));
  for (int a = 0; a < ctx.blocks; ++a) {
    const int base = a * ctx.block_size;
    Complex amp_lo, amp_up;
    if (ctx.basis.kind == BasisKind::DickeFock) {
      amp_lo = psi(base + k_lo * ctx.fock + n_lo);
      amp_up = psi(base + k_up * ctx.fock + n_up);
    } else {
      amp_lo = amp_up = Complex(0.0, 0.0);
      for (int b = 0; b < ctx.ion_dim; ++b) {
        amp_lo += std::conj(ctx.isometry(b, k_lo)) * psi(base + b * ctx.fock + n_lo);
        amp_up += std::conj(ctx.isometry(b, k_up)) * psi(base + b * ctx.fock + n_up);
      }
    }
    const Complex new_lo = c * amp_lo + s_up * amp_up;
    const Complex new_up = c * amp_up + s_dn * amp_lo;
    const Complex d_lo = new_lo - amp_lo;
    const Complex d_up = new_up - amp_up;
    if (ctx.basis.kind == BasisKind::DickeFock) {
      psi(base + k_lo * ctx.fock + n_lo) += d_lo;
      psi(base + k_up * ctx.fock + n_up) += d_up;
    } else {
      for (int b = 0; b < ctx.ion_dim; ++b) {
        psi(base + b * ctx.fock + n_lo) += ctx.isometry(b, k_lo) * d_lo;
        psi(base + b * ctx.fock + n_up) += ctx.isometry(b, k_up) * d_up;
      }
    }
  }
}

// Ancilla red-sideband rotation pairing |n0+1>|g_A> with |n0>|e_A> for every
// ionic configuration; ideal at every fidelity level.
void ancilla_rotation(const ExecContext& ctx, int n0, double rabi_angle, double phase,
                      VectorXcd& psi) {
  const double c = std::cos(rabi_angle / 2.0);
  const Complex s_dn = Complex(0.0, -1.0) * std::sin(rabi_angle / 2.0) *
                       std::exp(Complex(0.0, -phase));
  const Complex s_up = Complex(0.0, -1.0) * std::sin(rabi_angle / 2.0) *
                       std::exp(Complex(0.0, phase));
  for (int r = 0; r < ctx.ion_dim; ++r) {
    const int i_g = r * ctx.fock + n0 + 1;
    const int i_e = ctx.block_size + r * ctx.fock + n0;
    const Complex amp_g = psi(i_g);
    const Complex amp_e = psi(i_e);
    psi(i_g) = c * amp_g + s_up * amp_e;
    psi(i_e) = c * amp_e + s_dn * amp_g;
  }
}

MatrixXcd exp_i_scale(const MatrixXcd& herm, double scale) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(herm);
  if (solver.info() != Eigen::Success)
    throw ContractError("eigendecomposition failed in matrix exponential");
  VectorXcd phases(herm.rows());
  for (int i = 0; i < herm.rows(); ++i)
    phases(i) = std::exp(Complex(0.0, scale * solver.eigenvalues()(i)));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// exp(i theta (e^{-i phi} J~+ + h.c.)) on the ion factor alone.
void carrier_rotation(const ExecContext& ctx, double theta, double phase, VectorXcd& psi) {
  MatrixXcd gen = MatrixXcd::Zero(ctx.ion_dim, ctx.ion_dim);
  const Complex w = std::exp(Complex(0.0, -phase));
  if (ctx.basis.kind == BasisKind::DickeFock) {
    for (int k = 0; k < ctx.cfg.num_ions; ++k)
      gen(k + 1, k) = w * std::abs(ctx.cfg.omega_eff(0)) *
                      dicke_ladder_coeff(ctx.cfg.num_ions, k);
  } else {
    for (int b = 0; b < ctx.ion_dim; ++b)
      for (int j = 0; j < ctx.cfg.num_ions; ++j)
        if (!(b >> j & 1)) gen(b | 1 << j, b) += w * std::abs(ctx.cfg.omega_eff(j));
  }
  gen += MatrixXcd(gen.adjoint());
  const MatrixXcd u = exp_i_scale(gen, theta);
  VectorXcd col(ctx.ion_dim);
  for (int a = 0; a < ctx.blocks; ++a)
    for (int n = 0; n < ctx.fock; ++n) {
      const int base = a * ctx.block_size + n;
      for (int r = 0; r < ctx.ion_dim; ++r) col(r) = psi(base + r * ctx.fock);
      col = u * col;
      for (int r = 0; r < ctx.ion_dim; ++r) psi(base + r * ctx.fock) = col(r);
    }
}

// Extract / embed the symmetric coordinates of one ancilla block of a
// FullRegister vector.
VectorXcd extract_symmetric(const ExecContext& ctx, const VectorXcd& psi, int a) {
  const int N = ctx.cfg.num_ions;
  VectorXcd c = VectorXcd::Zero((N + 1) * ctx.fock);
  for (int k = 0; k <= N; ++k)
    for (int b = 0; b < ctx.ion_dim; ++b) {
      const Complex v = std::conj(ctx.isometry(b, k));
      if (v == Complex(0.0, 0.0)) continue;
      for (int n = 0; n < ctx.fock; ++n)
        c(k * ctx.fock + n) += v * psi(a * ctx.block_size + b * ctx.fock + n);
    }
  return c;
}

void add_symmetric(const ExecContext& ctx, const VectorXcd& c, double sign, int a,
                   VectorXcd& psi) {
  const int N = ctx.cfg.num_ions;
  for (int k = 0; k <= N; ++k)
    for (int b = 0; b < ctx.ion_dim; ++b) {
      const Complex v = ctx.isometry(b, k);
      if (v == Complex(0.0, 0.0)) continue;
      for (int n = 0; n < ctx.fock; ++n)
        psi(a * ctx.block_size + b * ctx.fock + n) += sign * v * c(k * ctx.fock + n);
    }
}

IonChainConfig retuned(const IonChainConfig& cfg, const VectorXd& delta0) {
  IonChainConfig out = cfg;
  out.delta0 = delta0;
  return out;
}

std::uint64_t step_seed(std::uint64_t base, std::size_t step_index) {
  return base ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(step_index + 1));
}

}  // namespace

ExecutionResult execute_schedule(const CompiledSchedule& compiled,
                                 const ExecutionOptions& options) {
  const PulseSchedule& schedule = compiled.schedule;
  const IonChainConfig& cfg = schedule.config;
  const int N = cfg.num_ions;
  const bool homo = cfg.homogeneous();

  auto model_of = [&](const CompiledSegment& seg) {
    return options.model_override.value_or(seg.model);
  };

  bool ancilla = false;
  bool need_register = !homo || schedule.initial.bits.has_value();
  for (const auto& seg : compiled.segments) {
    if (seg.kind == StepKind::Measure || seg.kind == StepKind::AncillaRedSideband)
      ancilla = true;
    if ((seg.kind == StepKind::SelectiveSideband || seg.kind == StepKind::Carrier) &&
        model_of(seg) == FidelityModel::FullRegister)
      need_register = true;
    if (!homo && seg.kind == StepKind::SelectiveSideband &&
        model_of(seg) != FidelityModel::FullRegister)
      throw BasisError("inhomogeneous couplings only support the full-register model");
  }

  ExecContext ctx;
  ctx.cfg = cfg;
  ctx.basis = need_register ? BasisTag::full_register(N, cfg.n_max, ancilla)
                            : BasisTag::dicke_fock(N, cfg.n_max, ancilla);
  ctx.inner = need_register ? BasisTag::full_register(N, cfg.n_max)
                            : BasisTag::dicke_fock(N, cfg.n_max);
  ctx.fock = cfg.n_max + 1;
  ctx.ion_dim = need_register ? 1 << N : N + 1;
  ctx.blocks = ancilla ? 2 : 1;
  ctx.block_size = ctx.ion_dim * ctx.fock;
  if (need_register) ctx.isometry = dicke_isometry(N);
  ctx.mode = options.phase_mode;

  // initial vector (ancilla |g>)
  VectorXcd psi = VectorXcd::Zero(ctx.basis.dim());
  if (schedule.initial.bits) {
    int bits = 0;
    for (int j = 0; j < N; ++j) bits |= (*schedule.initial.bits)[j] << j;
    psi(bits * ctx.fock + schedule.initial.fock) = 1.0;
  } else if (need_register) {
    StateVector d = dicke_state(N, schedule.initial.dicke);
    for (int b = 0; b < ctx.ion_dim; ++b)
      psi(b * ctx.fock + schedule.initial.fock) = d.amplitudes(b);
  } else {
    psi(schedule.initial.dicke * ctx.fock + schedule.initial.fock) = 1.0;
  }
  VectorXcd ideal = psi;

  ExecutionResult result;
  result.basis = ctx.basis;
  double t = 0.0;
  auto push_trace = [&](double time) {
    TraceRow row;
    row.t = time;
    row.populations = psi.cwiseAbs2();
    result.trace.push_back(std::move(row));
  };
  push_trace(0.0);

  for (const auto& seg : compiled.segments) {
    StepRecord record;
    record.step_index = seg.step_index;
    record.kind = seg.kind;
    record.t_begin = t;

    switch (seg.kind) {
      case StepKind::SelectiveSideband: {
        const FidelityModel model = model_of(seg);
        const double tau = seg.duration;
        // ideal reference always runs the resonant-doublet closed form, with
        // the same phase bookkeeping as the simulated branch
        apply_diag_phases(ctx, seg.delta0, tau, ideal);
        doublet_rotation(ctx, seg.target, seg.rabi_angle, seg.phase, ideal);

        if (model == FidelityModel::TwoLevel) {
          const VectorXcd begin = psi;
          auto at = [&](double f) {
            VectorXcd v = begin;
            apply_diag_phases(ctx, seg.delta0, f * tau, v);
            doublet_rotation(ctx, seg.target, f * seg.rabi_angle, seg.phase, v);
            return v;
          };
          for (int p = 1; p <= options.trace_points_per_segment; ++p) {
            const double f = static_cast<double>(p) / (options.trace_points_per_segment + 1);
            VectorXcd v = at(f);
            std::swap(psi, v);
            push_trace(t + f * tau);
            std::swap(psi, v);
          }
          psi = at(1.0);
          if (ctx.mode == PhaseMode::Reset) apply_diag_phases(ctx, seg.delta0, -tau, psi);
        } else if (model == FidelityModel::FullSymmetric) {
          OperatorMatrix h = symmetric_effective_hamiltonian(retuned(cfg, seg.delta0),
                                                             seg.target.sideband, seg.phase);
          HermitianPropagator prop(h);
          const VectorXcd begin = psi;
          auto at = [&](double f) {
            VectorXcd v = begin;
            if (ctx.basis.kind == BasisKind::DickeFock) {
              for (int a = 0; a < ctx.blocks; ++a)
                v.segment(a * ctx.block_size, ctx.block_size) =
                    prop.evolve(StateVector(h.basis,
                                            begin.segment(a * ctx.block_size, ctx.block_size)),
                                f * tau)
                        .amplitudes;
            } else {
              for (int a = 0; a < ctx.blocks; ++a) {
                VectorXcd c = extract_symmetric(ctx, v, a);
                add_symmetric(ctx, c, -1.0, a, v);
                VectorXcd rem = v.segment(a * ctx.block_size, ctx.block_size);
                apply_diag_phases(ctx, seg.delta0, f * tau, rem);
                v.segment(a * ctx.block_size, ctx.block_size) = rem;
                const VectorXcd c2 =
                    prop.evolve(StateVector(h.basis, c), f * tau).amplitudes;
                add_symmetric(ctx, c2, 1.0, a, v);
              }
            }
            return v;
          };
          for (int p = 1; p <= options.trace_points_per_segment; ++p) {
            const double f = static_cast<double>(p) / (options.trace_points_per_segment + 1);
            VectorXcd v = at(f);
            std::swap(psi, v);
            push_trace(t + f * tau);
            std::swap(psi, v);
          }
          psi = at(1.0);
          if (ctx.mode == PhaseMode::Reset) apply_diag_phases(ctx, seg.delta0, -tau, psi);
        } else {
          OperatorMatrix h = effective_hamiltonian(retuned(cfg, seg.delta0),
                                                   seg.target.sideband, seg.phase);
          HermitianPropagator prop(h);
          const VectorXcd begin = psi;
          auto at = [&](double f) {
            VectorXcd v = begin;
            for (int a = 0; a < ctx.blocks; ++a)
              v.segment(a * ctx.block_size, ctx.block_size) =
                  prop.evolve(StateVector(h.basis,
                                          begin.segment(a * ctx.block_size, ctx.block_size)),
                              f * tau)
                      .amplitudes;
            return v;
          };
          for (int p = 1; p <= options.trace_points_per_segment; ++p) {
            const double f = static_cast<double>(p) / (options.trace_points_per_segment + 1);
            VectorXcd v = at(f);
            std::swap(psi, v);
            push_trace(t + f * tau);
            std::swap(psi, v);
          }
          psi = at(1.0);
          if (ctx.mode == PhaseMode::Reset) apply_diag_phases(ctx, seg.delta0, -tau, psi);
        }
        if (ctx.mode == PhaseMode::Reset) apply_diag_phases(ctx, seg.delta0, -tau, ideal);
        t += tau;
        break;
      }
      case StepKind::Carrier:
        carrier_rotation(ctx, seg.rabi_angle, seg.phase, psi);
        carrier_rotation(ctx, seg.rabi_angle, seg.phase, ideal);
        break;
      case StepKind::AncillaRedSideband:
        ancilla_rotation(ctx, seg.target.n0, seg.rabi_angle, seg.phase, psi);
        ancilla_rotation(ctx, seg.target.n0, seg.rabi_angle, seg.phase, ideal);
        break;
      case StepKind::Measure: {
        const std::uint64_t seed = step_seed(schedule.seed, seg.step_index);
        MeasurementRecord m = measure_ancilla(StateVector(ctx.basis, psi), seed);
        psi = m.post_state.amplitudes;
        record.outcome = m.outcome;
        record.outcome_probability = m.probability;
        // condition the ideal reference on the same outcome
        const int lo = m.outcome == AncillaOutcome::Excited ? ctx.block_size : 0;
        VectorXcd projected = VectorXcd::Zero(ideal.size());
        projected.segment(lo, ctx.block_size) = ideal.segment(lo, ctx.block_size);
        const double w = projected.norm();
        ideal = w > 1e-150 ? VectorXcd(projected / w) : projected;
        break;
      }
    }
    record.t_end = t;
    result.steps.push_back(record);
    push_trace(t);
  }

  result.final_state = StateVector(ctx.basis, psi);
  result.ideal_state = StateVector(ctx.basis, ideal);
  const Complex ov = ideal.dot(psi);
  result.fidelity_to_ideal = std::norm(ov);
  result.total_time = t;
  return result;
}

ExecutionResult run_schedule(const PulseSchedule& schedule, const ExecutionOptions& options) {
  return execute_schedule(compile_schedule(schedule), options);
}

// --- discrimination ------------------------------------------------------

DiscriminationResult discriminate_excitation(const IonChainConfig& config,
                                             const VectorXcd& coeffs, int k0,
                                             std::uint64_t seed, int n0) {
  config.validate();
  const int N = config.num_ions;
  if (k0 < 1 || k0 > N)
    throw DomainError("discrimination index k0 = " + std::to_string(k0) +
                      " outside 1..N = " + std::to_string(N));
  if (coeffs.size() != N + 1)
    throw ParameterError("coefficient vector must have N+1 = " + std::to_string(N + 1) +
                         " entries");
  if (std::abs(coeffs.squaredNorm() - 1.0) > 1e-9)
    throw ParameterError("coefficient vector is not normalized");
  if (n0 < 0) throw DomainError("motional start n0 must be >= 0");
  if (config.n_max < n0 + 2)
    throw CutoffError("n_max = " + std::to_string(config.n_max) +
                      " leaves no headroom; need n_max >= n0 + 2 = " + std::to_string(n0 + 2));

  ExecContext ctx;
  ctx.cfg = config;
  ctx.basis = BasisTag::dicke_fock(N, config.n_max, true);
  ctx.inner = BasisTag::dicke_fock(N, config.n_max);
  ctx.fock = config.n_max + 1;
  ctx.ion_dim = N + 1;
  ctx.blocks = 2;
  ctx.block_size = ctx.ion_dim * ctx.fock;

  VectorXcd psi = VectorXcd::Zero(ctx.basis.dim());
  for (int k = 0; k <= N; ++k) psi(k * ctx.fock + n0) = coeffs(k);

  DiscriminationResult out;
  out.expected_excited_probability = std::norm(coeffs(k0 - 1));

  // (i) collective blue pi pulse pumping |n0>|D_{k0-1}> into |n0+1>|D_k0>
  doublet_rotation(ctx, DoubletTarget::blue(n0, k0 - 1), kPi, kPi / 2.0, psi);
  out.steps.push_back({0, StepKind::SelectiveSideband, 0.0, 0.0, std::nullopt, 1.0});
  // (ii) ancilla red pi pulse mapping the extra phonon onto the ancilla
  ancilla_rotation(ctx, n0, kPi, kPi / 2.0, psi);
  out.steps.push_back({1, StepKind::AncillaRedSideband, 0.0, 0.0, std::nullopt, 1.0});

  out.pre_measurement = StateVector(ctx.basis, psi);
  out.record = measure_ancilla(out.pre_measurement, seed);
  out.steps.push_back({2, StepKind::Measure, 0.0, 0.0, out.record.outcome,
                       out.record.probability});
  return out;
}

}  // namespace dickesim
