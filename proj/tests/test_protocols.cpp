#include "doctest.h"

#include <cmath>

#include "dickesim/analysis.hpp"
#include "dickesim/protocols.hpp"
#include "oracles.hpp"

using namespace dickesim;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("W-state schedule on a single ion flips it with one phonon") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(1, 2, 10.0);
  ExecutionResult r = run_schedule(prepare_w_state(cfg));
  CHECK(r.basis.kind == BasisKind::DickeFock);
  CHECK(r.fidelity_to_ideal == doctest::Approx(1.0).epsilon(1e-12));
  const int fock = cfg.n_max + 1;
  CHECK(std::abs(r.final_state.amplitudes(1 * fock + 1)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("W state spreads one excitation evenly over the register") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 2, 10.0);
  PulseSchedule s = prepare_w_state(cfg);
  s.initial.bits = std::vector<int>{0, 0, 0};  // force the bare register
  ExecutionResult r = run_schedule(s);
  REQUIRE(r.basis.kind == BasisKind::FullRegister);
  const int fock = cfg.n_max + 1;
  double off = 0.0;
  for (int bits = 0; bits < 8; ++bits)
    for (int n = 0; n < fock; ++n) {
      const double a = std::abs(r.final_state.amplitudes(bits * fock + n));
      if ((bits == 1 || bits == 2 || bits == 4) && n == 1)
        CHECK(a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
      else
        off += a;
    }
  CHECK(off < 1e-12);
}

TEST_CASE("W-state builder rejects unusable configs") {
  CHECK_THROWS_AS(prepare_w_state(IonChainConfig::homogeneous_ratio(2, 1, 10.0)),
                  ParameterError);
  CHECK_THROWS_AS(prepare_w_state(IonChainConfig::scaled_couplings(2, 2, 10.0, {1.0, 1.3})),
                  BasisError);
}

TEST_CASE("N+1 qubit W state splits between the doublet members") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 2, 10.0);
  PulseSchedule s = prepare_w_n_plus_1(cfg);
  CHECK(s.steps.at(0).rabi_angle == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-14));
  ExecutionResult r = run_schedule(s);
  const int fock = cfg.n_max + 1;
  CHECK(std::abs(r.final_state.amplitudes(0 * fock + 0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r.final_state.amplitudes(1 * fock + 1)) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  SUBCASE("one ion gives the pi/2 beam splitter") {
    PulseSchedule one = prepare_w_n_plus_1(IonChainConfig::homogeneous_ratio(1, 2, 10.0));
    CHECK(one.steps.at(0).rabi_angle == doctest::Approx(pi / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("ladder schedule walks to |k mod 2> |D_k>") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(4, 2, 10.0);
  CHECK(dicke_ladder(cfg, 0).steps.empty());
  CHECK_THROWS_AS(dicke_ladder(cfg, 5), DomainError);

  for (int k_target : {1, 2, 3, 4}) {
    ExecutionResult r = run_schedule(dicke_ladder(cfg, k_target));
    CHECK(r.fidelity_to_ideal == doctest::Approx(1.0).epsilon(1e-12));
    const int fock = cfg.n_max + 1;
    const int idx = k_target * fock + (k_target % 2);
    CHECK(std::abs(r.final_state.amplitudes(idx)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("pulses alternate blue and red") {
    PulseSchedule s = dicke_ladder(cfg, 3);
    REQUIRE(s.steps.size() == 3);
    CHECK(s.steps[0].target.sideband == Sideband::Blue);
    CHECK(s.steps[1].target.sideband == Sideband::Red);
    CHECK(s.steps[2].target.sideband == Sideband::Blue);
    CHECK(s.steps[2].target.k0 == 2);
  }
}

TEST_CASE("compilation resolves retuning and durations") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(4, 2, 10.0);
  CompiledSchedule c = compile_schedule(prepare_w_state(cfg));
  REQUIRE(c.segments.size() == 1);
  const CompiledSegment& seg = c.segments[0];
  // f_0 = 2 for N = 4, so the Rabi frequency is 4 and a pi pulse takes pi/4
  CHECK(seg.rabi_frequency == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(seg.duration == doctest::Approx(pi / 4.0).epsilon(1e-12));
  CHECK(seg.delta0(0) ==
        doctest::Approx(resonance_delta0(DoubletTarget::blue(0, 0), 4)).epsilon(1e-14));
}

TEST_CASE("compilation rejects impossible schedules") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 2, 10.0);

  SUBCASE("unreachable target") {
    PulseSchedule s;
    s.config = cfg;
    PulseStep step;
    step.target = DoubletTarget::blue(0, 2);
    step.rabi_angle = pi;
    s.steps.push_back(step);
    CHECK_THROWS_WITH_AS(compile_schedule(s), doctest::Contains("unreachable"),
                         ConsistencyError);
  }

  SUBCASE("carrier restores reachability") {
    PulseSchedule s;
    s.config = cfg;
    PulseStep spread;
    spread.kind = StepKind::Carrier;
    spread.rabi_angle = 0.3;
    s.steps.push_back(spread);
    PulseStep step;
    step.target = DoubletTarget::blue(0, 2);
    step.rabi_angle = pi;
    s.steps.push_back(step);
    CHECK_NOTHROW(compile_schedule(s));
  }

  SUBCASE("zero sideband coupling") {
    IonChainConfig dead = cfg;
    dead.omega2.setZero();
    PulseSchedule s = prepare_w_state(cfg);
    s.config = dead;
    CHECK_THROWS_WITH_AS(compile_schedule(s), doctest::Contains("duration diverges"),
                         DomainError);
  }

  SUBCASE("negative angle") {
    PulseSchedule s = prepare_w_state(cfg);
    s.steps[0].rabi_angle = -1.0;
    CHECK_THROWS_AS(compile_schedule(s), ParameterError);
  }

  SUBCASE("bad initial state") {
    PulseSchedule s = prepare_w_state(cfg);
    s.initial.fock = 5;
    CHECK_THROWS_AS(compile_schedule(s), DomainError);
    s.initial.fock = 0;
    s.initial.bits = std::vector<int>{1, 0};
    CHECK_THROWS_AS(compile_schedule(s), ParameterError);
  }
}

TEST_CASE("phase bookkeeping modes agree on populations") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 3, 40.0);
  PulseSchedule s = dicke_ladder(cfg, 2);
  ExecutionOptions carry, reset;
  carry.model_override = FidelityModel::FullSymmetric;
  reset = carry;
  reset.phase_mode = PhaseMode::Reset;
  ExecutionResult a = run_schedule(s, carry);
  ExecutionResult b = run_schedule(s, reset);
  CHECK((a.final_state.amplitudes.cwiseAbs2() - b.final_state.amplitudes.cwiseAbs2())
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  SUBCASE("reset leaves the bare rotation amplitude") {
    ExecutionOptions opt;
    opt.phase_mode = PhaseMode::Reset;
    ExecutionResult w = run_schedule(prepare_w_state(cfg), opt);
    const int fock = cfg.n_max + 1;
    // a resonant pi pulse at phase pi/2 maps |0>|D_0> to exactly -|1>|D_1>
    CHECK(std::abs(w.final_state.amplitudes(1 * fock + 1) - Complex(-1.0, 0.0)) < 1e-12);
    CHECK(w.fidelity_to_ideal == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("full-model execution stays close to the two-level reference") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 3, 100.0);
  ExecutionOptions opt;
  opt.model_override = FidelityModel::FullSymmetric;
  ExecutionResult r = run_schedule(prepare_w_state(cfg), opt);
  CHECK(r.fidelity_to_ideal > 0.98);
  ExecutionOptions reg;
  reg.model_override = FidelityModel::FullRegister;
  ExecutionResult r2 = run_schedule(prepare_w_state(cfg), reg);
  CHECK(r2.basis.kind == BasisKind::FullRegister);
  CHECK(r2.fidelity_to_ideal == doctest::Approx(r.fidelity_to_ideal).epsilon(1e-9));
}

TEST_CASE("trace rows cover boundaries and interior points") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(2, 2, 10.0);
  ExecutionOptions opt;
  opt.trace_points_per_segment = 3;
  ExecutionResult r = run_schedule(prepare_w_state(cfg), opt);
  REQUIRE(r.trace.size() == 5);  // t=0, three interior, boundary
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].t > r.trace[i - 1].t);
  for (const TraceRow& row : r.trace)
    CHECK(row.populations.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.trace.back().t == doctest::Approx(r.total_time).epsilon(1e-12));
}

TEST_CASE("atomic coherent preparation") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(4, 2, 10.0);

  SUBCASE("zero angle is the ground register") {
    StateVector psi = atomic_coherent_prep(cfg, 0.0);
    CHECK(std::abs(psi.amplitudes(0) - Complex(1.0, 0.0)) < 1e-14);
  }

  SUBCASE("homogeneous drive stays symmetric and matches the ladder oracle") {
    const double theta = pi / 6.0;
    StateVector psi = atomic_coherent_prep(cfg, theta);
    const MatrixXcd v = dicke_isometry(4);
    const int fock = cfg.n_max + 1;
    VectorXcd ions = VectorXcd::Zero(16);
    for (int b = 0; b < 16; ++b) ions(b) = psi.amplitudes(b * fock + 0);
    const VectorXcd coeffs = v.adjoint() * ions;
    CHECK((ions - v * coeffs).norm() < 1e-12);  // no leakage out of the ladder

    const Eigen::VectorXcd want = oracles::coherent_coefficients(4, cfg.omega_eff(0), theta);
    CHECK((coeffs - want).norm() < 1e-12);

    // product-state magnitudes: sqrt(C(N,k)) cos^(N-k) sin^k
    const double c = std::cos(theta), s = std::sin(theta);
    for (int k = 0; k <= 4; ++k)
      CHECK(std::abs(coeffs(k)) ==
            doctest::Approx(std::sqrt(double(oracles::binomial(4, k))) *
                            std::pow(c, 4 - k) * std::pow(s, k))
                .epsilon(1e-10));
  }

  SUBCASE("inhomogeneous drive leaks out of the symmetric ladder") {
    IonChainConfig skew = IonChainConfig::scaled_couplings(2, 2, 10.0, {1.0, 1.3});
    StateVector psi = atomic_coherent_prep(skew, pi / 4.0);
    const MatrixXcd v = dicke_isometry(2);
    const int fock = skew.n_max + 1;
    VectorXcd ions = VectorXcd::Zero(4);
    for (int b = 0; b < 4; ++b) ions(b) = psi.amplitudes(b * fock + 0);
    CHECK((ions - v * (v.adjoint() * ions)).norm() > 1e-3);
  }
}

TEST_CASE("excitation-number discrimination") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(2, 2, 10.0);

  SUBCASE("a pure |D_1> component always fires the ancilla") {
    VectorXcd c = VectorXcd::Zero(3);
    c(1) = 1.0;
    DiscriminationResult r = discriminate_excitation(cfg, c, 2, 99);
    CHECK(r.expected_excited_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.record.outcome == AncillaOutcome::Excited);
    REQUIRE(r.pre_measurement.basis.with_ancilla);
    // post state: ions in |D_2>, phonon back in n0 = 0, ancilla excited
    const BasisTag tag = r.record.post_state.basis;
    const int fock = cfg.n_max + 1;
    const int idx = tag.dim() / 2 + 2 * fock + 0;
    CHECK(std::abs(r.record.post_state.amplitudes(idx)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("expected probability reads |c_{k0-1}|^2 and reruns are reproducible") {
    VectorXcd c(3);
    c << std::sqrt(0.5), std::sqrt(0.5), 0.0;
    DiscriminationResult a = discriminate_excitation(cfg, c, 1, 31);
    DiscriminationResult b = discriminate_excitation(cfg, c, 1, 31);
    CHECK(a.expected_excited_probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a.record.outcome == b.record.outcome);
    CHECK((a.record.post_state.amplitudes - b.record.post_state.amplitudes).norm() == 0.0);

    int fired = 0;
    const int trials = 600;
    for (int s = 0; s < trials; ++s)
      if (discriminate_excitation(cfg, c, 1, 1000 + s).record.outcome ==
          AncillaOutcome::Excited)
        ++fired;
    const double sigma = std::sqrt(0.25 / trials);
    CHECK(std::abs(double(fired) / trials - 0.5) < 3.0 * sigma);
  }

  SUBCASE("input validation") {
    VectorXcd c = VectorXcd::Zero(3);
    c(0) = 1.0;
    CHECK_THROWS_AS(discriminate_excitation(cfg, c, 0, 1), DomainError);
    CHECK_THROWS_AS(discriminate_excitation(cfg, VectorXcd::Zero(2), 1, 1), ParameterError);
    VectorXcd bad = c * 0.7;
    CHECK_THROWS_AS(discriminate_excitation(cfg, bad, 1, 1), ParameterError);
    IonChainConfig tight = IonChainConfig::homogeneous_ratio(2, 1, 10.0);
    CHECK_THROWS_AS(discriminate_excitation(tight, c, 1, 1), CutoffError);
  }
}

TEST_CASE("measurement steps condition the ideal branch deterministically") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(2, 2, 10.0);
  PulseSchedule s;
  s.config = cfg;
  s.initial = InitialState{0, 1};  // |0>|D_1>
  s.seed = 77;
  PulseStep blue;
  blue.target = DoubletTarget::blue(0, 1);
  blue.rabi_angle = pi / 2.0;  // half transfer, genuinely random outcome
  blue.phase = pi / 2.0;
  s.steps.push_back(blue);
  PulseStep red;
  red.kind = StepKind::AncillaRedSideband;
  red.target.n0 = 0;
  red.rabi_angle = pi;
  red.phase = pi / 2.0;
  s.steps.push_back(red);
  PulseStep meas;
  meas.kind = StepKind::Measure;
  s.steps.push_back(meas);

  ExecutionResult a = run_schedule(s);
  ExecutionResult b = run_schedule(s);
  REQUIRE(a.steps.size() == 3);
  REQUIRE(a.steps[2].outcome.has_value());
  CHECK(a.steps[2].outcome == b.steps[2].outcome);
  CHECK((a.final_state.amplitudes - b.final_state.amplitudes).norm() == 0.0);
  CHECK(a.fidelity_to_ideal == doctest::Approx(1.0).epsilon(1e-12));

  PulseSchedule other = s;
  other.seed = 78;
  ExecutionResult c = run_schedule(other);
  CHECK(c.steps[2].outcome.has_value());
}
