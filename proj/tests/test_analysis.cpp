#include "doctest.h"

#include <cmath>
#include <random>

#include "dickesim/analysis.hpp"

using namespace dickesim;

namespace {
const double pi = std::acos(-1.0);

StateVector random_state(const BasisTag& tag, std::mt19937_64& gen) {
  std::normal_distribution<double> dist;
  VectorXcd amp(tag.dim());
  for (int i = 0; i < amp.size(); ++i) amp(i) = Complex(dist(gen), dist(gen));
  amp /= amp.norm();
  return StateVector(tag, amp);
}

}  // namespace

TEST_CASE("fidelity is symmetric, bounded, and phase blind") {
  const BasisTag tag = BasisTag::dicke_fock(3, 2);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    StateVector a = random_state(tag, gen);
    StateVector b = random_state(tag, gen);
    const double f = fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
    CHECK(f == doctest::Approx(fidelity(b, a)).epsilon(1e-13));
    StateVector rotated(tag, a.amplitudes * std::exp(Complex(0.0, 1.1)));
    CHECK(fidelity(rotated, b) == doctest::Approx(f).epsilon(1e-12));
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("mismatched bases are rejected") {
    StateVector a = StateVector::basis_state(tag, 0);
    StateVector b = StateVector::basis_state(BasisTag::dicke_fock(3, 3), 0);
    CHECK_THROWS_AS(fidelity(a, b), ConsistencyError);
  }
}

TEST_CASE("two-level rabi trace is the closed-form oscillation") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 2, 10.0);
  const DoubletTarget t = DoubletTarget::blue(0, 0);
  const double omega_r = doublet_rabi_frequency(cfg, t);
  std::vector<double> times{0.0, pi / (4.0 * omega_r) * 2.0, pi / omega_r};
  RabiTrace trace = rabi_trace(cfg, t, FidelityModel::TwoLevel, times);
  REQUIRE(trace.times.size() == 3);
  CHECK(trace.lower[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace.upper[0] == doctest::Approx(0.0).epsilon(1e-12));
  // half a Rabi period in angle: equal split
  CHECK(trace.lower[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(trace.upper[1] == doctest::Approx(0.5).epsilon(1e-10));
  // a full pi of Rabi angle: complete transfer
  CHECK(trace.upper[2] == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(trace.lower[i] + trace.upper[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full models track the two-level trace at strong ratios") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 3, 100.0);
  const DoubletTarget t = DoubletTarget::blue(0, 0);
  const double omega_r = doublet_rabi_frequency(cfg, t);
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(i * pi / omega_r / 20.0);
  RabiTrace ideal = rabi_trace(cfg, t, FidelityModel::TwoLevel, times);
  for (FidelityModel model : {FidelityModel::FullSymmetric, FidelityModel::FullRegister}) {
    RabiTrace full = rabi_trace(cfg, t, model, times);
    double dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      dev = std::max(dev, std::abs(full.upper[i] - ideal.upper[i]));
    CHECK(dev < 0.02);
  }

  SUBCASE("without retuning the transfer stalls") {
    IonChainConfig detuned = cfg.with_uniform_delta0(0.0);  // far from -2
    std::vector<double> probe{pi / omega_r};
    RabiTrace off = rabi_trace(detuned, t, FidelityModel::FullSymmetric, probe, false);
    CHECK(off.upper[0] < 0.05);
  }
}

TEST_CASE("symmetric leakage vanishes exactly on ladder states") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 2, 10.0);
  StateVector psi = atomic_coherent_prep(cfg, pi / 5.0);
  CHECK(symmetric_leakage(psi) < 1e-12);

  IonChainConfig skew = IonChainConfig::scaled_couplings(3, 2, 10.0, {1.0, 1.3, 0.8});
  StateVector leaky = atomic_coherent_prep(skew, pi / 4.0);
  CHECK(symmetric_leakage(leaky) > 1e-3);

  SUBCASE("requires the full register") {
    StateVector d = StateVector::basis_state(BasisTag::dicke_fock(3, 2), 0);
    CHECK_THROWS_AS(symmetric_leakage(d), BasisError);
  }
}

TEST_CASE("selectivity sweep infidelity falls with the coupling ratio") {
  IonChainConfig base = IonChainConfig::homogeneous_ratio(3, 3, 10.0);
  const std::vector<double> ratios{10.0, 30.0, 100.0};
  SweepResult sweep = selectivity_sweep(base, "w", ratios);
  REQUIRE(sweep.axis.size() == 3);
  REQUIRE(sweep.infidelity.size() == 3);
  CHECK(sweep.infidelity[0] > sweep.infidelity[1]);
  CHECK(sweep.infidelity[1] > sweep.infidelity[2]);
  CHECK(sweep.infidelity[2] < 1e-2);
  CHECK(sweep.protocol == "w");

  SUBCASE("ladder protocol sweeps too") {
    SweepResult lad = selectivity_sweep(base, "ladder:2", std::vector<double>{30.0, 300.0});
    CHECK(lad.infidelity[0] > lad.infidelity[1]);
  }

  SUBCASE("rejects bad inputs") {
    CHECK_THROWS_AS(selectivity_sweep(base, "w", std::vector<double>{-1.0}), DomainError);
    CHECK_THROWS_AS(selectivity_sweep(base, "w", std::vector<double>{30.0, 10.0}),
                    DomainError);
    CHECK_THROWS_AS(selectivity_sweep(base, "ladder:0", std::vector<double>{10.0}),
                    ParameterError);
    CHECK_THROWS_AS(selectivity_sweep(base, "nope", std::vector<double>{10.0}),
                    ParameterError);
  }

  SUBCASE("errors inside a run carry the ratio") {
    IonChainConfig tight = IonChainConfig::homogeneous_ratio(3, 1, 10.0);
    CHECK_THROWS_WITH_AS(selectivity_sweep(tight, "w", std::vector<double>{10.0}),
                         doctest::Contains("ratio"), SimError);
  }
}

TEST_CASE("pulse timescale against the laboratory budgets") {
  TimescaleCheck ok = timescale_check(1e5, 4);
  CHECK(ok.pulse_seconds == doctest::Approx(pi / (2.0 * 2.0 * 1e5)).epsilon(1e-12));
  CHECK(ok.fits_pulse_budget);
  CHECK(ok.fits_decoherence);

  TimescaleCheck slow = timescale_check(1e2, 4);
  CHECK(!slow.fits_pulse_budget);
  CHECK(slow.fits_decoherence);

  CHECK_THROWS_AS(timescale_check(0.0, 4), ParameterError);
  CHECK_THROWS_AS(timescale_check(1e5, 0), ParameterError);
}
