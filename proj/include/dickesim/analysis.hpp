#pragma once

#include <span>
#include <string>
#include <vector>

#include "dickesim/protocols.hpp"

namespace dickesim {

// |<phi|psi>|^2; symmetric in its arguments and blind to global phases.
double fidelity(const StateVector& psi, const StateVector& phi);

// Population of both members of a sideband doublet versus time, driving from
// the lower member. The two-level model is the closed-form cos^2 / sin^2
// pair; the full models evolve the corresponding Hamiltonian and project.
// With retune = true the chain is shifted onto the doublet's resonance
// first; retune = false probes the bare config.delta0.
struct RabiTrace {
  std::vector<double> times;
  std::vector<double> lower;
  std::vector<double> upper;
};

RabiTrace rabi_trace(const IonChainConfig& config, const DoubletTarget& target,
                     FidelityModel model, std::span<const double> times, bool retune = true);

// 1 - || P_sym psi ||^2 on the full register (ancilla factor allowed).
double symmetric_leakage(const StateVector& psi);

// One protocol run per requested coupling ratio omega0 / |omega_eff|, in the
// full symmetric model, scored against the ideal two-level output.
struct SweepResult {
  std::vector<double> axis;
  std::vector<double> infidelity;
  std::vector<double> wall_ms;
  std::string protocol;
  IonChainConfig config;  // template: num_ions and n_max are read from here
};

// protocol: "w" (or "w_state") for the single-pulse W preparation,
// "ladder:K" for the K-step sequential ladder.
SweepResult selectivity_sweep(const IonChainConfig& base, const std::string& protocol,
                              std::span<const double> ratios);

// pi-pulse time pi / (2 sqrt(N) omega_eff_hz) against the 0.1 ms pulse
// budget and the 10 ms motional decoherence scale.
struct TimescaleCheck {
  double pulse_seconds = 0.0;
  bool fits_pulse_budget = false;   // <= 1e-4 s
  bool fits_decoherence = false;    // <= 1e-2 s
};

TimescaleCheck timescale_check(double omega_eff_hz, int num_ions);

}  // namespace dickesim
