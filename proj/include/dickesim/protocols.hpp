#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dickesim/dynamics.hpp"
#include "dickesim/hamiltonians.hpp"

namespace dickesim {

// Which Hamiltonian level simulates a step: the ideal resonant-doublet
// rotation, the full symmetric ladder, or the bare 2^N register.
enum class FidelityModel { TwoLevel, FullSymmetric, FullRegister };

enum class StepKind { SelectiveSideband, Carrier, AncillaRedSideband, Measure };

// Whether the free diagonal phases accumulated during a segment are kept
// (physical lasers do not reset interaction-picture phases) or unwound at
// each segment boundary.
enum class PhaseMode { Carry, Reset };

struct PulseStep {
  StepKind kind = StepKind::SelectiveSideband;
  DoubletTarget target;     // SelectiveSideband; AncillaRedSideband reads n0
  double rabi_angle = 0.0;  // Rabi frequency x duration; Carrier reads theta
  double phase = 0.0;
  FidelityModel fidelity_model = FidelityModel::TwoLevel;
};

// Joint starting state |fock>|D_dicke>, or a bare bitstring when `bits` is
// set (ion 0 first, 1 = excited). The ancilla, when present, starts in |g>.
struct InitialState {
  int fock = 0;
  int dicke = 0;
  std::optional<std::vector<int>> bits;
};

struct PulseSchedule {
  IonChainConfig config;
  InitialState initial;
  std::vector<PulseStep> steps;
  std::uint64_t seed = 0;
};

// --- canned protocol builders -------------------------------------------

// One blue pi pulse on (n0=0, k0=0), phase pi/2: |0>|D_0> -> |1>|D_1>,
// the N-ion W state with one phonon.
PulseSchedule prepare_w_state(const IonChainConfig& config);

// Same doublet, angle 2 arccos(1/sqrt(N+1)): leaves the W state of N ions
// plus the phonon doublet acting as qubit N+1.
PulseSchedule prepare_w_n_plus_1(const IonChainConfig& config);

// Alternating blue/red pi pulses walking |0>|D_0> up to |k mod 2>|D_k>.
// k_target = 0 gives an empty schedule.
PulseSchedule dicke_ladder(const IonChainConfig& config, int k_target);

// exp(i theta (J~+ + J~-)) |g...g>|0>, computed by exponentiating the
// carrier generator on the full register.
StateVector atomic_coherent_prep(const IonChainConfig& config, double theta);

// --- compilation ---------------------------------------------------------

struct CompiledSegment {
  std::size_t step_index = 0;
  StepKind kind = StepKind::SelectiveSideband;
  FidelityModel model = FidelityModel::TwoLevel;
  DoubletTarget target;
  double rabi_angle = 0.0;
  double phase = 0.0;
  double rabi_frequency = 0.0;  // 0 for Carrier / Measure
  double duration = 0.0;        // rabi_angle / rabi_frequency
  VectorXd delta0;              // per-ion retuning in effect for the segment
};

struct CompiledSchedule {
  PulseSchedule schedule;
  std::vector<CompiledSegment> segments;
};

// Resolves every step to (retuning, Rabi frequency, duration) and verifies
// that each selective target is reachable from the ideal state left by the
// preceding steps. Inhomogeneous chains get their delta0 from the affine
// shift solve and restrict every pulse to the FullRegister model.
CompiledSchedule compile_schedule(const PulseSchedule& schedule);

// --- execution -----------------------------------------------------------

struct StepRecord {
  std::size_t step_index = 0;
  StepKind kind = StepKind::SelectiveSideband;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::optional<AncillaOutcome> outcome;  // Measure only
  double outcome_probability = 1.0;
};

struct TraceRow {
  double t = 0.0;
  VectorXd populations;
};

struct ExecutionOptions {
  std::optional<FidelityModel> model_override;
  PhaseMode phase_mode = PhaseMode::Carry;
  int trace_points_per_segment = 0;  // interior samples added to the trace
};

struct ExecutionResult {
  BasisTag basis;
  StateVector final_state;
  StateVector ideal_state;  // two-level reference, same basis, same outcomes
  double fidelity_to_ideal = 0.0;
  double total_time = 0.0;
  std::vector<StepRecord> steps;
  std::vector<TraceRow> trace;  // t = 0 plus every segment boundary
};

// Runs the compiled segments in the Schrodinger picture on the coarsest
// basis that supports every step (DickeFock, or FullRegister when a step or
// the initial state demands it; an ancilla factor is added when a measure or
// ancilla pulse appears). Measure draws are seeded from schedule.seed and
// the step index, so reruns are reproducible.
ExecutionResult execute_schedule(const CompiledSchedule& compiled,
                                 const ExecutionOptions& options = {});

ExecutionResult run_schedule(const PulseSchedule& schedule,
                             const ExecutionOptions& options = {});

// --- excitation-number discrimination ------------------------------------

struct DiscriminationResult {
  MeasurementRecord record;
  StateVector pre_measurement;  // DickeFock + ancilla, before the draw
  std::vector<StepRecord> steps;
  double expected_excited_probability = 0.0;  // |c_{k0-1}|^2
};

// Ideal-pulse discrimination of the excitation number: blue pi pulse on
// {|n0>|D_{k0-1}>, |n0+1>|D_k0>}, red pi pulse on the ancilla swapping
// |n0+1>|g_A> with |n0>|e_A>, then a projective ancilla measurement. An
// excited outcome (probability |c_{k0-1}|^2) leaves the ions in |D_k0>.
DiscriminationResult discriminate_excitation(const IonChainConfig& config,
                                             const VectorXcd& coeffs, int k0,
                                             std::uint64_t seed, int n0 = 0);

}  // namespace dickesim
