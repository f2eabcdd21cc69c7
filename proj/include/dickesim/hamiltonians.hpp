#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dickesim/basis.hpp"
#include "dickesim/config.hpp"
#include "dickesim/spaces.hpp"

namespace dickesim {

// One sideband-coupled pair of joint phonon/Dicke levels, stored canonically
// as (min Fock, min k) over the pair:
//   Blue (n0, k0): |n0>|D_k0>   <->  |n0+1>|D_{k0+1}>   (adag J~+ + a J~-)
//   Red  (n0, k0): |n0+1>|D_k0> <->  |n0>|D_{k0+1}>     (a J~+ + adag J~-)
// `branch` selects the collective-number branch for inhomogeneous chains
// (0 = the symmetric ladder).
struct DoubletTarget {
  int n0 = 0;
  int k0 = 0;
  Sideband sideband = Sideband::Blue;
  int branch = 0;

  static DoubletTarget blue(int n0, int k0, int branch = 0);
  static DoubletTarget red(int n0, int k0, int branch = 0);

  // (fock, k) of the two members; "lower" = smaller Dicke index
  std::pair<int, int> lower_member() const;
  std::pair<int, int> upper_member() const;

  void validate(const IonChainConfig& config) const;
  bool operator==(const DoubletTarget&) const = default;
};

// Second-order light shift: ground ions carry the motion-dependent
// standing-wave shift [1 - eta1^2 (2n+1)] |omega1_j|^2 / delta, excited ions
// carry |omega2_j|^2 / delta. Diagonal on the full-register basis.
OperatorMatrix stark_shift_operator(const IonChainConfig& config);

// Retuned effective Hamiltonian on the full register:
//   H = -sum_j omega0_j (n - delta0_j) |g_j><g_j|  +  sideband coupling,
// blue coupling adag J~+ + a J~-, red coupling a J~+ + adag J~-.
// pulse_phase, when set, replaces each coupling by |omega_eff_j| e^{-i phi}.
OperatorMatrix effective_hamiltonian(const IonChainConfig& config,
                                     Sideband sideband = Sideband::Blue,
                                     std::optional<double> pulse_phase = std::nullopt);

// The same Hamiltonian restricted to the symmetric Dicke ladder (homogeneous
// couplings only): diagonal -omega0 (n - delta0)(N - k) plus the ladder
// coupling omega_eff sqrt(n+1) f_k.
OperatorMatrix symmetric_effective_hamiltonian(const IonChainConfig& config,
                                               Sideband sideband = Sideband::Blue,
                                               std::optional<double> pulse_phase = std::nullopt);

// Diagonal energy -omega0 (n - delta0)(N - k) of the symmetric restriction.
double symmetric_diag_energy(const IonChainConfig& config, int n, int k);

// Interaction-picture form of the symmetric restriction: only sideband
// couplings, each rotating at the difference of the diagonal energies of the
// two levels it connects. At the resonant delta0 the target pair's phase is
// identically zero and every other pair rotates at a nonzero integer
// multiple of omega0.
struct SymmetricInteractionGenerator {
  IonChainConfig config;
  Sideband sideband = Sideband::Blue;
  std::optional<double> pulse_phase;
  BasisTag basis;

  SymmetricInteractionGenerator(const IonChainConfig& config,
                                Sideband sideband = Sideband::Blue,
                                std::optional<double> pulse_phase = std::nullopt);
  void fill(double t, MatrixXcd& m) const;
  OperatorMatrix at(double t) const;
};

OperatorMatrix symmetric_interaction_hamiltonian(const IonChainConfig& config, double t,
                                                 Sideband sideband = Sideband::Blue);

// delta0 that makes the target pair degenerate under the diagonal term:
// Blue -> k0 + n0 - N + 1, Red -> N + n0 - k0.
double resonance_delta0(const DoubletTarget& target, int num_ions);

// Two-level reduction on the target doublet: the upper member is reached
// from the lower with amplitude sqrt(n0+1) f_k0 omega_eff.
OperatorMatrix selective_two_level(const IonChainConfig& config, const DoubletTarget& target,
                                   std::optional<double> pulse_phase = std::nullopt);

// Angular Rabi frequency 2 sqrt(n0+1) |omega_eff| f_k0 of the doublet
// (pi-pulse duration = pi / this).
double doublet_rabi_frequency(const IonChainConfig& config, const DoubletTarget& target);

// J~x = J~+ + J~- on the full register (identity on the Fock factor).
OperatorMatrix carrier_generator(const IonChainConfig& config);

// Retuned Hamiltonian projected on a collective-number basis (x) Fock:
// a block "diagonal" (elements between same-k members at equal Fock index)
// plus the ladder coupling table <D~^{l'}_{k+1}| J~+ |D~^l_k>. Per-branch
// couplings are the table entries with from_branch == to_branch.
struct InhomogeneousHamiltonian {
  BasisTag basis;
  OperatorMatrix diagonal;
  struct Coupling {
    int k;
    int from_branch;
    int to_branch;
    Complex value;
    int from_index;  // member positions in the source basis state list
    int to_index;
  };
  std::vector<Coupling> couplings;

  // diagonal + adag (x) couplings + h.c. (blue sideband form)
  OperatorMatrix full_matrix() const;

  // Same ladder couplings, but the diagonal keeps only each state's own
  // detuning expectation: the light-shift elements mixing equal-k branches
  // are dropped. The retuning shift makes a doublet exactly resonant in
  // this model; in full_matrix() the branch mixing grows with the light
  // shift spread and caps the achievable contrast.
  OperatorMatrix model_matrix() const;
};

InhomogeneousHamiltonian inhomogeneous_hamiltonian(const IonChainConfig& config,
                                                   const CollectiveNumberBasis& basis);

// Uniform amount added to every delta0_j so that the target branch doublet
// becomes degenerate under the retuned diagonal. Throws NoSolutionError when
// the dependence on the shift cancels (zero affine slope).
double inhomogeneous_resonance_shift(const IonChainConfig& config,
                                     const CollectiveNumberBasis& basis,
                                     const DoubletTarget& target);

}  // namespace dickesim
