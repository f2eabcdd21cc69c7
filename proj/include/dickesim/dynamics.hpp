#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dickesim/basis.hpp"

namespace dickesim {

struct EvolutionSpec {
  double dt = 1e-3;             // fixed integrator step
  double norm_tol = 1e-9;       // allowed norm drift (never renormalized away)
  double truncation_tol = 1e-8; // allowed population in the top two Fock levels

  void validate() const;
};

// Exact propagation under a constant Hermitian matrix; the spectrum is
// computed once and reused for every requested time.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const OperatorMatrix& h);
  StateVector evolve(const StateVector& psi, double t) const;
  const VectorXd& eigenvalues() const { return evals_; }
  const BasisTag& basis() const { return basis_; }

 private:
  BasisTag basis_;
  VectorXd evals_;
  MatrixXcd evecs_;
};

StateVector evolve_static(const OperatorMatrix& h, const StateVector& psi, double t);

struct TimeDependentHamiltonian {
  BasisTag basis;
  // must write a Hermitian matrix of the basis dimension for any t
  std::function<void(double, MatrixXcd&)> fill;
};

// Classic fixed-step fourth-order integration of i d/dt psi = H(t) psi with
// the generator evaluated at the step midpoints. Checks norm drift against
// norm_tol and Fock-edge population against truncation_tol.
StateVector evolve_timedep(const TimeDependentHamiltonian& h, const StateVector& psi,
                           double t_final, const EvolutionSpec& spec);

// Same integration, recording the state at each requested time (strictly
// increasing, within [0, t_final]); the integrator lands on sample times
// with shortened steps.
std::vector<StateVector> evolve_timedep_sampled(const TimeDependentHamiltonian& h,
                                                const StateVector& psi, double t_final,
                                                std::span<const double> sample_times,
                                                const EvolutionSpec& spec);

enum class FrameDirection { ToInteraction, FromInteraction };

// Diagonal-frame change: ToInteraction multiplies amplitude i by
// exp(+i E_i t) with E_i the diagonal entries of h0 (psi_I = e^{+iH0 t}
// psi_S); FromInteraction is the inverse.
StateVector frame_transform(const StateVector& psi, const OperatorMatrix& h0_diag, double t,
                            FrameDirection direction);

enum class AncillaOutcome { Ground, Excited };

struct MeasurementRecord {
  AncillaOutcome outcome;
  double probability;   // Born weight of the realized branch
  StateVector post_state;
  std::uint64_t seed_used;
};

// Projective measurement of the ancilla qubit. The basis must carry the
// ancilla factor; the draw uses a deterministic 64-bit generator
// (mt19937_64) seeded with `seed`.
MeasurementRecord measure_ancilla(const StateVector& psi, std::uint64_t seed);

}  // namespace dickesim
