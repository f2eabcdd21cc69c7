#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dickesim/basis.hpp"

namespace dickesim {

// Physical description of the chain: N three-level ions sharing the
// center-of-mass mode, driven by a standing wave (coupling omega1, Lamb-Dicke
// eta1) and a travelling wave (coupling omega2, eta2), both detuned by delta
// from the auxiliary level. Everything the dynamics needs is derived from
// these on demand; derived couplings are never stored.
//
// Default unit system: |Omega_eff| = 1 for the first ion, hbar = 1.
struct IonChainConfig {
  int num_ions = 1;
  VectorXcd omega1;        // standing-wave coupling per ion
  VectorXcd omega2;        // travelling-wave coupling per ion
  double delta = 1.0;      // common Raman detuning, > 0
  double eta1 = 0.1;       // Lamb-Dicke parameter of the standing wave
  double eta2 = 0.1;       // Lamb-Dicke parameter of the travelling wave
  double nu = 10.0;        // trap frequency (bookkeeping only)
  int n_max = 1;           // Fock cutoff (hard truncation)
  VectorXd delta0;         // per-ion resonance correction

  // sideband coupling 2i eta2 omega1_j conj(omega2_j) / delta
  Complex omega_eff(int j) const;
  // dispersive scale 2 eta1^2 |omega1_j|^2 / delta
  double omega0(int j) const;

  bool homogeneous(double rel_tol = 1e-12) const;
  void validate() const;

  // Uniform chain with |omega_eff| = 1 and omega0 = ratio for every ion.
  static IonChainConfig homogeneous_ratio(int num_ions, int n_max, double ratio);
  // Same, but omega1_j additionally scaled per ion; omega_eff_j picks up the
  // scale linearly and omega0_j quadratically.
  static IonChainConfig scaled_couplings(int num_ions, int n_max, double ratio,
                                         const std::vector<double>& omega1_scale);

  // Copy with every delta0_j replaced by the given uniform value.
  IonChainConfig with_uniform_delta0(double value) const;
  // Copy with the given uniform amount added to every delta0_j.
  IonChainConfig with_delta0_shift(double shift) const;
};

}  // namespace dickesim
