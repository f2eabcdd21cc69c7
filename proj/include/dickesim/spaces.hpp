#pragma once

#include <vector>

#include "dickesim/basis.hpp"
#include "dickesim/config.hpp"

namespace dickesim {

// |D_k>: equal-weight superposition of the C(N,k) bitstrings with k ions
// excited, on the bare ion register (FullRegister tag with n_max = 0).
StateVector dicke_state(int num_ions, int k);

// f_k = sqrt((k+1)(N-k)), the symmetric ladder matrix element
// <D_{k+1}| J+ |D_k> of the unweighted collective raising operator.
double dicke_ladder_coeff(int num_ions, int k);

// Isometry from the (N+1)-dim Dicke ladder into the 2^N ion register;
// column k holds |D_k>.
MatrixXcd dicke_isometry(int num_ions);

// Projector onto the symmetric subspace of the bare ion register.
OperatorMatrix symmetric_projector(int num_ions);

// Weighted collective raising operator J~+ = sum_j omega_eff_j sigma_j^+ on
// the requested basis (identity on the Fock factor). DickeFock requires a
// homogeneous config.
OperatorMatrix collective_raising(const IonChainConfig& config, const BasisTag& basis);
OperatorMatrix collective_lowering(const IonChainConfig& config, const BasisTag& basis);

// Orthonormal excitation-number eigenstates reachable from |g...g> by
// repeated application of the weighted J~+/J~-, labeled (k, branch l) in
// discovery order. For homogeneous couplings this is exactly the Dicke
// ladder; inhomogeneous couplings open further branches.
struct CollectiveNumberBasis {
  IonChainConfig config;
  double drop_tol = 1e-12;
  struct Member {
    int k;
    int branch;
    VectorXcd state;  // on the bare 2^N ion register
  };
  std::vector<Member> states;  // sorted by (k, branch)

  int count(int k) const;                    // branches retained at level k
  const Member& member(int k, int branch) const;  // throws if absent
  int index_of(int k, int branch) const;     // position in `states`, -1 if absent
  BasisTag fock_basis() const;               // CollectiveNumberFock over config.n_max
};

CollectiveNumberBasis build_collective_number_basis(const IonChainConfig& config,
                                                    int k_max, double drop_tol = 1e-12);

}  // namespace dickesim
