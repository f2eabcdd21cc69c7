#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>

#include "dickesim/errors.hpp"

namespace dickesim {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

enum class BasisKind {
  FullRegister,         // ion bitstrings (x) Fock
  DickeFock,            // symmetric Dicke ladder (x) Fock
  CollectiveNumberFock, // retained collective-number branches (x) Fock
  TwoLevelDoublet,      // one resonant doublet {lower, upper}
};

enum class Sideband { Blue, Red };

// Identifies the vector space a state or operator lives on.
//
// Index layout (row-major over the listed factors, Fock always innermost):
//   FullRegister:         index = [ancilla] * 2^N * (n_max+1) + bits * (n_max+1) + n
//                         bit j of `bits` set  <=>  ion j in |e>
//   DickeFock:            index = [ancilla] * (N+1) * (n_max+1) + k * (n_max+1) + n
//   CollectiveNumberFock: index = member * (n_max+1) + n, members sorted by (k, l)
//   TwoLevelDoublet:      index 0 = lower-k member, 1 = upper-k member
//
// n_max = 0 is allowed and means a trivial (one-level) Fock factor, used for
// ion-register-only states.
struct BasisTag {
  BasisKind kind = BasisKind::FullRegister;
  int num_ions = 1;
  int n_max = 0;
  bool with_ancilla = false;
  int members = 0;  // CollectiveNumberFock only
  // TwoLevelDoublet only:
  int doublet_n0 = 0;
  int doublet_k0 = 0;
  Sideband doublet_sideband = Sideband::Blue;

  static BasisTag full_register(int num_ions, int n_max, bool ancilla = false);
  static BasisTag dicke_fock(int num_ions, int n_max, bool ancilla = false);
  static BasisTag collective_number_fock(int num_ions, int n_max, int members);
  static BasisTag two_level_doublet(int num_ions, int n0, int k0, Sideband sb);

  int dim() const;
  int fock_levels() const { return n_max + 1; }
  // Fock index of a basis vector (kinds with a Fock factor only).
  int fock_of(int index) const;
  // human-readable label for CSV headers / JSON ("D1_n0", "egg_n2", ...)
  std::string label(int index) const;

  bool operator==(const BasisTag& other) const;
  bool operator!=(const BasisTag& other) const { return !(*this == other); }
};

std::string to_string(const BasisTag& tag);

struct StateVector {
  BasisTag basis;
  VectorXcd amplitudes;

  StateVector() = default;
  StateVector(const BasisTag& tag, VectorXcd amp);
  // unit vector along one basis direction
  static StateVector basis_state(const BasisTag& tag, int index);

  double norm() const { return amplitudes.norm(); }
  void require_normalized(double tol = 1e-9) const;
};

struct OperatorMatrix {
  BasisTag basis;
  MatrixXcd entries;
  bool hermitian = false;

  OperatorMatrix() = default;
  OperatorMatrix(const BasisTag& tag, MatrixXcd m, bool hermitian_flag);
  // checks the Hermiticity deviation before setting the flag
  static OperatorMatrix hermitian_checked(const BasisTag& tag, MatrixXcd m);

  StateVector apply(const StateVector& psi) const;
};

Complex inner(const StateVector& a, const StateVector& b);  // <a|b>

}  // namespace dickesim
