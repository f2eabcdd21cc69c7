#include "dickesim/basis.hpp"

#include <sstream>

namespace dickesim {

BasisTag BasisTag::full_register(int num_ions, int n_max, bool ancilla) {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  BasisTag t;
  t.kind = BasisKind::FullRegister;
  t.num_ions = num_ions;
  t.n_max = n_max;
  t.with_ancilla = ancilla;
  return t;
}

BasisTag BasisTag::dicke_fock(int num_ions, int n_max, bool ancilla) {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  BasisTag t;
  t.kind = BasisKind::DickeFock;
  t.num_ions = num_ions;
  t.n_max = n_max;
  t.with_ancilla = ancilla;
  return t;
}

BasisTag BasisTag::collective_number_fock(int num_ions, int n_max, int members) {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  if (members < 1) throw ParameterError("members must be >= 1");
  BasisTag t;
  t.kind = BasisKind::CollectiveNumberFock;
  t.num_ions = num_ions;
  t.n_max = n_max;
  t.members = members;
  return t;
}

BasisTag BasisTag::two_level_doublet(int num_ions, int n0, int k0, Sideband sb) {
  BasisTag t;
  t.kind = BasisKind::TwoLevelDoublet;
  t.num_ions = num_ions;
  t.doublet_n0 = n0;
  t.doublet_k0 = k0;
  t.doublet_sideband = sb;
  return t;
}

int BasisTag::dim() const {
  const int anc = with_ancilla ? 2 : 1;
  switch (kind) {
    case BasisKind::FullRegister:
      return anc * (1 << num_ions) * (n_max + 1);
    case BasisKind::DickeFock:
      return anc * (num_ions + 1) * (n_max + 1);
    case BasisKind::CollectiveNumberFock:
      return members * (n_max + 1);
    case BasisKind::TwoLevelDoublet:
      return 2;
  }
  throw ContractError("unknown basis kind");
}

int BasisTag::fock_of(int index) const {
  if (kind == BasisKind::TwoLevelDoublet)
    throw BasisError("doublet basis has no explicit Fock factor");
  return index % (n_max + 1);
}

std::string BasisTag::label(int index) const {
  if (index < 0 || index >= dim()) throw DomainError("basis index out of range");
  std::ostringstream os;
  switch (kind) {
    case BasisKind::TwoLevelDoublet:
      return index == 0 ? "lower" : "upper";
    case BasisKind::DickeFock: {
      const int block = (num_ions + 1) * (n_max + 1);
      const int a = with_ancilla ? index / block : 0;
      const int rest = index % block;
      os << "D" << rest / (n_max + 1) << "_n" << rest % (n_max + 1);
      if (with_ancilla) os << (a ? "_Ae" : "_Ag");
      return os.str();
    }
    case BasisKind::FullRegister: {
      const int block = (1 << num_ions) * (n_max + 1);
      const int a = with_ancilla ? index / block : 0;
      const int rest = index % block;
      const int bits = rest / (n_max + 1);
      for (int j = 0; j < num_ions; ++j) os << (((bits >> j) & 1) ? 'e' : 'g');
      os << "_n" << rest % (n_max + 1);
      if (with_ancilla) os << (a ? "_Ae" : "_Ag");
      return os.str();
    }
    case BasisKind::CollectiveNumberFock:
      os << "m" << index / (n_max + 1) << "_n" << index % (n_max + 1);
      return os.str();
  }
  throw ContractError("unknown basis kind");
}

bool BasisTag::operator==(const BasisTag& o) const {
  if (kind != o.kind || num_ions != o.num_ions || n_max != o.n_max ||
      with_ancilla != o.with_ancilla)
    return false;
  if (kind == BasisKind::CollectiveNumberFock && members != o.members) return false;
  if (kind == BasisKind::TwoLevelDoublet &&
      (doublet_n0 != o.doublet_n0 || doublet_k0 != o.doublet_k0 ||
       doublet_sideband != o.doublet_sideband))
    return false;
  return true;
}

std::string to_string(const BasisTag& tag) {
  std::ostringstream os;
  switch (tag.kind) {
    case BasisKind::FullRegister: os << "full-register"; break;
    case BasisKind::DickeFock: os << "dicke-fock"; break;
    case BasisKind::CollectiveNumberFock: os << "collective-number-fock"; break;
    case BasisKind::TwoLevelDoublet: os << "two-level-doublet"; break;
  }
  os << "(N=" << tag.num_ions << ", n_max=" << tag.n_max;
  if (tag.with_ancilla) os << ", ancilla";
  if (tag.kind == BasisKind::CollectiveNumberFock) os << ", members=" << tag.members;
  os << ")";
  return os.str();
}

StateVector::StateVector(const BasisTag& tag, VectorXcd amp) : basis(tag), amplitudes(std::move(amp)) {
  if (amplitudes.size() != basis.dim())
    throw ConsistencyError("amplitude vector size " + std::to_string(amplitudes.size()) +
                           " does not match basis dimension " + std::to_string(basis.dim()));
}

StateVector StateVector::basis_state(const BasisTag& tag, int index) {
  if (index < 0 || index >= tag.dim()) throw DomainError("basis index out of range");
  VectorXcd v = VectorXcd::Zero(tag.dim());
  v(index) = 1.0;
  return StateVector(tag, std::move(v));
}

void StateVector::require_normalized(double tol) const {
  const double n = norm();
  if (std::abs(n - 1.0) > tol)
    throw ConsistencyError("state norm " + std::to_string(n) + " deviates from 1 beyond " +
                           std::to_string(tol));
}

OperatorMatrix::OperatorMatrix(const BasisTag& tag, MatrixXcd m, bool hermitian_flag)
    : basis(tag), entries(std::move(m)), hermitian(hermitian_flag) {
  if (entries.rows() != basis.dim() || entries.cols() != basis.dim())
    throw ConsistencyError("operator shape does not match basis dimension " +
                           std::to_string(basis.dim()));
}

OperatorMatrix OperatorMatrix::hermitian_checked(const BasisTag& tag, MatrixXcd m) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev >= 1e-12)
    throw ContractError("matrix fails the Hermiticity bound: max |M - M^dag| = " +
                        std::to_string(dev));
  return OperatorMatrix(tag, std::move(m), true);
}

StateVector OperatorMatrix::apply(const StateVector& psi) const {
  if (psi.basis != basis) throw ConsistencyError("operator and state bases differ");
  return StateVector(basis, entries * psi.amplitudes);
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.basis != b.basis) throw ConsistencyError("inner product across different bases");
  return a.amplitudes.dot(b.amplitudes);  // Eigen dot conjugates the left factor
}

}  // namespace dickesim
