#include "dickesim/spaces.hpp"

#include <bit>
#include <cmath>

namespace dickesim {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// J~+ / J~- on a bare ion-register vector
VectorXcd apply_weighted_raising(const IonChainConfig& c, const VectorXcd& v) {
  const int dim = 1 << c.num_ions;
  VectorXcd out = VectorXcd::Zero(dim);
  for (int bits = 0; bits < dim; ++bits) {
    if (v(bits) == Complex(0.0, 0.0)) continue;
    for (int j = 0; j < c.num_ions; ++j)
      if (!((bits >> j) & 1)) out(bits | (1 << j)) += c.omega_eff(j) * v(bits);
  }
  return out;
}

VectorXcd apply_weighted_lowering(const IonChainConfig& c, const VectorXcd& v) {
  const int dim = 1 << c.num_ions;
  VectorXcd out = VectorXcd::Zero(dim);
  for (int bits = 0; bits < dim; ++bits) {
    if (v(bits) == Complex(0.0, 0.0)) continue;
    for (int j = 0; j < c.num_ions; ++j)
      if ((bits >> j) & 1) out(bits & ~(1 << j)) += std::conj(c.omega_eff(j)) * v(bits);
  }
  return out;
}

}  // namespace

StateVector dicke_state(int num_ions, int k) {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (k < 0 || k > num_ions)
    throw DomainError("Dicke index k = " + std::to_string(k) + " outside 0..N = " +
                      std::to_string(num_ions));
  const BasisTag tag = BasisTag::full_register(num_ions, 0);
  VectorXcd v = VectorXcd::Zero(tag.dim());
  const double amp = 1.0 / std::sqrt(binomial(num_ions, k));
  for (int bits = 0; bits < (1 << num_ions); ++bits)
    if (std::popcount(static_cast<unsigned>(bits)) == k) v(bits) = amp;
  return StateVector(tag, std::move(v));
}

double dicke_ladder_coeff(int num_ions, int k) {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (k < 0 || k > num_ions - 1)
    throw DomainError("ladder index k = " + std::to_string(k) + " outside 0..N-1 = " +
                      std::to_string(num_ions - 1));
  return std::sqrt(double(k + 1) * double(num_ions - k));
}

MatrixXcd dicke_isometry(int num_ions) {
  const int dim = 1 << num_ions;
  MatrixXcd v(dim, num_ions + 1);
  for (int k = 0; k <= num_ions; ++k) v.col(k) = dicke_state(num_ions, k).amplitudes;
  return v;
}

OperatorMatrix symmetric_projector(int num_ions) {
  const MatrixXcd v = dicke_isometry(num_ions);
  return OperatorMatrix::hermitian_checked(BasisTag::full_register(num_ions, 0),
                                           v * v.adjoint());
}

OperatorMatrix collective_raising(const IonChainConfig& config, const BasisTag& basis) {
  config.validate();
  if (basis.num_ions != config.num_ions)
    throw ConsistencyError("basis ion count does not match config");
  if (basis.with_ancilla)
    throw BasisError("collective raising is not defined on ancilla-extended bases");
  const int fock = basis.n_max + 1;
  MatrixXcd m = MatrixXcd::Zero(basis.dim(), basis.dim());
  switch (basis.kind) {
    case BasisKind::FullRegister: {
      for (int bits = 0; bits < (1 << config.num_ions); ++bits)
        for (int j = 0; j < config.num_ions; ++j) {
          if ((bits >> j) & 1) continue;
          const int up = bits | (1 << j);
          for (int n = 0; n < fock; ++n)
            m(up * fock + n, bits * fock + n) = config.omega_eff(j);
        }
      break;
    }
    case BasisKind::DickeFock: {
      if (!config.homogeneous())
        throw BasisError("Dicke-Fock collective raising requires homogeneous couplings");
      const Complex w = config.omega_eff(0);
      for (int k = 0; k < config.num_ions; ++k) {
        const double fk = dicke_ladder_coeff(config.num_ions, k);
        for (int n = 0; n < fock; ++n)
          m((k + 1) * fock + n, k * fock + n) = w * fk;
      }
      break;
    }
    default:
      throw BasisError("collective raising is defined on full-register and Dicke-Fock bases");
  }
  return OperatorMatrix(basis, std::move(m), false);
}

OperatorMatrix collective_lowering(const IonChainConfig& config, const BasisTag& basis) {
  OperatorMatrix up = collective_raising(config, basis);
  return OperatorMatrix(basis, up.entries.adjoint(), false);
}

int CollectiveNumberBasis::count(int k) const {
  int c = 0;
  for (const auto& m : states)
    if (m.k == k) ++c;
  return c;
}

int CollectiveNumberBasis::index_of(int k, int branch) const {
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i].k == k && states[i].branch == branch) return i;
  return -1;
}

const CollectiveNumberBasis::Member& CollectiveNumberBasis::member(int k, int branch) const {
  const int i = index_of(k, branch);
  if (i < 0)
    throw DomainError("no retained branch (k=" + std::to_string(k) + ", l=" +
                      std::to_string(branch) + ") in the collective number basis");
  return states[i];
}

BasisTag CollectiveNumberBasis::fock_basis() const {
  return BasisTag::collective_number_fock(config.num_ions, config.n_max,
                                          static_cast<int>(states.size()));
}

CollectiveNumberBasis build_collective_number_basis(const IonChainConfig& config,
                                                    int k_max, double drop_tol) {
  config.validate();
  if (k_max < 0 || k_max > config.num_ions)
    throw DomainError("k_max = " + std::to_string(k_max) + " outside 0..N = " +
                      std::to_string(config.num_ions));
  if (!(drop_tol > 0.0)) throw ParameterError("drop_tol must be > 0");

  CollectiveNumberBasis basis;
  basis.config = config;
  basis.drop_tol = drop_tol;

  const int dim = 1 << config.num_ions;
  std::vector<std::vector<VectorXcd>> levels(k_max + 1);
  VectorXcd ground = VectorXcd::Zero(dim);
  ground(0) = 1.0;
  levels[0].push_back(std::move(ground));

  // Push a candidate into its level after Gram-Schmidt against what is
  // already there; two projection passes keep the set orthonormal well below
  // the stated 1e-10 bound.
  auto try_add = [&](int k, VectorXcd cand) -> bool {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : levels[k]) cand -= u.dot(cand) * u;
    const double n = cand.norm();
    if (n < drop_tol) return false;
    levels[k].push_back(cand / n);
    return true;
  };

  std::vector<std::vector<bool>> expanded(k_max + 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k <= k_max; ++k) {
      for (std::size_t l = 0; l < levels[k].size(); ++l) {
        expanded[k].resize(levels[k].size(), false);
        if (expanded[k][l]) continue;
        const VectorXcd v = levels[k][l];
        if (k + 1 <= k_max && try_add(k + 1, apply_weighted_raising(config, v)))
          changed = true;
        if (k - 1 >= 0 && try_add(k - 1, apply_weighted_lowering(config, v)))
          changed = true;
        expanded[k][l] = true;
      }
    }
  }

  for (int k = 0; k <= k_max; ++k)
    for (std::size_t l = 0; l < levels[k].size(); ++l)
      basis.states.push_back({k, static_cast<int>(l), levels[k][l]});
  return basis;
}

}  // namespace dickesim
