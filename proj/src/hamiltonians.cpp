#include "dickesim/hamiltonians.hpp"

#include <bit>
#include <cmath>

namespace dickesim {

namespace {

Complex segment_coupling(const IonChainConfig& c, int j, std::optional<double> pulse_phase) {
  const Complex w = c.omega_eff(j);
  if (!pulse_phase) return w;
  return std::abs(w) * std::exp(Complex(0.0, -*pulse_phase));
}

void require_homogeneous(const IonChainConfig& c, const char* what) {
  if (!c.homogeneous())
    throw BasisError(std::string(what) + " requires homogeneous couplings; "
                     "use the full-register or collective-number forms instead");
}

}  // namespace

DoubletTarget DoubletTarget::blue(int n0, int k0, int branch) {
  return DoubletTarget{n0, k0, Sideband::Blue, branch};
}

DoubletTarget DoubletTarget::red(int n0, int k0, int branch) {
  return DoubletTarget{n0, k0, Sideband::Red, branch};
}

std::pair<int, int> DoubletTarget::lower_member() const {
  return sideband == Sideband::Blue ? std::pair{n0, k0} : std::pair{n0 + 1, k0};
}

std::pair<int, int> DoubletTarget::upper_member() const {
  return sideband == Sideband::Blue ? std::pair{n0 + 1, k0 + 1} : std::pair{n0, k0 + 1};
}

void DoubletTarget::validate(const IonChainConfig& config) const {
  if (n0 < 0 || k0 < 0) throw DomainError("doublet labels must be non-negative");
  if (k0 + 1 > config.num_ions)
    throw DomainError("doublet k0 = " + std::to_string(k0) + " exceeds N-1 = " +
                      std::to_string(config.num_ions - 1));
  if (n0 + 1 > config.n_max)
    throw DomainError("doublet n0 = " + std::to_string(n0) + " exceeds n_max-1 = " +
                      std::to_string(config.n_max - 1));
  if (branch < 0) throw DomainError("doublet branch must be non-negative");
}

OperatorMatrix stark_shift_operator(const IonChainConfig& config) {
  config.validate();
  const BasisTag tag = BasisTag::full_register(config.num_ions, config.n_max);
  const int fock = config.n_max + 1;
  MatrixXcd m = MatrixXcd::Zero(tag.dim(), tag.dim());
  for (int bits = 0; bits < (1 << config.num_ions); ++bits)
    for (int n = 0; n < fock; ++n) {
      double v = 0.0;
      for (int j = 0; j < config.num_ions; ++j) {
        if ((bits >> j) & 1)
          v += std::norm(config.omega2(j)) / config.delta;
        else
          v += (1.0 - config.eta1 * config.eta1 * (2.0 * n + 1.0)) *
               std::norm(config.omega1(j)) / config.delta;
      }
      m(bits * fock + n, bits * fock + n) = v;
    }
  return OperatorMatrix(tag, std::move(m), true);
}

OperatorMatrix effective_hamiltonian(const IonChainConfig& config, Sideband sideband,
                                     std::optional<double> pulse_phase) {
  config.validate();
  const BasisTag tag = BasisTag::full_register(config.num_ions, config.n_max);
  const int fock = config.n_max + 1;
  MatrixXcd m = MatrixXcd::Zero(tag.dim(), tag.dim());
  for (int bits = 0; bits < (1 << config.num_ions); ++bits) {
    double diag = 0.0;
    for (int j = 0; j < config.num_ions; ++j)
      if (!((bits >> j) & 1)) diag += config.omega0(j);
    for (int n = 0; n < fock; ++n) {
      double e = 0.0;
      for (int j = 0; j < config.num_ions; ++j)
        if (!((bits >> j) & 1)) e -= config.omega0(j) * (n - config.delta0(j));
      m(bits * fock + n, bits * fock + n) = e;
    }
    for (int j = 0; j < config.num_ions; ++j) {
      if ((bits >> j) & 1) continue;
      const int up = bits | (1 << j);
      const Complex w = segment_coupling(config, j, pulse_phase);
      for (int n = 0; n + 1 < fock; ++n) {
        const double s = std::sqrt(double(n + 1));
        if (sideband == Sideband::Blue) {
          m(up * fock + n + 1, bits * fock + n) += w * s;
          m(bits * fock + n, up * fock + n + 1) += std::conj(w) * s;
        } else {
          m(up * fock + n, bits * fock + n + 1) += w * s;
          m(bits * fock + n + 1, up * fock + n) += std::conj(w) * s;
        }
      }
    }
  }
  return OperatorMatrix(tag, std::move(m), true);
}

double symmetric_diag_energy(const IonChainConfig& config, int n, int k) {
  return -config.omega0(0) * (n - config.delta0(0)) * (config.num_ions - k);
}

OperatorMatrix symmetric_effective_hamiltonian(const IonChainConfig& config, Sideband sideband,
                                               std::optional<double> pulse_phase) {
  config.validate();
  require_homogeneous(config, "the symmetric Dicke-ladder Hamiltonian");
  const BasisTag tag = BasisTag::dicke_fock(config.num_ions, config.n_max);
  const int fock = config.n_max + 1;
  MatrixXcd m = MatrixXcd::Zero(tag.dim(), tag.dim());
  const Complex w = segment_coupling(config, 0, pulse_phase);
  for (int k = 0; k <= config.num_ions; ++k)
    for (int n = 0; n < fock; ++n)
      m(k * fock + n, k * fock + n) = symmetric_diag_energy(config, n, k);
  for (int k = 0; k < config.num_ions; ++k) {
    const double fk = dicke_ladder_coeff(config.num_ions, k);
    for (int n = 0; n + 1 < fock; ++n) {
      const double s = std::sqrt(double(n + 1));
      if (sideband == Sideband::Blue) {
        m((k + 1) * fock + n + 1, k * fock + n) += w * s * fk;
        m(k * fock + n, (k + 1) * fock + n + 1) += std::conj(w) * s * fk;
      } else {
        m((k + 1) * fock + n, k * fock + n + 1) += w * s * fk;
        m(k * fock + n + 1, (k + 1) * fock + n) += std::conj(w) * s * fk;
      }
    }
  }
  return OperatorMatrix(tag, std::move(m), true);
}

SymmetricInteractionGenerator::SymmetricInteractionGenerator(const IonChainConfig& config_,
                                                             Sideband sideband_,
                                                             std::optional<double> pulse_phase_)
    : config(config_), sideband(sideband_), pulse_phase(pulse_phase_),
      basis(BasisTag::dicke_fock(config_.num_ions, config_.n_max)) {
  config.validate();
  require_homogeneous(config, "the interaction-picture symmetric Hamiltonian");
}

void SymmetricInteractionGenerator::fill(double t, MatrixXcd& m) const {
  const int fock = config.n_max + 1;
  m.setZero(basis.dim(), basis.dim());
  const Complex w = segment_coupling(config, 0, pulse_phase);
  for (int k = 0; k < config.num_ions; ++k) {
    const double fk = dicke_ladder_coeff(config.num_ions, k);
    for (int n = 0; n + 1 < fock; ++n) {
      const double s = std::sqrt(double(n + 1));
      int lo, up;
      double ediff;  // E(destination) - E(source) of the raising element
      if (sideband == Sideband::Blue) {
        lo = k * fock + n;
        up = (k + 1) * fock + n + 1;
        ediff = symmetric_diag_energy(config, n + 1, k + 1) -
                symmetric_diag_energy(config, n, k);
      } else {
        lo = k * fock + n + 1;
        up = (k + 1) * fock + n;
        ediff = symmetric_diag_energy(config, n, k + 1) -
                symmetric_diag_energy(config, n + 1, k);
      }
      const Complex v = w * s * fk * std::exp(Complex(0.0, ediff * t));
      m(up, lo) = v;
      m(lo, up) = std::conj(v);
    }
  }
}

OperatorMatrix SymmetricInteractionGenerator::at(double t) const {
  MatrixXcd m;
  fill(t, m);
  return OperatorMatrix(basis, std::move(m), true);
}

OperatorMatrix symmetric_interaction_hamiltonian(const IonChainConfig& config, double t,
                                                 Sideband sideband) {
  return SymmetricInteractionGenerator(config, sideband).at(t);
}

double resonance_delta0(const DoubletTarget& target, int num_ions) {
  if (target.k0 < 0 || target.k0 > num_ions - 1)
    throw DomainError("doublet k0 = " + std::to_string(target.k0) + " exceeds N-1 = " +
                      std::to_string(num_ions - 1));
  if (target.n0 < 0) throw DomainError("doublet n0 must be non-negative");
  if (target.sideband == Sideband::Blue)
    return double(target.k0 + target.n0 - num_ions + 1);
  return double(num_ions + target.n0 - target.k0);
}

OperatorMatrix selective_two_level(const IonChainConfig& config, const DoubletTarget& target,
                                   std::optional<double> pulse_phase) {
  config.validate();
  target.validate(config);
  require_homogeneous(config, "the two-level doublet reduction");
  const Complex w = segment_coupling(config, 0, pulse_phase);
  const Complex c = std::sqrt(double(target.n0 + 1)) *
                    dicke_ladder_coeff(config.num_ions, target.k0) * w;
  MatrixXcd m(2, 2);
  m << 0.0, std::conj(c), c, 0.0;
  const BasisTag tag = BasisTag::two_level_doublet(config.num_ions, target.n0, target.k0,
                                                   target.sideband);
  return OperatorMatrix(tag, std::move(m), true);
}

double doublet_rabi_frequency(const IonChainConfig& config, const DoubletTarget& target) {
  config.validate();
  target.validate(config);
  require_homogeneous(config, "the doublet Rabi frequency");
  return 2.0 * std::sqrt(double(target.n0 + 1)) *
         dicke_ladder_coeff(config.num_ions, target.k0) * std::abs(config.omega_eff(0));
}

OperatorMatrix carrier_generator(const IonChainConfig& config) {
  config.validate();
  const BasisTag tag = BasisTag::full_register(config.num_ions, config.n_max);
  OperatorMatrix up = collective_raising(config, tag);
  return OperatorMatrix::hermitian_checked(tag, up.entries + up.entries.adjoint());
}

namespace {

void require_basis_matches(const IonChainConfig& config, const CollectiveNumberBasis& basis) {
  const IonChainConfig& bc = basis.config;
  // delta0 is deliberately not compared: the basis states depend only on the
  // couplings, and retuning workflows reuse one basis across delta0 shifts
  bool ok = config.num_ions == bc.num_ions && config.n_max == bc.n_max &&
            config.delta == bc.delta && config.eta1 == bc.eta1 && config.eta2 == bc.eta2;
  if (ok)
    for (int j = 0; j < config.num_ions; ++j)
      ok = ok && config.omega1(j) == bc.omega1(j) && config.omega2(j) == bc.omega2(j);
  if (!ok)
    throw ConsistencyError("collective number basis was built for a different chain config");
}

// <v1| -sum_j omega0_j (n - delta0_j) |g_j><g_j| |v2> on the bare register
Complex projected_diag_element(const IonChainConfig& c, const VectorXcd& v1,
                               const VectorXcd& v2, int n) {
  Complex acc = 0.0;
  for (int bits = 0; bits < (1 << c.num_ions); ++bits) {
    const Complex p = std::conj(v1(bits)) * v2(bits);
    if (p == Complex(0.0, 0.0)) continue;
    double e = 0.0;
    for (int j = 0; j < c.num_ions; ++j)
      if (!((bits >> j) & 1)) e -= c.omega0(j) * (n - c.delta0(j));
    acc += p * e;
  }
  return acc;
}

}  // namespace

namespace {

MatrixXcd ladder_terms(const InhomogeneousHamiltonian& h, MatrixXcd m) {
  const int fock = h.basis.n_max + 1;
  for (const auto& c : h.couplings) {
    // member indices are (k, branch) positions in the sorted state list; the
    // diagonal matrix was built with the same ordering
    const int lo = c.from_index;
    const int up = c.to_index;
    for (int n = 0; n + 1 < fock; ++n) {
      const double s = std::sqrt(double(n + 1));
      m(up * fock + n + 1, lo * fock + n) += c.value * s;
      m(lo * fock + n, up * fock + n + 1) += std::conj(c.value) * s;
    }
  }
  return m;
}

}  // namespace

OperatorMatrix InhomogeneousHamiltonian::full_matrix() const {
  return OperatorMatrix(basis, ladder_terms(*this, diagonal.entries), true);
}

OperatorMatrix InhomogeneousHamiltonian::model_matrix() const {
  MatrixXcd diag = MatrixXcd::Zero(diagonal.entries.rows(), diagonal.entries.cols());
  diag.diagonal() = diagonal.entries.diagonal();
  return OperatorMatrix(basis, ladder_terms(*this, std::move(diag)), true);
}

InhomogeneousHamiltonian inhomogeneous_hamiltonian(const IonChainConfig& config,
                                                   const CollectiveNumberBasis& basis) {
  config.validate();
  require_basis_matches(config, basis);
  InhomogeneousHamiltonian h;
  h.basis = basis.fock_basis();
  const int members = static_cast<int>(basis.states.size());
  const int fock = config.n_max + 1;
  MatrixXcd diag = MatrixXcd::Zero(h.basis.dim(), h.basis.dim());
  for (int i = 0; i < members; ++i)
    for (int i2 = 0; i2 < members; ++i2) {
      if (basis.states[i].k != basis.states[i2].k) continue;
      for (int n = 0; n < fock; ++n)
        diag(i * fock + n, i2 * fock + n) =
            projected_diag_element(config, basis.states[i].state, basis.states[i2].state, n);
    }
  h.diagonal = OperatorMatrix(h.basis, std::move(diag), true);
  for (int i = 0; i < members; ++i)
    for (int i2 = 0; i2 < members; ++i2) {
      if (basis.states[i2].k != basis.states[i].k + 1) continue;
      VectorXcd raised = VectorXcd::Zero(1 << config.num_ions);
      for (int bits = 0; bits < (1 << config.num_ions); ++bits) {
        if (basis.states[i].state(bits) == Complex(0.0, 0.0)) continue;
        for (int j = 0; j < config.num_ions; ++j)
          if (!((bits >> j) & 1))
            raised(bits | (1 << j)) += config.omega_eff(j) * basis.states[i].state(bits);
      }
      const Complex val = basis.states[i2].state.dot(raised);
      h.couplings.push_back({basis.states[i].k, basis.states[i].branch,
                             basis.states[i2].branch, val, i, i2});
    }
  return h;
}

double inhomogeneous_resonance_shift(const IonChainConfig& config,
                                     const CollectiveNumberBasis& basis,
                                     const DoubletTarget& target) {
  config.validate();
  require_basis_matches(config, basis);
  if (target.sideband != Sideband::Blue)
    throw DomainError("the uniform retuning shift is defined for blue-sideband targets");
  target.validate(config);
  const auto& lo = basis.member(target.k0, target.branch);
  const auto& up = basis.member(target.k0 + 1, target.branch);

  // ground occupation of ion j in each member
  auto g_occ = [&](const VectorXcd& v, int j) {
    double g = 0.0;
    for (int bits = 0; bits < (1 << config.num_ions); ++bits)
      if (!((bits >> j) & 1)) g += std::norm(v(bits));
    return g;
  };

  // E(member, n; s) = -sum_j omega0_j (n - delta0_j - s) G_j, affine in s;
  // solve E(up, n0+1; s) - E(lo, n0; s) = 0
  double diff0 = 0.0, slope = 0.0, scale = 0.0;
  for (int j = 0; j < config.num_ions; ++j) {
    const double gu = g_occ(up.state, j);
    const double gl = g_occ(lo.state, j);
    diff0 += -config.omega0(j) * ((target.n0 + 1 - config.delta0(j)) * gu -
                                  (target.n0 - config.delta0(j)) * gl);
    slope += config.omega0(j) * (gu - gl);
    scale += config.omega0(j) * (gu + gl);
  }
  if (std::abs(slope) <= 1e-12 * std::max(1.0, scale))
    throw NoSolutionError("retuning cannot move this doublet: the shift dependence "
                          "cancels between the two members (zero affine slope)");
  return -diff0 / slope;
}

}  // namespace dickesim
