#include "dickesim/config.hpp"

#include <cmath>

#include "dickesim/errors.hpp"

namespace dickesim {

Complex IonChainConfig::omega_eff(int j) const {
  return Complex(0.0, 2.0) * eta2 * omega1(j) * std::conj(omega2(j)) / delta;
}

double IonChainConfig::omega0(int j) const {
  return 2.0 * eta1 * eta1 * std::norm(omega1(j)) / delta;
}

bool IonChainConfig::homogeneous(double rel_tol) const {
  auto close = [rel_tol](Complex a, Complex b) {
    return std::abs(a - b) <= rel_tol * std::max(1.0, std::abs(b));
  };
  for (int j = 1; j < num_ions; ++j) {
    if (!close(omega1(j), omega1(0))) return false;
    if (!close(omega2(j), omega2(0))) return false;
    if (!close(delta0(j), delta0(0))) return false;
  }
  return true;
}

void IonChainConfig::validate() const {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (n_max < 1) throw ParameterError("n_max must be >= 1");
  if (!(delta > 0.0)) throw ParameterError("delta must be > 0");
  if (!(eta1 > 0.0 && eta1 < 1.0)) throw ParameterError("eta1 must lie in (0, 1)");
  if (!(eta2 > 0.0 && eta2 < 1.0)) throw ParameterError("eta2 must lie in (0, 1)");
  if (omega1.size() != num_ions)
    throw ParameterError("omega1 must have one entry per ion");
  if (omega2.size() != num_ions)
    throw ParameterError("omega2 must have one entry per ion");
  if (delta0.size() != num_ions)
    throw ParameterError("delta0 must have one entry per ion");
}

IonChainConfig IonChainConfig::homogeneous_ratio(int num_ions, int n_max, double ratio) {
  return scaled_couplings(num_ions, n_max, ratio, std::vector<double>(num_ions, 1.0));
}

IonChainConfig IonChainConfig::scaled_couplings(int num_ions, int n_max, double ratio,
                                                const std::vector<double>& omega1_scale) {
  if (num_ions < 1) throw ParameterError("num_ions must be >= 1");
  if (!(ratio > 0.0)) throw ParameterError("ratio omega0/|omega_eff| must be > 0");
  if (static_cast<int>(omega1_scale.size()) != num_ions)
    throw ParameterError("omega1_scale must have one entry per ion");
  IonChainConfig c;
  c.num_ions = num_ions;
  c.n_max = n_max;
  c.delta = 1.0;
  c.eta1 = 0.1;
  c.eta2 = 0.1;
  // |omega1| fixes omega0 = ratio, |omega2| then fixes |omega_eff| = 1 (for
  // scale 1); arg(omega_eff) = pi/2 from the i in the second-order coupling.
  const double o1 = std::sqrt(ratio * c.delta / (2.0 * c.eta1 * c.eta1));
  const double o2 = c.delta / (2.0 * c.eta2 * o1);
  c.omega1 = VectorXcd::Zero(num_ions);
  c.omega2 = VectorXcd::Constant(num_ions, Complex(o2, 0.0));
  for (int j = 0; j < num_ions; ++j) {
    if (!(omega1_scale[j] > 0.0))
      throw ParameterError("omega1_scale entries must be > 0");
    c.omega1(j) = Complex(o1 * omega1_scale[j], 0.0);
  }
  c.delta0 = VectorXd::Zero(num_ions);
  c.validate();
  return c;
}

IonChainConfig IonChainConfig::with_uniform_delta0(double value) const {
  IonChainConfig c = *this;
  c.delta0 = VectorXd::Constant(num_ions, value);
  return c;
}

IonChainConfig IonChainConfig::with_delta0_shift(double shift) const {
  IonChainConfig c = *this;
  c.delta0 = delta0.array() + shift;
  return c;
}

}  // namespace dickesim
