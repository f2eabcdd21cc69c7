#include "dickesim/dynamics.hpp"

#include <cmath>
#include <random>

namespace dickesim {

void EvolutionSpec::validate() const {
  if (!(dt > 0.0)) throw ParameterError("integrator step dt must be > 0");
  if (!(norm_tol > 0.0 && norm_tol < 1.0))
    throw ParameterError("norm_tol must lie in (0, 1)");
  if (!(truncation_tol > 0.0)) throw ParameterError("truncation_tol must be > 0");
}

HermitianPropagator::HermitianPropagator(const OperatorMatrix& h) : basis_(h.basis) {
  if (!h.hermitian) throw ContractError("propagator requires a Hermitian operator");
  const double dev = (h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff();
  if (dev >= 1e-12)
    throw ContractError("operator flagged Hermitian deviates by " + std::to_string(dev));
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h.entries);
  if (solver.info() != Eigen::Success)
    throw ContractError("eigendecomposition failed to converge");
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
}

StateVector HermitianPropagator::evolve(const StateVector& psi, double t) const {
  if (psi.basis != basis_) throw ConsistencyError("propagator and state bases differ");
  VectorXcd modal = evecs_.adjoint() * psi.amplitudes;
  for (int i = 0; i < modal.size(); ++i)
    modal(i) *= std::exp(Complex(0.0, -evals_(i) * t));
  return StateVector(basis_, evecs_ * modal);
}

StateVector evolve_static(const OperatorMatrix& h, const StateVector& psi, double t) {
  return HermitianPropagator(h).evolve(psi, t);
}

namespace {

bool has_fock_factor(const BasisTag& tag) {
  return tag.kind != BasisKind::TwoLevelDoublet && tag.n_max >= 1;
}

double fock_edge_population(const BasisTag& tag, const VectorXcd& amp) {
  const int fock = tag.n_max + 1;
  const int edge = std::max(1, tag.n_max - 1);  // never count the ground level
  double p = 0.0;
  for (int i = 0; i < amp.size(); ++i) {
    const int n = i % fock;
    if (n >= edge) p += std::norm(amp(i));
  }
  return p;
}

struct Rk4Workspace {
  MatrixXcd m_start, m_mid, m_end;
  VectorXcd k1, k2, k3, k4, tmp;
};

void rk4_step(const TimeDependentHamiltonian& h, double t, double step, VectorXcd& psi,
              Rk4Workspace& w) {
  const Complex mi(0.0, -1.0);
  h.fill(t, w.m_start);
  h.fill(t + 0.5 * step, w.m_mid);
  h.fill(t + step, w.m_end);
  w.k1 = mi * (w.m_start * psi);
  w.tmp = psi + (0.5 * step) * w.k1;
  w.k2 = mi * (w.m_mid * w.tmp);
  w.tmp = psi + (0.5 * step) * w.k2;
  w.k3 = mi * (w.m_mid * w.tmp);
  w.tmp = psi + step * w.k3;
  w.k4 = mi * (w.m_end * w.tmp);
  psi += (step / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

std::vector<StateVector> integrate(const TimeDependentHamiltonian& h, const StateVector& psi0,
                                   double t_final, std::span<const double> sample_times,
                                   const EvolutionSpec& spec) {
  spec.validate();
  if (!h.fill) throw ParameterError("time-dependent Hamiltonian has no fill function");
  if (t_final < 0.0) throw DomainError("t_final must be >= 0");
  psi0.require_normalized();
  double prev = -1.0;
  for (double s : sample_times) {
    if (s < 0.0 || s > t_final)
      throw DomainError("sample time " + std::to_string(s) + " outside [0, t_final]");
    if (s <= prev) throw DomainError("sample times must be strictly increasing");
    prev = s;
  }

  const bool check_fock = has_fock_factor(h.basis);
  std::vector<StateVector> out;
  out.reserve(sample_times.size());
  VectorXcd psi = psi0.amplitudes;
  Rk4Workspace w;
  double t = 0.0;
  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
    out.emplace_back(h.basis, psi);
    ++next_sample;
  }
  while (t < t_final) {
    double step = std::min(spec.dt, t_final - t);
    if (next_sample < sample_times.size())
      step = std::min(step, sample_times[next_sample] - t);
    rk4_step(h, t, step, psi, w);
    t += step;
    if (check_fock) {
      const double edge = fock_edge_population(h.basis, psi);
      if (edge > spec.truncation_tol)
        throw CutoffError("population " + std::to_string(edge) +
                          " reached the top two Fock levels at t = " + std::to_string(t) +
                          "; raise n_max above " + std::to_string(h.basis.n_max));
    }
    if (next_sample < sample_times.size() &&
        t >= sample_times[next_sample] - 1e-15 * std::max(1.0, t_final)) {
      out.emplace_back(h.basis, psi);
      ++next_sample;
    }
  }
  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > spec.norm_tol)
    throw IntegrationError("norm drifted by " + std::to_string(drift) +
                           " (tolerance " + std::to_string(spec.norm_tol) +
                           "); reduce dt below " + std::to_string(spec.dt));
  out.emplace_back(h.basis, std::move(psi));
  return out;
}

}  // namespace

StateVector evolve_timedep(const TimeDependentHamiltonian& h, const StateVector& psi,
                           double t_final, const EvolutionSpec& spec) {
  auto states = integrate(h, psi, t_final, {}, spec);
  return std::move(states.back());
}

std::vector<StateVector> evolve_timedep_sampled(const TimeDependentHamiltonian& h,
                                                const StateVector& psi, double t_final,
                                                std::span<const double> sample_times,
                                                const EvolutionSpec& spec) {
  auto states = integrate(h, psi, t_final, sample_times, spec);
  states.pop_back();  // keep exactly the requested samples
  return states;
}

StateVector frame_transform(const StateVector& psi, const OperatorMatrix& h0_diag, double t,
                            FrameDirection direction) {
  if (psi.basis != h0_diag.basis)
    throw ConsistencyError("frame generator and state bases differ");
  MatrixXcd off = h0_diag.entries;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() >= 1e-12)
    throw ContractError("frame generator must be diagonal");
  const double sign = direction == FrameDirection::ToInteraction ? 1.0 : -1.0;
  VectorXcd amp = psi.amplitudes;
  for (int i = 0; i < amp.size(); ++i)
    amp(i) *= std::exp(Complex(0.0, sign * h0_diag.entries(i, i).real() * t));
  return StateVector(psi.basis, std::move(amp));
}

MeasurementRecord measure_ancilla(const StateVector& psi, std::uint64_t seed) {
  if (!psi.basis.with_ancilla)
    throw BasisError("measurement requires a basis with the ancilla qubit factor");
  psi.require_normalized();
  const int block = psi.basis.dim() / 2;
  double p_excited = 0.0;
  for (int i = block; i < 2 * block; ++i) p_excited += std::norm(psi.amplitudes(i));

  std::mt19937_64 gen(seed);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
  const bool excited = u < p_excited;

  VectorXcd post = psi.amplitudes;
  if (excited)
    post.head(block).setZero();
  else
    post.tail(block).setZero();
  const double weight = excited ? p_excited : 1.0 - p_excited;
  post /= std::sqrt(weight);

  return MeasurementRecord{excited ? AncillaOutcome::Excited : AncillaOutcome::Ground,
                           weight, StateVector(psi.basis, std::move(post)), seed};
}

}  // namespace dickesim
