#include "doctest.h"

#include "dickesim/spaces.hpp"
#include "oracles.hpp"

using namespace dickesim;

TEST_CASE("dicke states match brute-force symmetrization") {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) {
      const StateVector d = dicke_state(n, k);
      const Eigen::VectorXcd ref = oracles::brute_dicke(n, k);
      REQUIRE(d.amplitudes.size() == ref.size());
      CHECK((d.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(d.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("ladder coefficients agree with direct application") {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k < n; ++k)
      CHECK(dicke_ladder_coeff(n, k) ==
            doctest::Approx(oracles::brute_ladder_element(n, k)).epsilon(1e-13));
  CHECK_THROWS_AS(dicke_ladder_coeff(3, -1), DomainError);
  CHECK_THROWS_AS(dicke_ladder_coeff(3, 3), DomainError);
}

TEST_CASE("isometry columns are the dicke states and are orthonormal") {
  for (int n = 1; n <= 5; ++n) {
    const MatrixXcd v = dicke_isometry(n);
    const MatrixXcd gram = v.adjoint() * v;
    CHECK((gram - MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k <= n; ++k)
      CHECK((v.col(k) - oracles::brute_dicke(n, k)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("symmetric projector is an orthogonal rank-(N+1) projector") {
  const OperatorMatrix p = symmetric_projector(4);
  CHECK((p.entries - p.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((p.entries * p.entries - p.entries).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.entries.trace().real() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("collective raising reproduces the weighted ladder") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(4, 2, 10.0);
  const Complex w = cfg.omega_eff(0);

  SUBCASE("dicke-fock form") {
    OperatorMatrix jp = collective_raising(cfg, BasisTag::dicke_fock(4, 2));
    for (int k = 0; k < 4; ++k)
      for (int n = 0; n <= 2; ++n) {
        const Complex got = jp.entries((k + 1) * 3 + n, k * 3 + n);
        CHECK(std::abs(got - w * dicke_ladder_coeff(4, k)) < 1e-12);
      }
  }

  SUBCASE("register form maps D_k onto f_k D_{k+1}") {
    OperatorMatrix jp = collective_raising(cfg, BasisTag::full_register(4, 0));
    for (int k = 0; k < 4; ++k) {
      const VectorXcd image = jp.entries * dicke_state(4, k).amplitudes;
      const VectorXcd want = w * dicke_ladder_coeff(4, k) * dicke_state(4, k + 1).amplitudes;
      CHECK((image - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("lowering is the adjoint") {
    OperatorMatrix jp = collective_raising(cfg, BasisTag::full_register(4, 1));
    OperatorMatrix jm = collective_lowering(cfg, BasisTag::full_register(4, 1));
    CHECK((jm.entries - jp.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("homogeneous collective number basis is the dicke ladder") {
  IonChainConfig cfg = IonChainConfig::homogeneous_ratio(3, 2, 10.0);
  CollectiveNumberBasis basis = build_collective_number_basis(cfg, 3);
  for (int k = 0; k <= 3; ++k) {
    CHECK(basis.count(k) == 1);
    const VectorXcd& state = basis.member(k, 0).state;
    // member may differ from |D_k> by a phase
    CHECK(std::abs(std::abs(state.dot(dicke_state(3, k).amplitudes)) - 1.0) < 1e-10);
  }
}

TEST_CASE("inhomogeneous chain opens a second branch") {
  IonChainConfig cfg = IonChainConfig::scaled_couplings(2, 2, 10.0, {1.0, 1.3});
  CollectiveNumberBasis basis = build_collective_number_basis(cfg, 2);
  CHECK(basis.count(0) == 1);
  CHECK(basis.count(1) == 2);
  CHECK(basis.count(2) == 1);
  // full orthonormality across members
  const int total = static_cast<int>(basis.states.size());
  for (int a = 0; a < total; ++a)
    for (int b = 0; b < total; ++b) {
      const Complex g = basis.states[a].state.dot(basis.states[b].state);
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
  CHECK_THROWS_AS(basis.member(1, 2), DomainError);
}

TEST_CASE("basis tags: dimensions, labels, fock extraction") {
  const BasisTag reg = BasisTag::full_register(3, 2, true);
  CHECK(reg.dim() == 2 * 8 * 3);
  CHECK(reg.fock_of(5) == 2);
  const BasisTag df = BasisTag::dicke_fock(3, 2);
  CHECK(df.dim() == 12);
  CHECK(df.label(0 * 3 + 1) == "D0_n1");
  CHECK(BasisTag::full_register(2, 1).label(1 * 2 + 0) == "eg_n0");
  CHECK_THROWS_AS(BasisTag::two_level_doublet(2, 0, 0, Sideband::Blue).fock_of(0),
                  BasisError);
}

TEST_CASE("state and operator plumbing") {
  const BasisTag tag = BasisTag::dicke_fock(2, 1);
  StateVector e2 = StateVector::basis_state(tag, 2);
  CHECK(e2.amplitudes(2) == Complex(1.0, 0.0));
  CHECK_NOTHROW(e2.require_normalized());

  MatrixXcd m = MatrixXcd::Zero(tag.dim(), tag.dim());
  m(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(OperatorMatrix::hermitian_checked(tag, m), ContractError);
  m(1, 0) = Complex(0.0, -1.0);
  OperatorMatrix op = OperatorMatrix::hermitian_checked(tag, m);
  StateVector out = op.apply(StateVector::basis_state(tag, 1));
  CHECK(std::abs(out.amplitudes(0) - Complex(0.0, 1.0)) < 1e-15);
}
