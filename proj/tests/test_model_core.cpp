#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ropesway/disturbance.hpp"
#include "ropesway/errors.hpp"
#include "ropesway/modal_basis.hpp"
#include "ropesway/system_matrices.hpp"

using namespace ropesway;

namespace {

RopeParams table_params() { return RopeParams{}; }  // defaults are the table

SystemMatrices static_mats(int modes,
                           AssemblyPath path = AssemblyPath::automatic) {
  return assemble_matrices(table_params(), KinematicState{},
                           ModalBasis::sine(modes), path);
}

}  // namespace

TEST_CASE("boundary transfer factor") {
  RopeParams p = table_params();

  SUBCASE("vanishes when the car is at the bottom (l = H)") {
    p.l = p.H;
    CHECK(derive_f2(0.2, p) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("approaches unity transfer for a short rope") {
    p.l = 1e-9;
    CHECK(derive_f2(0.2, p) == doctest::Approx(0.2).epsilon(1e-9));
  }
  SUBCASE("table geometry value") {
    // 0.2 * sin(pi * 12.8 / 805.6), evaluated independently at high precision
    CHECK(derive_f2(0.2, p) == doctest::Approx(0.00997906879061847).epsilon(1e-13));
  }
}

TEST_CASE("quasi-static tension") {
  RopeParams p = table_params();
  KinematicState kin;

  CHECK(p.m_eff() == doctest::Approx(437.5));
  CHECK(tension(p, kin, p.l) == doctest::Approx(437.5 * 9.81).epsilon(1e-14));
  CHECK(tension(p, kin, 0.0) ==
        doctest::Approx((437.5 + 2.11 * 390.0) * 9.81).epsilon(1e-14));
  CHECK(tension(p, kin, 0.0) == doctest::Approx(12364.524).epsilon(1e-12));

  SUBCASE("compensating sheave adds a constant offset") {
    p.M_cs = 100.0;
    CHECK(tension(p, kin, p.l) ==
          doctest::Approx(437.5 * 9.81 + 0.5 * 100.0 * 9.81).epsilon(1e-14));
  }
  SUBCASE("full car mass option") {
    p.car_mass_share = CarMassShare::full;
    CHECK(p.m_eff() == doctest::Approx(3500.0));
  }
  SUBCASE("outside the rope is a domain error") {
    CHECK_THROWS_AS(tension(p, kin, -1.0), DomainError);
    CHECK_THROWS_AS(tension(p, kin, p.l + 1.0), DomainError);
  }
}

TEST_CASE("boundary-motion source terms") {
  RopeParams p = table_params();
  KinematicState kin;

  SUBCASE("zero disturbance gives all-zero terms") {
    auto bm = DisturbanceProfile::zero().boundary_motion(p, 3.0);
    STerms s = s_terms(p, kin, bm);
    CHECK(s.s1 == 0.0);
    CHECK(s.s2 == 0.0);
    CHECK(s.s3 == 0.0);
    CHECK(s.s4 == 0.0);
  }

  SUBCASE("effective gradient coefficient is rho*g at rest") {
    auto bm = DisturbanceProfile::zero().boundary_motion(p, 0.0);
    STerms s = s_terms(p, kin, bm);
    CHECK(s.G == doctest::Approx(2.11 * 9.81).epsilon(1e-15));
    CHECK(s.G == doctest::Approx(20.6991).epsilon(1e-10));
  }

  SUBCASE("s1/s2 match central differences of the end-to-end slope") {
    auto dist = DisturbanceProfile::sinusoid(0.2, 0.08);
    const double t = 1.7, h = 1e-6;
    auto s3_at = [&](double tt) {
      return s_terms(p, kin, dist.boundary_motion(p, tt)).s3;
    };
    STerms s = s_terms(p, kin, dist.boundary_motion(p, t));
    const double s2_fd = (s3_at(t + h) - s3_at(t - h)) / (2.0 * h);
    const double s1_fd = (s3_at(t + h) - 2.0 * s3_at(t) + s3_at(t - h)) / (h * h);
    CHECK(s.s2 == doctest::Approx(s2_fd).epsilon(1e-8));
    CHECK(s.s1 == doctest::Approx(s1_fd).epsilon(1e-4));
  }

  SUBCASE("s2 at t=0 is the velocity mismatch over the length") {
    auto dist = DisturbanceProfile::sinusoid(0.2, 0.08);
    auto bm = dist.boundary_motion(p, 0.0);
    STerms s = s_terms(p, kin, bm);
    const double f1_dot0 = 0.2 * 2.0 * M_PI * 0.08;
    CHECK(bm.f1_dot == doctest::Approx(f1_dot0).epsilon(1e-15));
    CHECK(s.s2 == doctest::Approx((bm.f2_dot - bm.f1_dot) / p.l).epsilon(1e-14));
  }
}

TEST_CASE("matrix assembly, static configuration") {
  SystemMatrices m1 = static_mats(1);
  SystemMatrices m2 = static_mats(2);

  SUBCASE("mass matrix is rho*I exactly") {
    CHECK(m2.M(0, 0) == 2.11);
    CHECK(m2.M(1, 1) == 2.11);
    CHECK(m2.M(0, 1) == 0.0);
  }

  SUBCASE("damping collapses to the distributed coefficient") {
    CHECK(m1.C(0, 0) == doctest::Approx(0.0315).epsilon(1e-15));
    CHECK(m2.C(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(m2.K_tilde.norm() == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("damper coupling is the frozen station value and rank one") {
    CHECK(m1.C_tilde(0, 0) == doctest::Approx(8.31459452766670e-6).epsilon(1e-12));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(static_mats(4).C_tilde);
    CHECK(svd.singularValues()(0) > 0.0);
    CHECK(svd.singularValues()(1) <= 1e-14 * svd.singularValues()(0));
    CHECK(static_mats(4).C_tilde.selfadjointView<Eigen::Lower>()
              .eigenvalues()
              .minCoeff() >= -1e-18);
  }

  SUBCASE("frozen stiffness entries") {
    CHECK(m2.K(0, 0) == doctest::Approx(0.540407852980606).epsilon(1e-12));
    // K12 = rho*g*(40/9)/l for the first two sine shapes
    CHECK(m2.K(0, 1) ==
          doctest::Approx(2.11 * 9.81 * (40.0 / 9.0) / 390.0).epsilon(1e-12));
    // decomposition: distributed-weight part + end-mass part
    const double k11 = 2.11 * 9.81 * M_PI * M_PI / (2.0 * 390.0) +
                       437.5 * 9.81 * M_PI * M_PI / (390.0 * 390.0);
    CHECK(m1.K(0, 0) == doctest::Approx(k11).epsilon(1e-12));
  }

  SUBCASE("stiffness is symmetric positive definite") {
    SystemMatrices m8 = static_mats(8);
    CHECK((m8.K - m8.K.transpose()).norm() <= 1e-12 * m8.K.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m8.K);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  SUBCASE("first natural frequency matches the rope resonance") {
    Eigen::VectorXd f = natural_frequencies_hz(m1);
    CHECK(f(0) == doctest::Approx(0.0805452121376).epsilon(1e-9));
    CHECK(std::abs(f(0) - 0.0805) <= 0.002);
  }

  SUBCASE("analytic and quadrature assembly agree") {
    SystemMatrices qa = static_mats(8, AssemblyPath::analytic);
    SystemMatrices qq = static_mats(8, AssemblyPath::quadrature);
    CHECK((qa.K - qq.K).norm() <= 1e-9 * qa.K.norm());
    CHECK((qa.C - qq.C).norm() <= 1e-9 * qa.C.norm() + 1e-15);
    CHECK((qa.C_tilde - qq.C_tilde).norm() <= 1e-9 * qa.C_tilde.norm());
    CHECK((qa.int_psi - qq.int_psi).norm() <= 1e-9);
    CHECK((qa.int_psi_xi - qq.int_psi_xi).norm() <= 1e-9);
  }

  SUBCASE("assembly is deterministic") {
    SystemMatrices again = static_mats(2);
    CHECK((again.K - m2.K).norm() == 0.0);
    CHECK((again.C - m2.C).norm() == 0.0);
  }

  SUBCASE("non-orthonormal basis is rejected") {
    auto bad = ModalBasis::custom(
        2, [](int j, double xi) { return 2.0 * std::sqrt(2.0) * std::sin(j * M_PI * xi); },
        [](int j, double xi) {
          return 2.0 * std::sqrt(2.0) * j * M_PI * std::cos(j * M_PI * xi);
        });
    CHECK_THROWS_AS(assemble_matrices(table_params(), KinematicState{}, bad),
                    ConfigError);
  }
}

TEST_CASE("basis integral moments") {
  SystemMatrices m1 = static_mats(1);
  CHECK(m1.int_psi(0) == doctest::Approx(2.0 * std::sqrt(2.0) / M_PI).epsilon(1e-14));
  CHECK(m1.int_psi(0) == doctest::Approx(0.900316316157106).epsilon(1e-13));
  CHECK(m1.int_psi_xi(0) == doctest::Approx(std::sqrt(2.0) / M_PI).epsilon(1e-14));
  CHECK(m1.int_psi_xi(0) == doctest::Approx(0.450158158078553).epsilon(1e-13));
  SystemMatrices m2 = static_mats(2);
  CHECK(m2.int_psi(1) == doctest::Approx(0.0).epsilon(1e-14));  // even shape
}

TEST_CASE("forcing vectors") {
  RopeParams p = table_params();
  KinematicState kin;
  SystemMatrices m1 = static_mats(1);

  SUBCASE("zero disturbance forces nothing") {
    Forcing f = eval_forcing(m1, DisturbanceProfile::zero(), 5.0);
    CHECK(f.F.norm() == 0.0);
    CHECK(f.F_tilde.norm() == 0.0);
  }

  SUBCASE("first-mode force matches the closed-form expression") {
    auto dist = DisturbanceProfile::sinusoid(0.2, 0.08);
    const double t = 0.6;
    STerms s = s_terms(p, kin, dist.boundary_motion(p, t));
    auto bm = dist.boundary_motion(p, t);
    const double sl = std::sqrt(p.l);
    const double expect =
        -p.l * sl * (p.rho * s.s1 + p.c_p * s.s2) * (std::sqrt(2.0) / M_PI) +
        sl * (s.s4 - p.rho * bm.f1_ddot) * (2.0 * std::sqrt(2.0) / M_PI);
    Forcing f = eval_forcing(m1, dist, t);
    CHECK(f.F(0) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("damper-channel forcing vanishes with the boundary velocities") {
    // phase pi/2 puts both boundary velocities at zero when t = 0
    auto dist = DisturbanceProfile::sinusoid(0.2, 0.08, M_PI / 2.0);
    Forcing f = eval_forcing(m1, dist, 0.0);
    CHECK(f.F_tilde.norm() == doctest::Approx(0.0).epsilon(1e-15));
    Forcing g = eval_forcing(m1, DisturbanceProfile::sinusoid(0.2, 0.08), 0.0);
    CHECK(g.F_tilde.norm() > 0.0);
  }
}

TEST_CASE("physical sway reconstruction") {
  RopeParams p = table_params();
  ModalBasis basis = ModalBasis::sine(1);
  auto dist = DisturbanceProfile::zero();
  Eigen::VectorXd q(1);
  q << 20.0;

  CHECK(sway_at(0.0, q, p, basis, dist, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sway_at(195.0, q, p, basis, dist, 0.0) ==
        doctest::Approx(1.43222974807887).epsilon(1e-13));
  CHECK(sway_at(195.0, q, p, basis, dist, 0.0) ==
        doctest::Approx(20.0 * std::sqrt(2.0) / std::sqrt(390.0)).epsilon(1e-13));

  SUBCASE("boundary values follow the disturbance, not the modes") {
    auto sin_dist = DisturbanceProfile::sinusoid(0.2, 0.08);
    const double t = 2.25;
    auto bm = sin_dist.boundary_motion(p, t);
    CHECK(sway_at(0.0, q, p, basis, sin_dist, t) ==
          doctest::Approx(bm.f1).epsilon(1e-13));
    CHECK(sway_at(p.l, q, p, basis, sin_dist, t) ==
          doctest::Approx(bm.f2).epsilon(1e-13));
  }

  SUBCASE("outside the rope is a domain error") {
    CHECK_THROWS_AS(sway_at(-0.5, q, p, basis, dist, 0.0), DomainError);
    CHECK_THROWS_AS(sway_at(p.l + 0.5, q, p, basis, dist, 0.0), DomainError);
  }
}

TEST_CASE("parameter validation") {
  RopeParams p = table_params();
  SUBCASE("rope longer than the hoistway") {
    p.l = 500.0;
    CHECK_THROWS_WITH_AS(p.validate(), "rope.l must be <= rope.H", ConfigError);
  }
  SUBCASE("damper above the suspension point") {
    p.l_dp = p.l + 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  SUBCASE("moving-length kinematics are rejected") {
    KinematicState kin;
    kin.l_dot = 1.0;
    CHECK_THROWS_AS(kin.validate(), ConfigError);
  }
}

TEST_CASE("orthonormality of the sine family") {
  GaussLegendre quad;
  CHECK(ModalBasis::sine(8).orthonormality_error(quad) <= 1e-10);
  CHECK_NOTHROW(ModalBasis::sine(8).validate(quad));
}
