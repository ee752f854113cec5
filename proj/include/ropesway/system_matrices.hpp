#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "ropesway/disturbance.hpp"
#include "ropesway/modal_basis.hpp"
#include "ropesway/rope_params.hpp"

namespace ropesway {

/// Quasi-static tension at height y (measured from the top): end mass plus
/// the rope weight below y, under gravity minus hoisting acceleration, plus
/// the compensating-sheave offset.
double tension(const RopeParams& p, const KinematicState& kin, double y);

/// Boundary-motion source terms shared by the forcing vector and the
/// distributed-model right-hand side. s1/s2 are the second/first time
/// derivatives of (f2 - f1)/l, s3 the quasi-static end-to-end slope, and s4
/// collects the transport terms. G is the effective gradient coefficient
/// rho*g + c_p*l_dot (the rho*a and tension-gradient parts cancel).
struct STerms {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, G = 0.0;
};

STerms s_terms(const RopeParams& p, const KinematicState& kin,
               const BoundaryMotion& bm);

enum class AssemblyPath { automatic, analytic, quadrature };

/// Coefficient matrices of the reduced modal model
///
///   M qdd + (C + C~ U) qd + (K + K~ U) q = F(t) + F~(t) U,
///
/// where U >= 0 is the semi-active damper coefficient. M is exactly rho*I
/// for an orthonormal basis; C~ is the rank-one damper coupling
/// psi(xi_dp) psi(xi_dp)^T / l. K~ and the velocity terms of C/K vanish at
/// constant suspended length but are assembled from the full expressions.
struct SystemMatrices {
  Eigen::MatrixXd M, C, C_tilde, K, K_tilde;
  Eigen::VectorXd psi_dp;      // basis values at the damper station
  Eigen::VectorXd int_psi;     // \int_0^1 psi_i dxi
  Eigen::VectorXd int_psi_xi;  // \int_0^1 psi_i xi dxi
  RopeParams params;
  KinematicState kin;
  ModalBasis basis;

  int modes() const { return static_cast<int>(M.rows()); }
};

/// Assemble the modal matrices. `automatic` uses the closed-form integrals
/// for the sine family and 64-node Gauss-Legendre quadrature otherwise; the
/// two routes agree to ~1e-12 relative and are cross-checked in the tests.
SystemMatrices assemble_matrices(const RopeParams& p, const KinematicState& kin,
                                 const ModalBasis& basis,
                                 AssemblyPath path = AssemblyPath::automatic);

struct Forcing {
  Eigen::VectorXd F;        // direct boundary-motion forcing
  Eigen::VectorXd F_tilde;  // forcing proportional to the damper setting U
};

/// Forcing vectors at time t for the given boundary disturbance.
Forcing eval_forcing(const SystemMatrices& mats, const DisturbanceProfile& dist,
                     double t);

/// Physical lateral displacement at station y in [0, l]: modal sum plus the
/// boundary interpolation term, honouring u(0) = f1 and u(l) = f2.
double sway_at(double y, const Eigen::VectorXd& q, const RopeParams& p,
               const ModalBasis& basis, const BoundaryMotion& bm);

double sway_at(double y, const Eigen::VectorXd& q, const RopeParams& p,
               const ModalBasis& basis, const DisturbanceProfile& dist,
               double t);

/// Row-major CSV dump of all five matrices for debugging.
void matrices_to_csv(const SystemMatrices& mats, std::ostream& os);

/// Undamped small-oscillation frequencies [Hz], ascending: square roots of
/// the generalized eigenvalues of (K, M) over 2*pi. Static configuration
/// only (K symmetric positive definite).
Eigen::VectorXd natural_frequencies_hz(const SystemMatrices& mats);

}  // namespace ropesway
