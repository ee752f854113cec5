#pragma once

#include <string>

#include "ropesway/errors.hpp"

namespace ropesway {

/// How the car mass enters the per-rope model. A hoist with n parallel ropes
/// shares the car weight, so the effective end mass seen by one rope is
/// m_e / n; `full` keeps the whole mass on the modelled rope.
enum class CarMassShare { full, divided_by_n };

/// Physical description of one suspension rope and its damper station.
/// Lengths in m, masses in kg, rho in kg/m, c_p in N·s/m.
struct RopeParams {
  double rho = 2.11;      // rope linear density
  double l = 390.0;       // suspended length (car position)
  double H = 402.8;       // total hoistway height
  double c_p = 0.0315;    // distributed viscous damping coefficient
  double m_e = 3500.0;    // car mass at the rope end
  double M_cs = 0.0;      // compensating-sheave mass (tension offset)
  double g = 9.81;        // gravitational acceleration
  int n_ropes = 8;        // parallel ropes sharing the car mass
  double l_dp = 5.0;      // damper height above the car attachment
  CarMassShare car_mass_share = CarMassShare::divided_by_n;

  /// Effective end mass used in tension and stiffness terms.
  double m_eff() const {
    return car_mass_share == CarMassShare::divided_by_n
               ? m_e / static_cast<double>(n_ropes)
               : m_e;
  }

  /// Dimensionless damper station measured from the top: (l - l_dp) / l.
  double xi_dp() const { return (l - l_dp) / l; }

  void validate() const {
    if (!(rho > 0.0)) throw ConfigError("rope.rho must be > 0");
    if (!(l > 0.0)) throw ConfigError("rope.l must be > 0");
    if (!(l <= H)) throw ConfigError("rope.l must be <= rope.H");
    if (!(c_p >= 0.0)) throw ConfigError("rope.c_p must be >= 0");
    if (!(m_e > 0.0)) throw ConfigError("rope.m_e must be > 0");
    if (!(M_cs >= 0.0)) throw ConfigError("rope.M_cs must be >= 0");
    if (!(g > 0.0)) throw ConfigError("rope.g must be > 0");
    if (n_ropes < 1) throw ConfigError("rope.n_ropes must be >= 1");
    if (!(l_dp > 0.0 && l_dp < l))
      throw ConfigError("rope.l_dp must lie strictly inside (0, rope.l)");
  }
};

/// Hoisting kinematics. The coefficient formulas carry l_dot / l_ddot terms,
/// but every supported scenario runs at constant suspended length, so
/// validation pins both rates to zero.
struct KinematicState {
  double l_dot = 0.0;
  double l_ddot = 0.0;

  void validate() const {
    if (l_dot != 0.0 || l_ddot != 0.0)
      throw ConfigError(
          "kinematics.l_dot/l_ddot must be 0 (moving-length runs are not "
          "supported)");
  }
};

}  // namespace ropesway
