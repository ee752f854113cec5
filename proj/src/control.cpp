#include "ropesway/control.hpp"

#include <algorithm>
#include <cmath>

#include "ropesway/errors.hpp"

namespace ropesway {
namespace {

// x / sqrt(1 + x^2), evaluated without overflow for large x.
double smooth_sat(double x) { return x / std::hypot(1.0, x); }

void require_nonneg(double v, const char* key) {
  if (!(v >= 0.0)) throw ConfigError(std::string(key) + " must be >= 0");
}

}  // namespace

void ControllerConfig::validate() const {
  require_nonneg(u_max, "controller.u_max");
  require_nonneg(k_const, "controller.k_const");
  require_nonneg(u_max_p, "controller.u_max_p");
  require_nonneg(v1_max, "controller.v1_max");
  require_nonneg(v2_max, "controller.v2_max");
  require_nonneg(F_max, "controller.F_max");
  require_nonneg(F_tilde_max, "controller.F_tilde_max");
  if (mode == ControllerMode::thm2 && u_max_p + v1_max + v2_max > u_max)
    throw ConfigError(
        "controller.u_max_p + v1_max + v2_max must not exceed "
        "controller.u_max");
}

double switching_functional(const SystemMatrices& mats,
                            const Eigen::VectorXd& qd) {
  // C̃ = ψψᵀ/l, so this is (ψᵀq̇)²/l; clamp tiny negative round-off.
  return std::max(0.0, qd.dot(mats.C_tilde * qd));
}

double control_thm1(const ModalState& state, const SystemMatrices& mats,
                    const ControllerConfig& cfg) {
  const double x = switching_functional(mats, state.qd);
  return cfg.u_max * smooth_sat(x);
}

double control_thm2(const ModalState& state, const SystemMatrices& mats,
                    const ControllerConfig& cfg, ControlDiagnostics* diag) {
  const double x = switching_functional(mats, state.qd);
  const double speed = state.qd.norm();

  const double u_nom = cfg.u_max_p * smooth_sat(x);
  const double T1 = cfg.F_tilde_max * speed * (cfg.v1_max + cfg.u_max_p);
  const double T2 = cfg.F_max * speed + cfg.v2_max * cfg.F_tilde_max * speed;
  // Tᵢx/√(1+Tᵢ²x²) lies in [0,1], and evaluating the ratio before scaling
  // keeps cap · ratio from rounding one ulp past the cap.
  const double v1 = cfg.v1_max * smooth_sat(T1 * x);
  const double v2 = cfg.v2_max * smooth_sat(T2 * x);

  if (diag) {
    diag->x = x;
    diag->u_nom = u_nom;
    diag->v1 = v1;
    diag->v2 = v2;
    diag->T1 = T1;
    diag->T2 = T2;
    diag->B1 = T1 * (1.0 - cfg.v1_max * x * x / std::hypot(1.0, T1 * x));
    diag->B2 = T2 * (1.0 - cfg.v2_max * x * x / std::hypot(1.0, T2 * x));
    const SetMembership s = invariant_set_membership(state, mats, cfg);
    diag->in_S1 = s.in_S1;
    diag->in_S2 = s.in_S2;
  }
  return u_nom + v1 + v2;
}

double control_command(const ModalState& state, const SystemMatrices& mats,
                       const ControllerConfig& cfg, ControlDiagnostics* diag) {
  switch (cfg.mode) {
    case ControllerMode::none:
      if (diag) *diag = ControlDiagnostics{};
      return 0.0;
    case ControllerMode::passive:
      if (diag) *diag = ControlDiagnostics{};
      return std::clamp(cfg.k_const, 0.0, cfg.u_max);
    case ControllerMode::thm1: {
      if (diag) {
        *diag = ControlDiagnostics{};
        diag->x = switching_functional(mats, state.qd);
      }
      return control_thm1(state, mats, cfg);
    }
    case ControllerMode::thm2:
      return control_thm2(state, mats, cfg, diag);
  }
  throw ConfigError("controller.mode is not a known strategy");
}

double lyapunov_V(const ModalState& state, const SystemMatrices& mats) {
  return 0.5 * state.qd.dot(mats.M * state.qd) +
         0.5 * state.q.dot(mats.K * state.q);
}

VdotPair lyapunov_Vdot_bound(const ModalState& state,
                             const SystemMatrices& mats, double U,
                             const Forcing& forcing,
                             const ControllerConfig& cfg) {
  const double x = switching_functional(mats, state.qd);
  VdotPair out;
  // dV/dt along M q̈ = −(C+C̃U)q̇ − Kq + F + F̃U with K symmetric constant:
  // the ±qᵀKq̇ terms cancel, leaving pure dissipation plus disturbance power.
  out.actual = -state.qd.dot(mats.C * state.qd) - x * U +
               state.qd.dot(forcing.F) + U * state.qd.dot(forcing.F_tilde);

  if (cfg.mode == ControllerMode::thm2) {
    ControlDiagnostics diag;
    control_thm2(state, mats, cfg, &diag);
    out.bound = diag.B1 + diag.B2;
  } else {
    out.bound = -cfg.u_max * x * x / std::hypot(1.0, x);
  }
  return out;
}

SetMembership invariant_set_membership(const ModalState& state,
                                       const SystemMatrices& mats,
                                       const ControllerConfig& cfg) {
  const double x = switching_functional(mats, state.qd);
  const double speed = state.qd.norm();
  const double T1 = cfg.F_tilde_max * speed * (cfg.v1_max + cfg.u_max_p);
  const double T2 = cfg.F_max * speed + cfg.v2_max * cfg.F_tilde_max * speed;

  SetMembership s;
  s.lhs_S1 = x * x / std::hypot(1.0, T1 * x);
  s.lhs_S2 = x * x / std::hypot(1.0, T2 * x);
  s.in_S1 = cfg.v1_max == 0.0 || s.lhs_S1 <= 1.0 / cfg.v1_max;
  s.in_S2 = cfg.v2_max == 0.0 || s.lhs_S2 <= 1.0 / cfg.v2_max;
  return s;
}

}  // namespace ropesway
