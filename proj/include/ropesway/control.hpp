#pragma once

#include <Eigen/Dense>

#include "ropesway/modal_state.hpp"
#include "ropesway/system_matrices.hpp"

namespace ropesway {

enum class ControllerMode { none, passive, thm1, thm2 };

// Semi-active damper settings. The damper can only dissipate, so every law
// here returns a nonnegative damping coefficient bounded by u_max.
struct ControllerConfig {
  ControllerMode mode = ControllerMode::none;
  double u_max = 1e9;        // hard actuator cap [N·s/m]
  double k_const = 0.0;      // fixed level for the passive baseline [N·s/m]
  double u_max_p = 0.0;      // nominal-term cap for thm2 [N·s/m]
  double v1_max = 0.0;       // first reconstruction-term cap [N·s/m]
  double v2_max = 0.0;       // second reconstruction-term cap [N·s/m]
  double F_max = 0.0;        // assumed bound on |F(t)| [N]
  double F_tilde_max = 0.0;  // assumed bound on |F_tilde(t)| [-]

  // Throws ConfigError on negative bounds, or when the thm2 budget
  // u_max_p + v1_max + v2_max exceeds u_max.
  void validate() const;
};

// Per-sample internals of the disturbance-rejecting law, exposed so runs can
// log the bound terms and set membership alongside the state.
struct ControlDiagnostics {
  double x = 0.0;  // switching functional q̇ᵀC̃q̇ (≥ 0)
  double u_nom = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double T1 = 0.0;  // disturbance-scale factors multiplying x in v1/v2
  double T2 = 0.0;
  double B1 = 0.0;  // additive terms of the guaranteed dV/dt upper bound
  double B2 = 0.0;
  bool in_S1 = true;
  bool in_S2 = true;
};

// q̇ᵀC̃q̇ — the dissipation rate seen by the damper, and the quantity every
// feedback law saturates on. Nonnegative because C̃ is a Gram matrix.
double switching_functional(const SystemMatrices& mats,
                            const Eigen::VectorXd& qd);

// U = u_max·x/√(1+x²): smooth saturation of the measured dissipation rate.
double control_thm1(const ModalState& state, const SystemMatrices& mats,
                    const ControllerConfig& cfg);

// Nominal law at level u_max_p plus two reconstruction terms sized to
// dominate bounded disturbances; fills diagnostics when given.
double control_thm2(const ModalState& state, const SystemMatrices& mats,
                    const ControllerConfig& cfg,
                    ControlDiagnostics* diag = nullptr);

// Dispatch on cfg.mode (none → 0, passive → clamp(k_const)).
double control_command(const ModalState& state, const SystemMatrices& mats,
                       const ControllerConfig& cfg,
                       ControlDiagnostics* diag = nullptr);

// V = ½q̇ᵀMq̇ + ½qᵀKq for the fixed-length model (K constant, SPD).
double lyapunov_V(const ModalState& state, const SystemMatrices& mats);

struct VdotPair {
  double actual = 0.0;  // dV/dt along the dynamics with the given U, F, F̃
  double bound = 0.0;   // guaranteed upper bound for the active law
};

// Evaluates dV/dt = −q̇ᵀCq̇ − xU + q̇ᵀ(F + F̃U) and the decrement bound each
// law certifies: −u_max·x²/√(1+x²) for thm1, B1+B2 for thm2. The bound is
// only a guarantee when |F| ≤ F_max and |F̃| ≤ F_tilde_max.
VdotPair lyapunov_Vdot_bound(const ModalState& state,
                             const SystemMatrices& mats, double U,
                             const Forcing& forcing,
                             const ControllerConfig& cfg);

struct SetMembership {
  bool in_S1 = true;
  bool in_S2 = true;
  double lhs_S1 = 0.0;  // x²/√(1+T1²x²), compared against 1/v1_max
  double lhs_S2 = 0.0;  // x²/√(1+T2²x²), compared against 1/v2_max
};

// Residual-set predicates for the disturbance-rejecting law. A zero cap
// makes the corresponding threshold +∞, i.e. the whole state space.
SetMembership invariant_set_membership(const ModalState& state,
                                       const SystemMatrices& mats,
                                       const ControllerConfig& cfg);

}  // namespace ropesway
