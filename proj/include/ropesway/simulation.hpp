#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ropesway/actuator.hpp"
#include "ropesway/control.hpp"
#include "ropesway/disturbance.hpp"
#include "ropesway/modal_state.hpp"
#include "ropesway/sensors.hpp"
#include "ropesway/system_matrices.hpp"

namespace ropesway {

// Time-dependent right-hand side supplier so the integrator can sample the
// forcing at substep times.
using ForcingFn = std::function<Forcing(double)>;

// One classical 4th-order Runge–Kutta step of
//   q̈ = M⁻¹(F + F̃U − (C + C̃U)q̇ − (K + K̃U)q)
// with the damping coefficient U held constant across the step.
// Throws IntegrationError (carrying step_index) if the state leaves ℝ.
ModalState step(const ModalState& state, const SystemMatrices& mats,
                double u_applied, const ForcingFn& forcing, double dt,
                long step_index = 0);
ModalState step(const ModalState& state, const SystemMatrices& mats,
                double u_applied, const Forcing& constant_forcing, double dt,
                long step_index = 0);

enum class Scenario { impulse, sustained, custom };

// Loop shape for a closed-loop run. Realism switches live on SensorModel
// (noise_amplitude) and ActuatorModel (enabled).
struct SimOptions {
  double dt = 1e-3;          // integrator step [s]
  double dt_control = 0.01;  // feedback sampling interval [s]
  double duration = 200.0;   // [s]
  double probe_y = 195.0;    // sway recording station [m]
  int record_stride = 10;    // integrator steps between recorded rows
  Eigen::VectorXd q0, qd0;   // initial modal state (empty → zeros)

  // Throws ConfigError unless dt, dt_control, duration are positive,
  // dt_control is an integer multiple of dt, and record_stride ≥ 1.
  void validate() const;
  int steps_per_control() const;
  long total_steps() const;
};

// Scalar metrics tracked over every integrator step (not just recorded rows).
struct SimSummary {
  double peak_sway = 0.0;    // max |sway(probe)| over the whole run
  double steady_max = 0.0;   // max |sway(probe)| over the trailing half
  double u_applied_max = 0.0;
  double v_initial = 0.0;
  double v_final = 0.0;
};

// Recorded trajectory. Rows are written every record_stride integrator steps
// (plus the final step); u columns hold the zero-order-held control values.
struct SimResult {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> q, qd;
  std::vector<double> sway_probe;
  std::vector<double> u_cmd, u_app;
  std::vector<double> v;           // Lyapunov value along the true state
  std::vector<double> vdot_bound;  // active law's guaranteed dV/dt bound
  std::vector<std::uint8_t> in_s1, in_s2;

  int modes = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double dt_control = 0.0;
  double probe_y = 0.0;
  std::string scenario;
  SimSummary summary;

  std::size_t rows() const { return t.size(); }
};

// Everything a closed-loop run needs.
struct ScenarioSpec {
  RopeParams params;
  KinematicState kin;
  int modes = 2;
  DisturbanceProfile disturbance = DisturbanceProfile::zero();
  ControllerConfig controller;
  SensorModel sensors;  // empty positions → default stations
  ActuatorModel actuator;
  SimOptions options;
  std::string name = "custom";
};

// Closed loop: per control sample, measure → reconstruct → control →
// actuate, then hold the applied U over the integrator substeps.
SimResult run_scenario(const ScenarioSpec& spec);

// Canonical experiment setups; overrides applied by the caller afterwards.
// The impulse test releases the rope from a first-mode deflection with the
// distributed damping zeroed; the sustained test shakes the upper boundary
// at the rope's fundamental frequency.
ScenarioSpec impulse_scenario();
ScenarioSpec sustained_scenario();

}  // namespace ropesway
