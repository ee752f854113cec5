#pragma once

#include <functional>
#include <vector>

#include "ropesway/disturbance.hpp"
#include "ropesway/rope_params.hpp"
#include "ropesway/simulation.hpp"

namespace ropesway {

enum class DiracShape { single_cell, hat };

// Spatial/temporal resolution of the finite-difference rope model.
struct FdOptions {
  int n_cells = 400;
  double cfl = 0.9;      // fraction of the stability limit used for auto dt
  double dt_pde = 0.0;   // 0 → derived from the CFL bound
  DiracShape dirac = DiracShape::single_cell;
};

// Explicit leapfrog solver for the damped string with height-dependent
// tension and a point damper:
//
//   rho w_tt = d/dy(T(y) w_y) - c_p w_t - U δ(y - (l - l_dp)) w_t + S(y, t)
//
// with w = 0 at both ends; S collects the boundary-motion terms produced by
// lifting the inhomogeneous end conditions into the interior. The Dirac is
// regularized over one cell (weight 1/dy) or a three-cell hat. Used as an
// independent cross-check of the modal reduction — it shares no assembly
// code with it.
class PdeSolver {
 public:
  PdeSolver(const RopeParams& params, const KinematicState& kin,
            const FdOptions& opts, const DisturbanceProfile& dist);

  // Nodal initial data; v0 is the initial transverse velocity field.
  void set_initial(const std::function<double(double)>& w0,
                   const std::function<double(double)>& v0);

  // Advance one step with the damper coefficient held at U.
  void advance(double U);

  double time() const { return t_; }
  double dt() const { return dt_; }
  double dy() const { return dy_; }
  int n_cells() const { return n_; }
  const std::vector<double>& w() const { return w_; }

  // Sway (modal part + boundary ramp) at station y, linearly interpolated.
  double probe(double y) const;

  // Discrete mechanical energy (kinetic + tension-strain) of the w field at
  // the PREVIOUS time level, using a centred velocity estimate; valid after
  // the first advance().
  double energy() const;
  bool energy_ready() const { return steps_ >= 1; }

  // Largest stable step for this grid: cfl * dy / sqrt(T_max / rho).
  static double cfl_limit(const RopeParams& p, const KinematicState& kin,
                          int n_cells, double cfl);

 private:
  double source(int node, double U, const BoundaryMotion& bm) const;

  RopeParams p_;
  KinematicState kin_;
  DisturbanceProfile dist_;
  int n_ = 0;
  double dy_ = 0.0, dt_ = 0.0, t_ = 0.0;
  long steps_ = 0;
  std::vector<double> w_, w_prev_, w_pprev_;
  std::vector<double> t_half_;   // T at i+1/2 midpoints
  std::vector<double> dirac_;    // regularized delta weights per node
};

// Probe-trace discrepancy between the modal model and the FD oracle on the
// same physical setup, both run open loop (U = 0).
struct PdeCompareReport {
  double peak = 0.0;      // max |modal probe|
  double linf = 0.0;      // max |modal - fd| at the probe
  double linf_rel = 0.0;  // linf / peak
  double l2_rel = 0.0;
  double tail_mode_energy_frac = 0.0;  // modal energy beyond mode 1
  std::vector<double> t, modal_trace, pde_trace;
};

// Runs both solvers from the scenario's initial state on a shared sample
// grid (interval dt_sample) and reports probe error norms.
PdeCompareReport compare_modal_vs_pde(const ScenarioSpec& scenario,
                                      const FdOptions& grid, double duration,
                                      double dt_sample = 0.01);

}  // namespace ropesway
